#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace annulus {

using cplx = std::complex<double>;

constexpr double PI = 3.14159265358979323846264338327950288;
constexpr cplx I{0.0, 1.0};

// Series/quadrature truncation bundle threaded through every evaluation.
struct TruncationPolicy {
  int series_terms = 64;
  double rel_tol = 1e-12;
  int quad_nodes = 256;

  TruncationPolicy() = default;
  TruncationPolicy(int terms, double tol, int nodes)
      : series_terms(terms), rel_tol(tol), quad_nodes(nodes) {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-4))
      throw std::invalid_argument("TruncationPolicy: rel_tol must be in (0, 1e-4]");
    if (series_terms < 8)
      throw std::invalid_argument("TruncationPolicy: series_terms must be >= 8");
    if (quad_nodes < 1)
      throw std::invalid_argument("TruncationPolicy: quad_nodes must be positive");
  }
};

struct domain_error_ex : std::runtime_error {
  explicit domain_error_ex(const std::string& m) : std::runtime_error(m) {}
};
struct pole_error : std::runtime_error {
  cplx where;
  pole_error(const std::string& m, cplx w) : std::runtime_error(m), where(w) {}
};
struct precision_error : std::runtime_error {
  explicit precision_error(const std::string& m) : std::runtime_error(m) {}
};
struct singularity_error : std::runtime_error {
  explicit singularity_error(const std::string& m) : std::runtime_error(m) {}
};
struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace annulus
