#pragma once

#include <cmath>

#include "greens.hpp"
#include "policy.hpp"

namespace annulus {

// Dirichlet eigenmodes of the flat covering cylinder (0, log R) x R/2piZ
struct EigenMode {
  int m;  // >= 1, radial index
  int n;  // angular index
  double lambda;
};

inline EigenMode eigen_mode(int m, int n, const AnnulusDomain& dom) {
  if (m < 1) throw domain_error_ex("eigen_mode: m must be >= 1");
  double w = dom.lattice.omega1;
  return {m, n, m * m * PI * PI / (w * w) + double(n) * double(n)};
}

// real eigenfunction N_n sin(m pi x / log R) cos(n y), orthonormal for the
// flat measure dx dy on the cylinder
inline double eigen_function(int m, int n, cplx z, const AnnulusDomain& dom) {
  double w = dom.lattice.omega1;
  double x = std::log(std::abs(z)), y = std::arg(z);
  double norm = (n == 0) ? 1.0 / std::sqrt(PI * w) : std::sqrt(2.0 / (PI * w));
  return norm * std::sin(m * PI * x / w) * std::cos(n * y);
}

inline double theta_greens(cplx z, cplx a, const AnnulusDomain& dom) {
  return greens(z, a, dom, GreensFormula::theta).value;
}

// truncated Dirichlet-series partial sum G^s; diagnostic only.  The angular
// sum over +-n is collapsed to a cosine.
inline double eigen_partial_sum(cplx z, cplx a, const AnnulusDomain& dom,
                                double s, int M, int N) {
  if (!(s > 1.0 && s <= 3.0)) throw domain_error_ex("eigen_partial_sum: need s in (1, 3]");
  if (M < 1 || N < 0 || M > 400 || N > 400)
    throw domain_error_ex("eigen_partial_sum: truncations out of range");
  double w = dom.lattice.omega1;
  double xz = std::log(std::abs(z)), xa = std::log(std::abs(a));
  double dy = std::arg(z) - std::arg(a);
  double total = 0.0;
  for (int m = 1; m <= M; ++m) {
    double mm = m * PI / w;
    double radial = std::sin(mm * xz) * std::sin(mm * xa);
    double inner = std::pow(mm * mm, -s);
    for (int n = 1; n <= N; ++n)
      inner += 2.0 * std::cos(n * dy) * std::pow(mm * mm + double(n) * n, -s);
    total += radial * inner;
  }
  return (2.0 / w) * total;
}

}  // namespace annulus
