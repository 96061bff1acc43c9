#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "policy.hpp"

namespace annulus {

// Polynomial / truncated power series in z with exact coefficient arithmetic.
struct PolySeries {
  std::vector<cplx> c;  // c[k] is the coefficient of z^k

  PolySeries() = default;
  explicit PolySeries(std::vector<cplx> coeffs) : c(std::move(coeffs)) {
    if (c.size() > 33) throw domain_error_ex("PolySeries: degree must be <= 32");
  }
  static PolySeries monomial(int k, cplx a = 1.0) {
    std::vector<cplx> v(k + 1, 0.0);
    v[k] = a;
    return PolySeries(v);
  }
  int degree() const { return int(c.size()) - 1; }
  cplx eval(cplx z) const {
    cplx v = 0.0;
    for (size_t k = c.size(); k-- > 0;) v = v * z + c[k];
    return v;
  }
  PolySeries derivative() const {
    if (c.size() <= 1) return PolySeries(std::vector<cplx>{0.0});
    std::vector<cplx> d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) d[k - 1] = double(k) * c[k];
    return PolySeries(d);
  }
  PolySeries derivative(int m) const {
    PolySeries p = *this;
    for (int i = 0; i < m; ++i) p = p.derivative();
    return p;
  }
};

// Mobius map z = (a t + b)/(c t + d) with unit determinant.
struct MobiusMap {
  cplx a, b, c, d;
  MobiusMap(cplx a_, cplx b_, cplx c_, cplx d_) : a(a_), b(b_), c(c_), d(d_) {
    if (std::abs(a * d - b * c - 1.0) > 1e-14)
      throw domain_error_ex("MobiusMap: determinant must equal 1");
  }
  cplx apply(cplx t) const { return (a * t + b) / (c * t + d); }
  cplx lambda(cplx t) const { return 1.0 / (c * t + d); }  // f'(t) = lambda^2
};

// m-th Bol operator with a constant projective connection q (q = 0 on the
// disk; nonzero constants are supported through m = 4 for unit tests).
inline PolySeries bol(int m, cplx q, const PolySeries& F) {
  if (m < 0 || m > 8) throw domain_error_ex("bol: unsupported order (need 0 <= m <= 8)");
  if (q == 0.0) return F.derivative(m);
  auto add = [](const PolySeries& x, const PolySeries& y, cplx s) {
    std::vector<cplx> v(std::max(x.c.size(), y.c.size()), 0.0);
    for (size_t k = 0; k < x.c.size(); ++k) v[k] += x.c[k];
    for (size_t k = 0; k < y.c.size(); ++k) v[k] += s * y.c[k];
    return PolySeries(v);
  };
  switch (m) {
    case 0:
    case 1:
      return F.derivative(m);
    case 2:  // F'' + (q/2) F
      return add(F.derivative(2), F, 0.5 * q);
    case 3:  // F''' + 2 q F'   (q' = 0)
      return add(F.derivative(3), F.derivative(1), 2.0 * q);
    case 4:  // F'''' + 10 q F'' + 9 q^2 F   (q' = q'' = 0)
      return add(add(F.derivative(4), F.derivative(2), 10.0 * q), F, 9.0 * q * q);
    default:
      throw domain_error_ex("bol: nonzero q supported only through m = 4");
  }
}

namespace detail {

// Truncated Taylor expansion (jet) about a base point, for exact series
// composition in the covariance checks.
struct Jet {
  std::vector<cplx> a;  // a[k] = k-th Taylor coefficient
  explicit Jet(size_t order) : a(order + 1, 0.0) {}
  static Jet constant(cplx v, size_t order) {
    Jet j(order);
    j.a[0] = v;
    return j;
  }
  static Jet variable(cplx t0, size_t order) {
    Jet j(order);
    j.a[0] = t0;
    if (order >= 1) j.a[1] = 1.0;
    return j;
  }
};

inline Jet operator+(const Jet& x, const Jet& y) {
  Jet r(x.a.size() - 1);
  for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = x.a[k] + y.a[k];
  return r;
}

inline Jet operator*(cplx s, const Jet& x) {
  Jet r = x;
  for (auto& v : r.a) v *= s;
  return r;
}

inline Jet operator*(const Jet& x, const Jet& y) {
  Jet r(x.a.size() - 1);
  for (size_t i = 0; i < x.a.size(); ++i)
    for (size_t j = 0; j < y.a.size() && i + j < r.a.size(); ++j)
      r.a[i + j] += x.a[i] * y.a[j];
  return r;
}

inline Jet reciprocal(const Jet& x) {
  if (x.a[0] == 0.0) throw singularity_error("jet reciprocal: zero constant term");
  Jet r(x.a.size() - 1);
  r.a[0] = 1.0 / x.a[0];
  for (size_t k = 1; k < r.a.size(); ++k) {
    cplx s = 0.0;
    for (size_t j = 1; j <= k; ++j) s += x.a[j] * r.a[k - j];
    r.a[k] = -s / x.a[0];
  }
  return r;
}

inline Jet jet_sqrt(const Jet& x) {
  if (x.a[0] == 0.0) throw singularity_error("jet sqrt: zero constant term");
  Jet r(x.a.size() - 1);
  r.a[0] = std::sqrt(x.a[0]);
  for (size_t k = 1; k < r.a.size(); ++k) {
    cplx s = 0.0;
    for (size_t j = 1; j < k; ++j) s += r.a[j] * r.a[k - j];
    r.a[k] = (x.a[k] - s) / (2.0 * r.a[0]);
  }
  return r;
}

inline Jet jet_pow(const Jet& x, int n) {
  size_t order = x.a.size() - 1;
  Jet base = n >= 0 ? x : reciprocal(x);
  int e = n >= 0 ? n : -n;
  Jet r = Jet::constant(1.0, order);
  for (int i = 0; i < e; ++i) r = r * base;
  return r;
}

inline Jet compose_poly(const PolySeries& F, const Jet& g) {
  size_t order = g.a.size() - 1;
  Jet r = Jet::constant(0.0, order);
  for (size_t k = F.c.size(); k-- > 0;) r = r * g + Jet::constant(F.c[k], order);
  return r;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace detail

// Residual of Bol's covariance identity
//   d^m/dt^m (F(f(t)) lambda(t)^{1-m}) = F^{(m)}(f(t)) lambda(t)^{1+m}
// with the left side obtained by exact series composition.
inline double bol_covariance(int m, const MobiusMap& f, const PolySeries& F,
                             const std::vector<cplx>& sample_points) {
  if (m < 1 || m > 8) throw domain_error_ex("bol_covariance: need 1 <= m <= 8");
  double worst = 0.0;
  for (cplx t0 : sample_points) {
    if (std::abs(f.c * t0 + f.d) < 1e-10)
      throw domain_error_ex("bol_covariance: sample point at the pole of f");
    detail::Jet t = detail::Jet::variable(t0, m);
    detail::Jet den = f.c * t + detail::Jet::constant(f.d, m);
    detail::Jet lam = detail::reciprocal(den);
    detail::Jet fz = (f.a * t + detail::Jet::constant(f.b, m)) * lam;
    detail::Jet lhs_jet = detail::compose_poly(F, fz) * detail::jet_pow(lam, 1 - m);
    cplx lhs = detail::factorial(m) * lhs_jet.a[m];
    cplx rhs = F.derivative(m).eval(f.apply(t0)) * std::pow(f.lambda(t0), 1 + m);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// Negative-control variant: the substitution z = g(t) is a polynomial and
// lambda = sqrt(g') (principal branch); Bol's identity fails off the Mobius
// group for m >= 2.
inline double bol_covariance_poly(int m, const PolySeries& g, const PolySeries& F,
                                  const std::vector<cplx>& sample_points) {
  if (m < 1 || m > 8) throw domain_error_ex("bol_covariance_poly: need 1 <= m <= 8");
  PolySeries gp = g.derivative();
  double worst = 0.0;
  for (cplx t0 : sample_points) {
    detail::Jet t = detail::Jet::variable(t0, m);
    detail::Jet gz = detail::compose_poly(g, t);
    detail::Jet lam = detail::jet_sqrt(detail::compose_poly(gp, t));
    detail::Jet lhs_jet = detail::compose_poly(F, gz) * detail::jet_pow(lam, 1 - m);
    // jet_pow with negative exponent needs lam as a jet; 1-m <= 0 handled there
    cplx lhs = detail::factorial(m) * lhs_jet.a[m];
    cplx rhs = F.derivative(m).eval(g.eval(t0)) * std::pow(std::sqrt(gp.eval(t0)), 1 + m);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// weighted Bergman inner products on the unit disk, omega = 1 - |z|^2
// ---------------------------------------------------------------------------

// (z^j, z^k)_alpha = delta_jk pi Gamma(j+1) Gamma(alpha) / Gamma(j+1+alpha)
inline cplx weighted_inner(const PolySeries& f, const PolySeries& g, double alpha) {
  if (!(alpha > 0.0)) throw domain_error_ex("weighted_inner: need alpha > 0");
  cplx total = 0.0;
  size_t n = std::min(f.c.size(), g.c.size());
  for (size_t j = 0; j < n; ++j) {
    double mom = PI * std::exp(std::lgamma(j + 1.0) + std::lgamma(alpha) -
                               std::lgamma(j + 1.0 + alpha));
    total += f.c[j] * std::conj(g.c[j]) * mom;
  }
  return total;
}

// quadrature oracle: radial rule in u = 1 - r^2, exact angular integration
inline cplx weighted_inner_quad(const PolySeries& f, const PolySeries& g, double alpha,
                                int radial_nodes = 256) {
  if (!(alpha > 0.0)) throw domain_error_ex("weighted_inner_quad: need alpha > 0");
  cplx total = 0.0;
  size_t n = std::min(f.c.size(), g.c.size());
  for (size_t j = 0; j < n; ++j) {
    // 2 pi int_0^1 r^{2j+1} (1-r^2)^{alpha-1} dr = pi int_0^1 (1-u)^j u^{alpha-1} du
    double mom = 0.0;
    for (int k = 0; k < radial_nodes; ++k) {  // midpoint rule in u
      double u = (k + 0.5) / radial_nodes;
      mom += PI * std::pow(1.0 - u, double(j)) * std::pow(u, alpha - 1.0) / radial_nodes;
    }
    total += f.c[j] * std::conj(g.c[j]) * mom;
  }
  return total;
}

// Szego inner product lim_{alpha->0} alpha (f,g)_alpha = (1/2) boundary
// integral of f conj(g) dtheta = pi sum f_j conj(g_j)
inline cplx szego_inner(const PolySeries& f, const PolySeries& g) {
  cplx total = 0.0;
  size_t n = std::min(f.c.size(), g.c.size());
  for (size_t j = 0; j < n; ++j) total += PI * f.c[j] * std::conj(g.c[j]);
  return total;
}

namespace detail {

// boundary integral (1/2 pi-free) of F conj(g) e^{-i m theta} dtheta on |z|=1
inline cplx boundary_moment(const PolySeries& F, const PolySeries& g, int m,
                            int nodes = 1024) {
  cplx total = 0.0;
  for (int k = 0; k < nodes; ++k) {
    cplx z = std::exp(2.0 * PI * I * double(k) / double(nodes));
    total += F.eval(z) * std::conj(g.eval(z)) * std::pow(z, -m) * (2.0 * PI / double(nodes));
  }
  return total;
}

}  // namespace detail

// Boundary form of the Stokes identity.  On |z| = 1 the half-order factors
// (dz)^{(1-m)/2} (dzbar)^{(1+m)/2} reduce, with the canonical square root and
// a single global branch theta in [0, 2pi), to (-i)^m e^{-i m theta} dtheta;
// the phase (-i)^m cancels the i^m of the prefactor.  The remaining real
// constant per m is (m-1)!/2, pinned by the m = 1 reduction to the classical
// Stokes formula together with the monomial Beta-moment closed forms.
inline std::pair<cplx, cplx> stokes_check(int m, const PolySeries& F, const PolySeries& g) {
  if (m < 1 || m > 3) throw domain_error_ex("stokes_check: need m in {1,2,3}");
  cplx lhs = weighted_inner(bol(m, 0.0, F), g, double(m));
  cplx rhs = 0.5 * detail::factorial(m - 1) * detail::boundary_moment(F, g, m);
  return {lhs, rhs};
}

// (F,G)_{-m} by the boundary formula against (Lambda_m F, Lambda_m G)_m.
inline std::pair<cplx, cplx> isometry_check(int m, const PolySeries& F, const PolySeries& G) {
  if (m < 0 || m > 3) throw domain_error_ex("isometry_check: need m in {0,1,2,3}");
  cplx neg, pos;
  if (m == 0) {
    neg = 0.5 * detail::boundary_moment(F, G, 0);  // boundary quadrature
    pos = szego_inner(F, G);                       // closed-form alpha -> 0 limit
  } else {
    neg = 0.5 * detail::factorial(m - 1) * detail::boundary_moment(F, bol(m, 0.0, G), m);
    pos = weighted_inner(bol(m, 0.0, F), bol(m, 0.0, G), double(m));
  }
  return {neg, pos};
}

// ---------------------------------------------------------------------------
// reproducing / adjoint kernels for the weighted Dirichlet spaces
// ---------------------------------------------------------------------------

// K_m(z,zeta) = -i^{m-1}/(pi m! (m-1)!) (1 - z conj(zeta))^{m-1} log(1 - z conj(zeta))
// with the normalization F(0) = ... = F^{(m-1)}(0) = 0 (all a_j vanish).
inline cplx kernel_Km(int m, cplx z, cplx zeta) {
  if (m < 1 || m > 3) throw domain_error_ex("kernel_Km: need m in {1,2,3}");
  cplx w = 1.0 - z * std::conj(zeta);
  if (w.real() <= 0.0 && std::abs(w.imag()) < 1e-14)
    throw singularity_error("kernel_Km: argument on the log branch cut");
  cplx coef = -std::pow(I, m - 1) / (PI * detail::factorial(m) * detail::factorial(m - 1));
  return coef * std::pow(w, m - 1) * std::log(w);
}

inline cplx kernel_Lm(int m, cplx z, cplx zeta) {
  if (m < 1 || m > 3) throw domain_error_ex("kernel_Lm: need m in {1,2,3}");
  cplx w = z - zeta;
  if (std::abs(w) < 1e-13) throw singularity_error("kernel_Lm: diagonal");
  if (w.real() < 0.0 && std::abs(w.imag()) < 1e-14)
    throw singularity_error("kernel_Lm: argument on the log branch cut");
  cplx coef = -std::pow(I, m - 1) / (PI * detail::factorial(m) * detail::factorial(m - 1));
  return coef * std::pow(w, m - 1) * std::log(w);
}

// Resolvent identity for m = 2 on the unit disk (normalization F(0)=F'(0)=0):
// F(zeta) = (1/2 pi i) boundary integral of F''(z)(1 - conj(z) zeta)
//           log(1 - conj(z) zeta) z dz
inline cplx resolvent_reconstruct(const PolySeries& F, cplx zeta, int nodes = 2048) {
  if (!(std::abs(zeta) < 1.0)) throw domain_error_ex("resolvent: zeta outside disk");
  if (F.c.size() > 0 && std::abs(F.c[0]) > 1e-14)
    throw domain_error_ex("resolvent: need F(0) = 0");
  if (F.c.size() > 1 && std::abs(F.c[1]) > 1e-14)
    throw domain_error_ex("resolvent: need F'(0) = 0");
  PolySeries F2 = F.derivative(2);
  cplx total = 0.0;
  for (int k = 0; k < nodes; ++k) {
    cplx z = std::exp(2.0 * PI * I * double(k) / double(nodes));
    cplx w = 1.0 - std::conj(z) * zeta;
    cplx dz = I * z * (2.0 * PI / double(nodes));
    total += F2.eval(z) * w * std::log(w) * z * dz;
  }
  return total / (2.0 * PI * I);
}

// exact coefficient identity: Lambda_m omega^{m-1} = 0 with omega = 1 - z conj(z),
// Lambda_m acting in z with q = 0; returns the largest surviving coefficient
inline double metric_annihilation_residual(int m) {
  if (m < 2 || m > 8) throw domain_error_ex("metric_annihilation_residual: need 2 <= m <= 8");
  // omega^{m-1} = sum_k C(m-1,k) (-1)^k z^k zbar^k; store c[k] for z^k zbar^k
  int n = m - 1;
  std::vector<cplx> c(n + 1, 0.0);
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    c[k] = (k % 2 ? -binom : binom);
    binom = binom * (n - k) / (k + 1.0);
  }
  // differentiate m times in z: z^k with k <= m-1 < m dies identically
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (k >= m) {
      double fac = 1.0;
      for (int j = 0; j < m; ++j) fac *= (k - j);
      worst = std::max(worst, std::abs(c[k]) * fac);
    }
  }
  return worst;  // exact zero by degree count
}

}  // namespace annulus
