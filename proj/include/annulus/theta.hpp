#pragma once

#include <cmath>

#include "policy.hpp"

namespace annulus {

// First Jacobi theta function in the classical argument convention,
//   th1(v, qt) = 2 sum_{n>=0} (-1)^n qt^{(n+1/2)^2} sin((2n+1) v),
// together with its first three v-derivatives.  The qt^{1/4} prefactor is
// split off analytically so the reduced sum stays representable even when
// qt^{1/4} is within a few hundred orders of magnitude of underflow.
struct Theta1Values {
  cplx t0, t1, t2, t3;
};

namespace detail {

inline Theta1Values theta1_reduced(cplx v, cplx qt, const TruncationPolicy& pol) {
  // sum_{n>=0} (-1)^n qt^{n(n+1)} * { sin, cos, -sin, -cos }((2n+1) v) * (2n+1)^k
  Theta1Values r{0.0, 0.0, 0.0, 0.0};
  cplx qpow = 1.0;   // qt^{n(n+1)}
  cplx q2n = 1.0;    // qt^{2n}
  const cplx qsq = qt * qt;
  double aq = std::abs(qt);
  double aiv = std::abs(v.imag());
  double ref = 0.0;
  for (int n = 0; n < pol.series_terms; ++n) {
    if (n > 0) {
      q2n *= qsq;     // qt^{2n}
      qpow *= q2n;    // qt^{(n-1)n} -> qt^{n(n+1)}
    }
    double m = 2.0 * n + 1.0;
    cplx s = std::sin(m * v), c = std::cos(m * v);
    double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    r.t0 += sgn * qpow * s;
    r.t1 += sgn * qpow * m * c;
    r.t2 += sgn * qpow * m * m * (-s);
    r.t3 += sgn * qpow * m * m * m * (-c);
    double mag = std::pow(aq, double(n) * (n + 1)) * std::exp(m * aiv) * m * m * m;
    ref = std::max(ref, mag);
    if (mag < pol.rel_tol * ref && n >= 2) break;
  }
  return r;
}

}  // namespace detail

inline Theta1Values theta1_all(cplx v, cplx qt, const TruncationPolicy& pol = {}) {
  if (!(std::abs(qt) < 1.0)) throw domain_error_ex("theta1: |q| >= 1");
  Theta1Values r = detail::theta1_reduced(v, qt, pol);
  cplx pre = 2.0 * std::pow(qt, 0.25);
  r.t0 *= pre;
  r.t1 *= pre;
  r.t2 *= pre;
  r.t3 *= pre;
  return r;
}

// ratios of theta-constant derivatives at v = 0 (the prefactor cancels)
inline cplx theta1_d3_over_d1_at0(cplx qt, const TruncationPolicy& pol = {}) {
  Theta1Values r = detail::theta1_reduced(0.0, qt, pol);
  return r.t3 / r.t1;
}

// vartheta_1(z; tau) in the lattice convention used throughout this library:
//   vartheta_1(z; tau) = sum_n exp(i pi (n+1/2)^2 tau + 2 pi i (n+1/2)(z + 1/2))
//                      = -2 sum_{n>=0} (-1)^n qt^{(n+1/2)^2} sin((2n+1) pi z),
// qt = exp(i pi tau).  When the nome exp(2 pi i tau) is large the modular
// inversion tau -> -1/tau is applied before summing.
inline cplx theta1(cplx z, cplx tau, const TruncationPolicy& pol = {}) {
  if (!(tau.imag() > 0.0)) throw domain_error_ex("theta1: Im(tau) must be > 0");
  cplx q = std::exp(2.0 * PI * I * tau);
  if (std::abs(q) > 0.5) {
    cplx tau2 = -1.0 / tau;
    // th1(w | tau) = -i (-i tau2)^{1/2} exp(i pi tau2 w^2) th1(w tau2 | tau2)
    cplx factor = -I * std::sqrt(-I * tau2) * std::exp(I * PI * tau2 * z * z);
    return factor * theta1(z * tau2, tau2, pol);
  }
  cplx qt = std::exp(I * PI * tau);
  return -theta1_all(PI * z, qt, pol).t0;
}

// Same function from the infinite-product representation.
inline cplx theta1_product(cplx z, cplx tau, const TruncationPolicy& pol = {}) {
  if (!(tau.imag() > 0.0)) throw domain_error_ex("theta1_product: Im(tau) must be > 0");
  cplx q = std::exp(2.0 * PI * I * tau);
  cplx qt = std::exp(I * PI * tau);
  cplx prod = 1.0, qn = 1.0;
  cplx c2 = std::cos(2.0 * PI * z);
  for (int n = 1; n <= pol.series_terms * 4; ++n) {
    qn *= q;
    cplx f = (1.0 - qn) * (1.0 - 2.0 * qn * c2 + qn * qn);
    prod *= f;
    if (std::abs(qn) * (2.0 + 2.0 * std::abs(c2)) < pol.rel_tol) break;
  }
  return -2.0 * std::pow(qt, 0.25) * std::sin(PI * z) * prod;
}

// genus-1 theta function with real characteristics (delta, epsilon):
//   sum_n exp(i pi (n+delta)^2 tau + 2 pi i (n+delta)(w + epsilon))
inline cplx theta_char(double delta, double epsilon, cplx w, cplx tau,
                       const TruncationPolicy& pol = {}) {
  if (!(tau.imag() > 0.0)) throw domain_error_ex("theta_char: Im(tau) must be > 0");
  cplx total = 0.0;
  double ref = 0.0;
  for (int n = 0; n < pol.series_terms * 4; ++n) {
    double added = 0.0;
    for (int sgn : {1, -1}) {
      if (n == 0 && sgn < 0) continue;
      double m = (sgn > 0) ? double(n) : double(-n);
      cplx e = std::exp(I * PI * (m + delta) * (m + delta) * tau +
                        2.0 * PI * I * (m + delta) * (w + epsilon));
      total += e;
      added = std::max(added, std::abs(e));
    }
    ref = std::max(ref, added);
    if (n >= 2 && added < pol.rel_tol * ref) break;
  }
  return total;
}

}  // namespace annulus
