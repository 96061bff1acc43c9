#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "policy.hpp"

namespace annulus {

// tau in the upper half-plane together with the nome q = exp(2*pi*i*tau).
struct ModularPoint {
  cplx tau;
  cplx q;
};

inline ModularPoint make_modular(cplx tau) {
  if (!(tau.imag() > 0.0)) throw domain_error_ex("make_modular: Im(tau) must be > 0");
  ModularPoint p{tau, std::exp(2.0 * PI * I * tau)};
  if (!(std::abs(p.q) < 1.0)) throw domain_error_ex("make_modular: |q| >= 1");
  return p;
}

struct EisensteinTriple {
  cplx e2, e4, e6;
};

namespace detail {

// smallest N with |q|^(N+1) * N^(k+1) / (1-|q|) < rel_tol  (weight-k series)
inline int truncation_index(double absq, int k, double rel_tol, int cap = 200000) {
  if (absq >= 1.0 - 1e-6) throw precision_error("q-series: |q| too close to 1");
  double lq = std::log(absq);
  for (int N = 1; N < cap; ++N) {
    double lt = (N + 1) * lq + (k + 1) * std::log(double(N)) - std::log1p(-absq);
    if (lt < std::log(rel_tol)) return N;
  }
  return cap;
}

// sigma_k(n) for n = 1..N
inline std::vector<double> divisor_sums(int N, int k) {
  std::vector<double> s(N + 1, 0.0);
  for (int d = 1; d <= N; ++d) {
    double dk = std::pow(double(d), double(k));
    for (int n = d; n <= N; n += d) s[n] += dk;
  }
  return s;
}

}  // namespace detail

// All q-derivatives are exact term-wise q*d/dq = (1/(2*pi*i)) d/dtau derivatives.
struct EisensteinDerivs {
  cplx e2, e2p, e2pp, e2ppp;  // E2 and its first three q d/dq derivatives
  cplx e4, e4p;
  cplx e6, e6p;
};

inline EisensteinDerivs eisenstein_derivs(const ModularPoint& p,
                                          const TruncationPolicy& pol = {}) {
  double absq = std::abs(p.q);
  int N = detail::truncation_index(absq, 9, pol.rel_tol * 1e-2);
  auto s1 = detail::divisor_sums(N, 1);
  auto s3 = detail::divisor_sums(N, 3);
  auto s5 = detail::divisor_sums(N, 5);
  EisensteinDerivs r{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0};
  cplx qn = 1.0;
  for (int n = 1; n <= N; ++n) {
    qn *= p.q;
    double dn = n;
    r.e2 += -24.0 * s1[n] * qn;
    r.e2p += -24.0 * dn * s1[n] * qn;
    r.e2pp += -24.0 * dn * dn * s1[n] * qn;
    r.e2ppp += -24.0 * dn * dn * dn * s1[n] * qn;
    r.e4 += 240.0 * s3[n] * qn;
    r.e4p += 240.0 * dn * s3[n] * qn;
    r.e6 += -504.0 * s5[n] * qn;
    r.e6p += -504.0 * dn * s5[n] * qn;
  }
  return r;
}

inline EisensteinTriple eisenstein(const ModularPoint& p, const TruncationPolicy& pol = {}) {
  auto d = eisenstein_derivs(p, pol);
  return {d.e2, d.e4, d.e6};
}

// non-holomorphic weight-2 Eisenstein series E2*(tau) = E2(tau) - 3/(pi Im tau)
inline cplx e2_star(const ModularPoint& p, const TruncationPolicy& pol = {}) {
  return eisenstein(p, pol).e2 - 3.0 / (PI * p.tau.imag());
}

// Delta = q prod (1-q^n)^24
inline cplx discriminant(const ModularPoint& p, const TruncationPolicy& pol = {}) {
  int N = detail::truncation_index(std::abs(p.q), 1, pol.rel_tol);
  cplx prod = 1.0, qn = 1.0;
  for (int n = 1; n <= N; ++n) {
    qn *= p.q;
    prod *= (1.0 - qn);
  }
  cplx p24 = prod;
  for (int i = 1; i < 24; ++i) p24 *= prod;
  return p.q * p24;
}

// (E4^3 - E6^2)/1728 evaluated through the deviation series a = E4 - 1,
// b = E6 - 1 kept as raw q-series: the direct cube/square difference loses
// all significant digits once |q| is small (both sides tend to 1).
// The combination is expanded as one q-series (its coefficients are
// 1728 times the Ramanujan tau numbers, built here by divisor-sum
// convolutions) because forming the cube/square difference numerically
// cancels up to six orders of magnitude at moderate q.
inline cplx discriminant_eisenstein(const ModularPoint& p,
                                    const TruncationPolicy& pol = {}) {
  double absq = std::abs(p.q);
  int N = detail::truncation_index(absq, 9, pol.rel_tol * 1e-2);
  auto s3 = detail::divisor_sums(N, 3);
  auto s5 = detail::divisor_sums(N, 5);
  std::vector<double> u(N + 1, 0.0), v(N + 1, 0.0);
  for (int n = 1; n <= N; ++n) {
    u[n] = 240.0 * s3[n];
    v[n] = 504.0 * s5[n];
  }
  std::vector<double> uu(N + 1, 0.0);  // coefficients of a^2
  for (int i = 1; i < N; ++i)
    for (int j = 1; i + j <= N; ++j) uu[i + j] += u[i] * u[j];
  cplx total = 0.0, qn = 1.0;
  for (int n = 1; n <= N; ++n) {
    qn *= p.q;
    double uuu = 0.0;  // coefficient of a^3 at order n
    for (int i = 1; i < n; ++i) uuu += u[i] * uu[n - i];
    double vv = 0.0;  // coefficient of b^2 at order n
    for (int i = 1; i < n; ++i) vv += v[i] * v[n - i];
    double c = 3.0 * u[n] + 2.0 * v[n] + 3.0 * uu[n] + uuu - vv;
    total += c * qn;
  }
  return total / 1728.0;
}

// eta(tau) = q^{1/24} prod (1-q^n)
inline cplx dedekind_eta(const ModularPoint& p, const TruncationPolicy& pol = {}) {
  int N = detail::truncation_index(std::abs(p.q), 1, pol.rel_tol);
  cplx prod = 1.0, qn = 1.0;
  for (int n = 1; n <= N; ++n) {
    qn *= p.q;
    prod *= (1.0 - qn);
  }
  return std::exp(2.0 * PI * I * p.tau / 24.0) * prod;
}

// Phi_rs(q) = sum_{m,n >= 1} m^r n^s q^{mn}
inline cplx phi_rs(const ModularPoint& p, int r, int s, const TruncationPolicy& pol = {}) {
  if (r < 0 || s < 0 || r + s > 12) throw domain_error_ex("phi_rs: need r,s >= 0, r+s <= 12");
  double absq = std::abs(p.q);
  int M = detail::truncation_index(absq, r + s + 1, pol.rel_tol * 1e-2);
  cplx total = 0.0;
  for (int m = 1; m <= M; ++m) {
    cplx x = std::pow(p.q, m);
    double ax = std::abs(x);
    if (ax < 1e-300) break;
    double mw = std::pow(double(m), double(r));  // outer weight scales the inner tolerance
    int Nn = detail::truncation_index(ax, s + 1, pol.rel_tol * 1e-4 / std::max(1.0, mw));
    cplx inner = 0.0, xn = 1.0;
    for (int n = 1; n <= Nn; ++n) {
      xn *= x;
      inner += std::pow(double(n), double(s)) * xn;
    }
    total += mw * inner;
  }
  return total;
}

// Residuals of the closed first-order system for (E2, E4, E6) under q d/dq.
inline std::array<cplx, 3> ramanujan_residuals(const ModularPoint& p,
                                               const TruncationPolicy& pol = {}) {
  auto d = eisenstein_derivs(p, pol);
  return {d.e2p - (d.e2 * d.e2 - d.e4) / 12.0,
          d.e4p - (d.e2 * d.e4 - d.e6) / 3.0,
          d.e6p - (d.e2 * d.e6 - d.e4 * d.e4) / 2.0};
}

// Chazy residual E2''' - E2 E2'' + (3/2) E2'^2
inline cplx chazy_residual(const ModularPoint& p, const TruncationPolicy& pol = {}) {
  auto d = eisenstein_derivs(p, pol);
  return d.e2ppp - d.e2 * d.e2pp + 1.5 * d.e2p * d.e2p;
}

struct ModulusInvariant {
  cplx f;        // (3 E2'' + 2 E2 E2') / E2'^{3/2}, principal branch
  cplx f_prime;  // exact term-wise derivative of f in q d/dq
  cplx f_alt;    // (6 g3 - 14 a g2 + 120 a^3) / (g2 - 12 a^2)^{3/2}, a = -E2/12
  double numerator_ratio_residual;  // |(3E2''+2E2E2') + 3*(6g3-14ag2+120a^3)| rel
  double denominator_residual;      // |(g2 - 12 a^2) + E2'|
};

// The two closed expressions differ by an exact factor -3 (and the branch
// phase of the 3/2 power); both are returned together with the residuals of
// the reconciling identities  3E2''+2E2E2' = -3(6g3-14ag2+120a^3)  and
// g2-12a^2 = -E2'.
inline ModulusInvariant modulus_invariant(const ModularPoint& p,
                                          const TruncationPolicy& pol = {}) {
  auto d = eisenstein_derivs(p, pol);
  if (std::abs(d.e2p) < 1e-10) throw solver_error("modulus_invariant: E2' too close to 0");
  cplx a = -d.e2 / 12.0, g2 = d.e4 / 12.0, g3 = -d.e6 / 216.0;
  cplx num1 = 6.0 * g3 - 14.0 * a * g2 + 120.0 * a * a * a;
  cplx den1 = g2 - 12.0 * a * a;
  cplx num2 = 3.0 * d.e2pp + 2.0 * d.e2 * d.e2p;
  ModulusInvariant r;
  r.f = num2 / std::pow(d.e2p, 1.5);
  r.f_prime = (-9.0 * d.e2pp * d.e2pp + 4.0 * d.e2 * d.e2p * d.e2pp -
               5.0 * d.e2p * d.e2p * d.e2p) /
              (2.0 * std::pow(d.e2p, 2.5));
  r.f_alt = num1 / std::pow(den1, 1.5);
  r.numerator_ratio_residual = std::abs(num2 + 3.0 * num1) / std::abs(num2);
  r.denominator_residual = std::abs(den1 + d.e2p);
  return r;
}

}  // namespace annulus
