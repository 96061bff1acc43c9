#pragma once

#include <cmath>

#include "modular.hpp"
#include "policy.hpp"
#include "theta.hpp"

namespace annulus {

// Period lattice of the annulus covering: half-periods omega1 = log R (real)
// and omega2 = i*pi, modulus tau = i*pi/log R.
struct Lattice {
  double omega1;
  cplx omega2;
  cplx tau;
  cplx q;    // exp(2 pi i tau)
  cplx qt;   // exp(i pi tau), the theta nome
  cplx eta1;
  cplx eta2;
  cplx g2;
  cplx g3;
};

inline Lattice make_lattice(double R, const TruncationPolicy& pol = {}) {
  if (!(R > 1.0)) throw domain_error_ex("make_lattice: R must be > 1");
  Lattice L;
  L.omega1 = std::log(R);
  L.omega2 = I * PI;
  L.tau = I * PI / L.omega1;
  L.q = std::exp(-2.0 * PI * PI / L.omega1);
  L.qt = std::exp(-PI * PI / L.omega1);
  if (std::abs(std::pow(L.qt, 0.25)) < 1e-290)
    throw precision_error("make_lattice: R too close to 1 for binary64 theta values");
  // eta1 = -(pi^2/(12 omega1)) * th1'''(0)/th1'(0)
  L.eta1 = -(PI * PI / (12.0 * L.omega1)) * theta1_d3_over_d1_at0(L.qt, pol);
  // Legendre: eta1*omega2 - eta2*omega1 = i pi / 2
  L.eta2 = (L.eta1 * L.omega2 - I * PI / 2.0) / L.omega1;
  ModularPoint mp = make_modular(L.tau);
  EisensteinTriple E = eisenstein(mp, pol);
  double c = PI / L.omega1;
  L.g2 = std::pow(c, 4) * E.e4 / 12.0;
  L.g3 = std::pow(c, 6) * E.e6 / 216.0;
  return L;
}

namespace detail {

struct Reduced {
  cplx t0;      // representative in the centered fundamental cell
  long n1, n2;  // t = t0 + 2 n1 omega1 + 2 n2 omega2
};

inline Reduced reduce_to_cell(cplx t, const Lattice& L) {
  long n1 = std::lround(t.real() / (2.0 * L.omega1));
  long n2 = std::lround(t.imag() / (2.0 * PI));
  return {t - 2.0 * double(n1) * L.omega1 - 2.0 * double(n2) * L.omega2, n1, n2};
}

}  // namespace detail

// Weierstrass P-function for the annulus lattice, via theta quotients.
inline cplx wp(cplx t, const Lattice& L, const TruncationPolicy& pol = {}) {
  auto red = detail::reduce_to_cell(t, L);
  if (std::abs(red.t0) < 1e-10) throw pole_error("wp: lattice point", t - red.t0);
  cplx v = PI * red.t0 / (2.0 * L.omega1);
  Theta1Values th = theta1_all(v, L.qt, pol);
  cplx c = PI / (2.0 * L.omega1);
  cplx lr = th.t1 / th.t0;
  return -L.eta1 / L.omega1 - c * c * (th.t2 / th.t0 - lr * lr);
}

inline cplx wp_prime(cplx t, const Lattice& L, const TruncationPolicy& pol = {}) {
  auto red = detail::reduce_to_cell(t, L);
  if (std::abs(red.t0) < 1e-10) throw pole_error("wp_prime: lattice point", t - red.t0);
  cplx v = PI * red.t0 / (2.0 * L.omega1);
  Theta1Values th = theta1_all(v, L.qt, pol);
  cplx c = PI / (2.0 * L.omega1);
  cplx r1 = th.t1 / th.t0, r2 = th.t2 / th.t0, r3 = th.t3 / th.t0;
  return -c * c * c * (r3 - 3.0 * r2 * r1 + 2.0 * r1 * r1 * r1);
}

inline cplx w_zeta(cplx t, const Lattice& L, const TruncationPolicy& pol = {}) {
  auto red = detail::reduce_to_cell(t, L);
  if (std::abs(red.t0) < 1e-10) throw pole_error("w_zeta: lattice point", t - red.t0);
  cplx v = PI * red.t0 / (2.0 * L.omega1);
  Theta1Values th = theta1_all(v, L.qt, pol);
  cplx val = L.eta1 * red.t0 / L.omega1 + (PI / (2.0 * L.omega1)) * th.t1 / th.t0;
  return val + 2.0 * double(red.n1) * L.eta1 + 2.0 * double(red.n2) * L.eta2;
}

inline cplx w_sigma(cplx t, const Lattice& L, const TruncationPolicy& pol = {}) {
  auto red = detail::reduce_to_cell(t, L);
  cplx v = PI * red.t0 / (2.0 * L.omega1);
  Theta1Values th = theta1_all(v, L.qt, pol);
  Theta1Values th0 = theta1_all(0.0, L.qt, pol);
  cplx s0 = (2.0 * L.omega1 / PI) * std::exp(L.eta1 * red.t0 * red.t0 / (2.0 * L.omega1)) *
            (th.t0 / th0.t1);
  if (red.n1 == 0 && red.n2 == 0) return s0;
  double sgn = ((red.n1 + red.n2 + red.n1 * red.n2) % 2 == 0) ? 1.0 : -1.0;
  cplx shift = 2.0 * double(red.n1) * L.eta1 + 2.0 * double(red.n2) * L.eta2;
  cplx mid = red.t0 + double(red.n1) * L.omega1 + double(red.n2) * L.omega2;
  return sgn * std::exp(shift * mid) * s0;
}

// Scalar representative of the prime form of A(1,R) on the covering:
//   E(z,a) = sigma(log(z/a)) exp(-eta1 (log(z/a))^2 / (2 log R))
inline cplx prime_form_cover(cplx t, cplx u, const Lattice& L,
                             const TruncationPolicy& pol = {}) {
  cplx d = t - u;
  return w_sigma(d, L, pol) * std::exp(-L.eta1 * d * d / (2.0 * L.omega1));
}

}  // namespace annulus
