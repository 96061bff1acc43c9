#pragma once

#include <cmath>

#include "elliptic.hpp"
#include "policy.hpp"

namespace annulus {

enum class GreensFormula { sigma, product, theta, primeform };

struct GreensEval {
  double value;
  GreensFormula formula;
  double est_error;
};

// The annulus A(1,R) together with its covering lattice.  The closed-form
// adjoint (L-)kernel fast path is gated on a boundary identity check run at
// construction time.
struct AnnulusDomain {
  double R;
  Lattice lattice;
  TruncationPolicy pol;
  bool L_closed_form_ok = false;  // resolved by validate_L_gate()
};

inline cplx involution_J(cplx z) {
  if (z == 0.0) throw domain_error_ex("involution_J: z = 0");
  return 1.0 / std::conj(z);
}

// harmonic measure of the inner circle |z| = 1:  u1 = (log R - log|z|)/log R
inline double harmonic_measure(cplx z, const AnnulusDomain& dom) {
  return (std::log(dom.R) - std::log(std::abs(z))) / std::log(dom.R);
}

namespace detail {

inline void check_annulus_args(cplx z, cplx a, const AnnulusDomain& dom) {
  double eps = 1e-12;
  double az = std::abs(z), aa = std::abs(a);
  if (az < 1.0 - eps || az > dom.R + eps)
    throw domain_error_ex("greens: z outside closed annulus");
  if (aa <= 1.0 + eps || aa >= dom.R - eps)
    throw domain_error_ex("greens: a must be interior");
  if (std::abs(z - a) < 1e-13) throw singularity_error("greens: z = a");
}

inline double greens_sigma(cplx z, cplx a, const AnnulusDomain& dom) {
  const Lattice& L = dom.lattice;
  cplx t = std::log(z), u = std::log(a);
  double corr = 2.0 * L.eta1.real() * t.real() * u.real() / L.omega1;
  return -std::log(std::abs(w_sigma(t - u, L, dom.pol))) +
         std::log(std::abs(w_sigma(t + std::conj(u), L, dom.pol))) - corr;
}

inline double greens_theta(cplx z, cplx a, const AnnulusDomain& dom) {
  const Lattice& L = dom.lattice;
  cplx t = std::log(z), u = std::log(a);
  cplx zm = (t - u) / (2.0 * L.omega1);
  cplx zp = (t + std::conj(u)) / (2.0 * L.omega1);
  return -std::log(std::abs(theta1(zm, L.tau, dom.pol))) +
         std::log(std::abs(theta1(zp, L.tau, dom.pol)));
}

// method of images: reflections in both circles give the factor ladder in
// powers of R^{-2n}
inline double greens_product(cplx z, cplx a, const AnnulusDomain& dom) {
  double logR = dom.lattice.omega1;
  cplx zca = z * std::conj(a);
  double G = -std::log(std::abs(z - a)) + std::log(std::abs(zca - 1.0)) -
             std::log(std::abs(z)) * std::log(std::abs(a)) / logR;
  double r2 = 1.0 / (dom.R * dom.R);
  double fac = 1.0;
  cplx za = z / a;
  for (int n = 1; n < dom.pol.series_terms * 4; ++n) {
    fac *= r2;  // R^{-2n}
    double num = std::abs(1.0 - za * fac) * std::abs(1.0 - fac / za);
    double den = std::abs(1.0 - zca * fac) * std::abs(1.0 - fac / zca);
    G -= std::log(num / den);
    if (fac * (std::abs(za) + 1.0 / std::abs(za) + std::abs(zca) + 1.0 / std::abs(zca)) <
        0.25 * dom.pol.rel_tol)
      break;
  }
  return G;
}

inline double greens_primeform(cplx z, cplx a, const AnnulusDomain& dom) {
  const Lattice& L = dom.lattice;
  cplx t = std::log(z), u = std::log(a);
  cplx E1 = prime_form_cover(t, u, L, dom.pol);
  cplx E2v = prime_form_cover(t, std::log(involution_J(a)), L, dom.pol);
  return -std::log(std::abs(E1 / E2v));
}

}  // namespace detail

inline GreensEval greens(cplx z, cplx a, const AnnulusDomain& dom,
                         GreensFormula f = GreensFormula::sigma) {
  detail::check_annulus_args(z, a, dom);
  double v = 0.0;
  switch (f) {
    case GreensFormula::sigma: v = detail::greens_sigma(z, a, dom); break;
    case GreensFormula::product: v = detail::greens_product(z, a, dom); break;
    case GreensFormula::theta: v = detail::greens_theta(z, a, dom); break;
    case GreensFormula::primeform: v = detail::greens_primeform(z, a, dom); break;
  }
  return {v, f, dom.pol.rel_tol * (1.0 + std::abs(v))};
}

// dG/dz = (1/2z) [ -zeta(t-u) + zeta(t+conj u) - 2 eta1 Re(u)/omega1 ]
inline cplx greens_dz(cplx z, cplx a, const AnnulusDomain& dom) {
  detail::check_annulus_args(z, a, dom);
  const Lattice& L = dom.lattice;
  cplx t = std::log(z), u = std::log(a);
  cplx val = -w_zeta(t - u, L, dom.pol) + w_zeta(t + std::conj(u), L, dom.pol) -
             2.0 * L.eta1 * u.real() / L.omega1;
  return val / (2.0 * z);
}

// Bergman kernel K(z,a) = (1/(pi z conj a)) (P(log(z conj a)) + eta1/log R)
inline cplx bergman_K(cplx z, cplx a, const AnnulusDomain& dom) {
  const Lattice& L = dom.lattice;
  cplx s = std::log(z * std::conj(a));
  auto red = detail::reduce_to_cell(s, L);
  if (std::abs(red.t0) < 1e-10)
    throw singularity_error("bergman_K: diagonal singularity of the double");
  return (wp(s, L, dom.pol) + L.eta1 / L.omega1) / (PI * z * std::conj(a));
}

// closed-form candidate for the adjoint kernel (validated by the boundary gate)
inline cplx schiffer_L_closed(cplx z, cplx a, const AnnulusDomain& dom) {
  const Lattice& L = dom.lattice;
  if (std::abs(z - a) < 1e-12) throw singularity_error("schiffer_L: z = a");
  return (wp(std::log(z / a), L, dom.pol) + L.eta1 / L.omega1) / (PI * z * a);
}

// default contract path: nested central differences of G
inline cplx schiffer_L_fd(cplx z, cplx a, const AnnulusDomain& dom) {
  if (std::abs(z - a) < 1e-12) throw singularity_error("schiffer_L: z = a");
  const double h = 1e-4;
  auto g = [&](cplx zz, cplx aa) { return greens(zz, aa, dom).value; };
  // d2G/(dz da) via Wirtinger 4-point stencils in each variable
  auto dGdz = [&](cplx aa) {
    double gx = (g(z + h, aa) - g(z - h, aa)) / (2 * h);
    double gy = (g(z + h * I, aa) - g(z - h * I, aa)) / (2 * h);
    return cplx(0.5 * gx, -0.5 * gy);
  };
  cplx dx = (dGdz(a + h) - dGdz(a - h)) / (2 * h);
  cplx dy = (dGdz(a + h * I) - dGdz(a - h * I)) / (2 * h);
  cplx d2 = 0.5 * dx - 0.5 * I * dy;
  return -(2.0 / PI) * d2;
}

inline cplx schiffer_L(cplx z, cplx a, const AnnulusDomain& dom) {
  return dom.L_closed_form_ok ? schiffer_L_closed(z, a, dom) : schiffer_L_fd(z, a, dom);
}

// boundary identity L(z,a) dz + conj(K(z,a) dz) = 0 for z on either circle;
// returns the max residual over 64 samples per circle
inline double schiffer_boundary_residual(const AnnulusDomain& dom, cplx a) {
  double worst = 0.0;
  for (double r : {1.0, dom.R}) {
    for (int k = 0; k < 64; ++k) {
      double th = 2.0 * PI * (k + 0.5) / 64.0;
      cplx z = r * std::exp(I * th);
      cplx dz = I * z;  // tangential direction (times dtheta)
      cplx lhs = schiffer_L_closed(z, a, dom) * dz + std::conj(bergman_K(z, a, dom) * dz);
      double scale = std::abs(bergman_K(z, a, dom) * dz) + 1.0;
      worst = std::max(worst, std::abs(lhs) / scale);
    }
  }
  return worst;
}

inline AnnulusDomain make_annulus(double R, const TruncationPolicy& pol = {}) {
  AnnulusDomain dom{R, make_lattice(R, pol), pol, false};
  // L-gate: enable the closed form only if the boundary identity holds
  cplx probe = std::sqrt(R) * std::exp(I * 0.7);
  try {
    dom.L_closed_form_ok = schiffer_boundary_residual(dom, probe) < 1e-6;
  } catch (const std::exception&) {
    dom.L_closed_form_ok = false;
  }
  return dom;
}

// Poisson kernel P(z,a) = -(1/2 pi) dG/dn at boundary z
inline double poisson(cplx z_boundary, cplx a, const AnnulusDomain& dom) {
  double az = std::abs(z_boundary);
  bool outer = std::abs(az - dom.R) < 1e-9;
  bool inner = std::abs(az - 1.0) < 1e-9;
  if (!outer && !inner) throw domain_error_ex("poisson: z must be on the boundary");
  double aa = std::abs(a);
  if (!(aa > 1.0 + 1e-12 && aa < dom.R - 1e-12))
    throw domain_error_ex("poisson: a must be interior");
  cplx n = z_boundary / az;
  if (inner) n = -n;
  double dGdn = 2.0 * (n * greens_dz(z_boundary, a, dom)).real();
  return -dGdn / (2.0 * PI);
}

// G_gamma = G + (gamma1 - 2 pi u1(z))(gamma1 - 2 pi u1(a)) / (2 pi kappa),
// kappa = flux of u1 through the inner circle, obtained by quadrature.
struct HydroContext {
  double kappa;  // \oint_{|z|=1} du1/dn ds
};

inline HydroContext hydro_context(const AnnulusDomain& dom) {
  // du1/dn on |z|=1 (outward normal points toward the origin) by central
  // differences of the harmonic extension in the radial direction
  double h = 1e-6, total = 0.0;
  int N = 64;
  for (int k = 0; k < N; ++k) {
    double th = 2.0 * PI * k / N;
    cplx z = std::exp(I * th);
    double d = (harmonic_measure((1.0 - h) * z, dom) - harmonic_measure((1.0 + h) * z, dom)) /
               (2.0 * h);
    total += d * (2.0 * PI / N);
  }
  return {total};
}

inline double hydrodynamic_greens(cplx z, cplx a, const AnnulusDomain& dom,
                                  double gamma0, double gamma1,
                                  const HydroContext& hc) {
  if (std::abs(gamma0 + gamma1 - 2.0 * PI) > 1e-10)
    throw domain_error_ex("hydrodynamic_greens: gamma0 + gamma1 must equal 2 pi");
  double G = greens(z, a, dom).value;
  double fz = gamma1 - 2.0 * PI * harmonic_measure(z, dom);
  double fa = gamma1 - 2.0 * PI * harmonic_measure(a, dom);
  return G + fz * fa / (2.0 * PI * hc.kappa);
}

inline double hydrodynamic_greens(cplx z, cplx a, const AnnulusDomain& dom,
                                  double gamma0, double gamma1) {
  return hydrodynamic_greens(z, a, dom, gamma0, gamma1, hydro_context(dom));
}

}  // namespace annulus
