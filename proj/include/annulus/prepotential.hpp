#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "policy.hpp"

namespace annulus {

// Context for u'' + Q(z) u / 2 = 0 with a known first solution carrying
// exact first and second derivatives (no finite differences inside the ODE).
struct ODEContext {
  std::function<cplx(cplx)> Q;
  std::function<cplx(cplx)> u1, u1p, u1pp;
  std::function<cplx(cplx)> u1_inv;  // optional explicit inverse (may be empty)
  cplx W = 1.0;                      // Wronskian of (u1, u2)
  cplx C = 0.0;                      // integration constant
};

// Q = 2, u1 = cos z; the inverse has a branch point at u = u1(0) = 1.
inline ODEContext make_cos_context(cplx W = 1.0, cplx C = 0.0) {
  ODEContext ctx;
  ctx.Q = [](cplx) { return cplx(2.0); };
  ctx.u1 = [](cplx z) { return std::cos(z); };
  ctx.u1p = [](cplx z) { return -std::sin(z); };
  ctx.u1pp = [](cplx z) { return -std::cos(z); };
  ctx.u1_inv = [](cplx u) { return std::acos(u); };
  ctx.W = W;
  ctx.C = C;
  return ctx;
}

// Q = 2, u1 = cos(z - 1): invertible at z = 0 (u1'(0) = sin 1 != 0), so both
// prepotential formulas are defined.
inline ODEContext make_shifted_cos_context(cplx W = 1.0, cplx C = 0.0) {
  ODEContext ctx;
  ctx.Q = [](cplx) { return cplx(2.0); };
  ctx.u1 = [](cplx z) { return std::cos(z - 1.0); };
  ctx.u1p = [](cplx z) { return -std::sin(z - 1.0); };
  ctx.u1pp = [](cplx z) { return -std::cos(z - 1.0); };
  ctx.u1_inv = [](cplx u) { return 1.0 - std::acos(u); };
  ctx.W = W;
  ctx.C = C;
  return ctx;
}

inline double ode_residual(const ODEContext& ctx, cplx z) {
  return std::abs(ctx.u1pp(z) + 0.5 * ctx.Q(z) * ctx.u1(z));
}

namespace detail {

// integral of W / u1^2 along the straight segment from z0 to z1
inline cplx segment_integral(const ODEContext& ctx, cplx z0, cplx z1) {
  auto f = [&](double s) {
    cplx z = z0 + s * (z1 - z0);
    return ctx.W / (ctx.u1(z) * ctx.u1(z)) * (z1 - z0);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 12,
                                                                       1e-13);
}

inline double min_u1_on_segment(const ODEContext& ctx, cplx z0, cplx z1) {
  double mn = 1e300;
  for (int k = 0; k <= 64; ++k)
    mn = std::min(mn, std::abs(ctx.u1(z0 + (k / 64.0) * (z1 - z0))));
  return mn;
}

}  // namespace detail

// integral of W dzeta / u1(zeta)^2 from 0 to z; if u1 comes close to zero on
// the straight path one deformation through a raised midpoint is attempted
inline cplx wronskian_path_integral(const ODEContext& ctx, cplx z) {
  if (detail::min_u1_on_segment(ctx, 0.0, z) > 1e-3)
    return detail::segment_integral(ctx, 0.0, z);
  cplx mid = 0.5 * z + cplx(0.0, 0.4);
  if (detail::min_u1_on_segment(ctx, 0.0, mid) > 1e-3 &&
      detail::min_u1_on_segment(ctx, mid, z) > 1e-3)
    return detail::segment_integral(ctx, 0.0, mid) + detail::segment_integral(ctx, mid, z);
  throw solver_error("wronskian_path_integral: u1 vanishes on the integration path");
}

// u2(z) = u1(z) (integral + C)
inline cplx second_solution(const ODEContext& ctx, cplx z) {
  return ctx.u1(z) * (wronskian_path_integral(ctx, z) + ctx.C);
}

// inverse of u1, by the supplied handle or by Newton from z = 0
inline cplx u1_inverse(const ODEContext& ctx, cplx u) {
  if (ctx.u1_inv) return ctx.u1_inv(u);
  cplx z = 0.0;
  for (int it = 0; it < 100; ++it) {
    cplx d = ctx.u1p(z);
    if (std::abs(d) < 1e-12) throw solver_error("u1_inverse: derivative vanishes");
    cplx step = (ctx.u1(z) - u) / d;
    z -= step;
    if (std::abs(step) < 1e-14) return z;
  }
  throw solver_error("u1_inverse: Newton iteration did not converge");
}

// prepotential, contact-geometry form:
// F(u) = (1/2)(u^2 Int_0^{u1^{-1}(u)} W/u1^2 + C u^2 - W u1^{-1}(u))
inline cplx prepotential_F(const ODEContext& ctx, cplx u) {
  if (std::abs(u - ctx.u1(0.0)) < 1e-9)
    throw domain_error_ex("prepotential_F: branch point at u = u1(0)");
  cplx zs = u1_inverse(ctx, u);
  return 0.5 * (u * u * wronskian_path_integral(ctx, zs) + ctx.C * u * u - ctx.W * zs);
}

// Faraggi-Matone form: F(u) = u^2 ( Int_{u1(0)}^{u} W u1^{-1}(eta)/eta^3 deta + C/2 );
// requires u1'(0) != 0 so that the inverse is single-valued near u1(0)
inline cplx prepotential_F_alt(const ODEContext& ctx, cplx u) {
  if (std::abs(ctx.u1p(0.0)) < 1e-12)
    throw domain_error_ex("prepotential_F_alt: needs u1'(0) != 0");
  cplx u0 = ctx.u1(0.0);
  auto f = [&](double s) {
    cplx eta = u0 + s * (u - u0);
    return ctx.W * u1_inverse(ctx, eta) / (eta * eta * eta) * (u - u0);
  };
  cplx integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 12, 1e-13);
  return u * u * (integral + 0.5 * ctx.C);
}

// residual of F''' = (Q / 2 W^2)(u F'' - F')^3, with the derivatives of F by
// Richardson-extrapolated central differences (steps h and h/2, h = 1e-3)
inline cplx third_order_residual(const ODEContext& ctx, cplx u) {
  if (std::abs(u - ctx.u1(0.0)) < 0.05)
    throw domain_error_ex("third_order_residual: too close to the branch point");
  auto F = [&](cplx x) { return prepotential_F(ctx, x); };
  auto derivs = [&](double h) {
    cplx f2 = F(u + 2.0 * h), f1 = F(u + h), fm1 = F(u - h), fm2 = F(u - 2.0 * h);
    cplx d1 = (f2 * (-1.0) + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h);
    cplx d2 = (-f2 + 16.0 * f1 - 30.0 * F(u) + 16.0 * fm1 - fm2) / (12.0 * h * h);
    cplx d3 = (f2 - 2.0 * f1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
    return std::array<cplx, 3>{d1, d2, d3};
  };
  const double h = 1e-3;
  auto a = derivs(h), b = derivs(0.5 * h);
  // the 4th/5th-order stencils above have O(h^4) error; Richardson removes it
  cplx d1 = (16.0 * b[0] - a[0]) / 15.0;
  cplx d2 = (16.0 * b[1] - a[1]) / 15.0;
  cplx d3 = (4.0 * b[2] - a[2]) / 3.0;  // the d3 stencil is O(h^2)
  cplx q = ctx.Q(u1_inverse(ctx, u));
  cplx rhs = q / (2.0 * ctx.W * ctx.W) * std::pow(u * d2 - d1, 3);
  return d3 - rhs;
}

// exact Schwarzian {t, z}_2 of t = u2/u1 from the solution handles:
// t' = W/u1^2, t'' = -2W u1'/u1^3, t''' = -2W(u1'' u1 - 3 u1'^2)/u1^4
inline cplx schwarzian_t(const ODEContext& ctx, cplx z) {
  cplx u = ctx.u1(z), up = ctx.u1p(z), upp = ctx.u1pp(z);
  cplx t1 = ctx.W / (u * u);
  cplx t2 = -2.0 * ctx.W * up / (u * u * u);
  cplx t3 = -2.0 * ctx.W * (upp * u - 3.0 * up * up) / (u * u * u * u);
  return t3 / t1 - 1.5 * (t2 / t1) * (t2 / t1);
}

}  // namespace annulus
