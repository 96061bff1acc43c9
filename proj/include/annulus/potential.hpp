#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "critical.hpp"
#include "greens.hpp"

namespace annulus {

// A computation region: either the unit disk (closed-form Green's function)
// or an annulus A(1,R).
struct Region {
  bool is_disk;
  AnnulusDomain ann;  // valid only when !is_disk
};

inline Region disk_region() { return {true, {}}; }
inline Region annulus_region(const AnnulusDomain& dom) { return {false, dom}; }

inline double disk_greens(cplx z, cplx a) {
  if (std::abs(z - a) < 1e-13) throw singularity_error("disk_greens: z = a");
  if (!(std::abs(a) < 1.0)) throw domain_error_ex("disk_greens: a outside disk");
  return std::log(std::abs(1.0 - z * std::conj(a))) - std::log(std::abs(z - a));
}

inline cplx disk_greens_dz(cplx z, cplx a) {
  if (std::abs(z - a) < 1e-13) throw singularity_error("disk_greens_dz: z = a");
  return -0.5 / (z - a) - 0.5 * std::conj(a) / (1.0 - z * std::conj(a));
}

inline double region_greens(cplx z, cplx a, const Region& reg) {
  return reg.is_disk ? disk_greens(z, a) : greens(z, a, reg.ann).value;
}

inline cplx region_greens_dz(cplx z, cplx a, const Region& reg) {
  return reg.is_disk ? disk_greens_dz(z, a) : greens_dz(z, a, reg.ann);
}

inline double boundary_distance(cplx z, const Region& reg) {
  double az = std::abs(z);
  return reg.is_disk ? 1.0 - az : std::min(az - 1.0, reg.ann.R - az);
}

// ---------------------------------------------------------------------------
// potential fields u used by the trajectory / level-line machinery
// ---------------------------------------------------------------------------

enum class UFieldKind { greens, hydrodynamic };

struct UField {
  UFieldKind kind = UFieldKind::greens;
  cplx a;
  double gamma0 = 0.0;
  double gamma1 = 2.0 * PI;
  double kappa = 0.0;  // hydrodynamic flux constant (annulus only)
};

inline UField greens_field(cplx a) { return {UFieldKind::greens, a, 0.0, 2.0 * PI, 0.0}; }

inline UField hydro_field(cplx a, double gamma0, double gamma1, const AnnulusDomain& dom) {
  UField f{UFieldKind::hydrodynamic, a, gamma0, gamma1, hydro_context(dom).kappa};
  return f;
}

inline double u_value(const UField& f, cplx z, const Region& reg) {
  if (f.kind == UFieldKind::greens) return region_greens(z, f.a, reg);
  if (reg.is_disk) throw domain_error_ex("u_value: hydrodynamic field needs an annulus");
  return hydrodynamic_greens(z, f.a, reg.ann, f.gamma0, f.gamma1, HydroContext{f.kappa});
}

inline cplx u_dz(const UField& f, cplx z, const Region& reg) {
  if (f.kind == UFieldKind::greens) return region_greens_dz(z, f.a, reg);
  if (reg.is_disk) throw domain_error_ex("u_dz: hydrodynamic field needs an annulus");
  // d/dz of (gamma1 - 2 pi u1(z)) fa / (2 pi kappa),  du1/dz = -1/(2 z log R)
  double logR = reg.ann.lattice.omega1;
  double fa = f.gamma1 - 2.0 * PI * harmonic_measure(f.a, reg.ann);
  return greens_dz(z, f.a, reg.ann) + fa / (2.0 * z * logR * f.kappa);
}

// ---------------------------------------------------------------------------
// Taylor coefficients of the regular part of G about the pole
// ---------------------------------------------------------------------------

// Coefficients c_0..c_N of the analytic completion of G(z,zeta) + log|z-zeta|
// expanded about z = zeta; c_0 is real.
struct TaylorCoeffs {
  std::vector<cplx> c;
  cplx center;
  bool disk;
};

inline TaylorCoeffs taylor_coeffs(cplx zeta, const Region& reg, int N, int nodes = 256) {
  if (N < 0 || N > 12) throw domain_error_ex("taylor_coeffs: need 0 <= N <= 12");
  double d = boundary_distance(zeta, reg);
  if (!(d > 0.0)) throw domain_error_ex("taylor_coeffs: zeta not interior");
  double r = std::min(0.5 * d, 0.1);
  TaylorCoeffs out{std::vector<cplx>(N + 1, 0.0), zeta, reg.is_disk};
  double c0 = 0.0;
  for (int k = 0; k < nodes; ++k) {
    double th = 2.0 * PI * k / nodes;
    cplx w = r * std::exp(I * th);  // z - zeta on the contour
    cplx z = zeta + w;
    // harmonic mean value of G + log|z - zeta| recovers the regular part at the center
    c0 += (region_greens(z, zeta, reg) + std::log(std::abs(w))) / nodes;
    // n c_n = (1/2 pi i) contour integral of (2 dG/dz + 1/(z-zeta)) / (z-zeta)^n dz
    cplx F = 2.0 * region_greens_dz(z, zeta, reg) + 1.0 / w;
    cplx p = 1.0;  // w^{1-n}, starting at n = 1
    for (int n = 1; n <= N; ++n) {
      out.c[n] += F * p / (double(n) * double(nodes));
      p /= w;
    }
  }
  out.c[0] = cplx(c0, 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Poincare density and distance estimates on the unit disk
// ---------------------------------------------------------------------------

// |dG/dz| / sinh G with the curvature -4 normalization: equals 1/(1-|z|^2)
inline double poincare_density(cplx z, cplx a) {
  if (!(std::abs(z) < 1.0)) throw domain_error_ex("poincare_density: z outside disk");
  double G = disk_greens(z, a);
  return std::abs(disk_greens_dz(z, a)) / std::sinh(G);
}

struct DistanceBounds {
  double sinh_lower, sinh_upper;  // from 1/(4d) <= rho <= 1/d
  double c0_lower, c0_upper;      // from log d <= c_0 <= log d + log 4
};

inline DistanceBounds distance_bounds(cplx z) {
  if (!(std::abs(z) < 1.0)) throw domain_error_ex("distance_bounds: z outside disk");
  double rho = poincare_density(z, 0.0);
  double c0 = std::log(1.0 - std::norm(z));  // regular part on the diagonal, pole at 0 removed
  return {0.25 / rho, 1.0 / rho, std::exp(c0) / 4.0, std::exp(c0)};
}

// Cauchy-Hadamard-type distance approximant (e/n) K^{(n,n)}(z,z)^{1/2n} built
// from the diagonal derivatives of the disk Bergman kernel, accumulated in
// log scale.
inline double davis_distance(cplx z, int n_max) {
  if (n_max < 1 || n_max > 30) throw domain_error_ex("davis_distance: need 1 <= n_max <= 30");
  if (!(std::abs(z) < 1.0)) throw domain_error_ex("davis_distance: z outside disk");
  int n = n_max;
  double t = std::norm(z);
  // S = sum_{k >= n} (k+1) C(k,n)^2 t^(k-n)
  double S = n + 1.0, term = n + 1.0;
  for (int k = n;; ++k) {
    term *= (double(k + 2) / double(k + 1)) *
            std::pow(double(k + 1) / double(k + 1 - n), 2) * t;
    S += term;
    if (!std::isfinite(S)) throw precision_error("davis_distance: series overflow");
    if (term < 1e-17 * S && k > 2 * n) break;
    if (k > 2000000) throw precision_error("davis_distance: series did not converge");
  }
  double logK = 2.0 * std::lgamma(n + 1.0) - std::log(PI) + std::log(S);
  return (std::exp(1.0) / n) * std::exp(logK / (2.0 * n));
}

// ---------------------------------------------------------------------------
// level-line dynamics
// ---------------------------------------------------------------------------

struct TraceRecord {
  std::vector<std::pair<double, cplx>> samples;
  double u_drift = 0.0;
  double newton_residual = 0.0;
  bool truncated = false;  // stopped near a critical point
  bool closed = false;     // loop closure detected by angle accumulation
  double period = 0.0;
  double closure_gap = 0.0;  // |z(T) - z(0)| when closed
  double sample_dt = 0.0;
};

// Integrate dz/dt = -2i du/dzbar with an adaptive embedded Runge-Kutta pair.
inline TraceRecord level_line_trace(const UField& f, const Region& reg, cplx z0,
                                    double t_end, double tol, double sample_dt = 1e-3) {
  namespace ode = boost::numeric::odeint;
  using state = std::array<double, 2>;
  if (!(t_end > 0.0) || !(sample_dt > 0.0))
    throw domain_error_ex("level_line_trace: need t_end, sample_dt > 0");
  if (2.0 * std::abs(u_dz(f, z0, reg)) <= 1e-8)
    throw domain_error_ex("level_line_trace: gradient vanishes at the start point");

  auto rhs = [&](const state& s, state& dsdt, double) {
    cplx v = -2.0 * I * std::conj(u_dz(f, cplx(s[0], s[1]), reg));
    dsdt = {v.real(), v.imag()};
  };
  auto stepper = ode::make_controlled(1e-12, 1e-10, ode::runge_kutta_cash_karp54<state>());

  TraceRecord rec;
  rec.sample_dt = sample_dt;
  rec.samples.push_back({0.0, z0});
  double u0 = u_value(f, z0, reg);

  std::optional<cplx> zc;  // critical point of the pure Green's field
  if (!reg.is_disk && f.kind == UFieldKind::greens) zc = critical_point(f.a, reg.ann);

  cplx center = f.a;  // loops wind about the pole of u
  double theta_acc = 0.0;
  state s{z0.real(), z0.imag()};
  cplx zprev = z0;
  long nmax = long(std::ceil(t_end / sample_dt));
  for (long k = 1; k <= nmax; ++k) {
    double t0 = (k - 1) * sample_dt;
    double t1 = std::min(k * sample_dt, t_end);
    state s_at_t0 = s;
    ode::integrate_adaptive(stepper, rhs, s, t0, t1, 0.25 * (t1 - t0));
    cplx z(s[0], s[1]);
    rec.u_drift = std::max(rec.u_drift, std::abs(u_value(f, z, reg) - u0));
    if ((zc && std::abs(z - *zc) < 1e-4) || 2.0 * std::abs(u_dz(f, z, reg)) < 1e-8) {
      rec.samples.push_back({t1, z});
      rec.truncated = true;
      break;
    }
    double dth = std::arg((z - center) / (zprev - center));
    if (std::abs(theta_acc) < 2.0 * PI && std::abs(theta_acc + dth) >= 2.0 * PI) {
      // the loop closes inside this step: bisect the substep length
      double target = (theta_acc + dth >= 0.0 ? 2.0 * PI : -2.0 * PI) - theta_acc;
      double lo = 0.0, hi = t1 - t0;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        state sm = s_at_t0;
        ode::integrate_adaptive(stepper, rhs, sm, t0, t0 + mid, 0.25 * mid);
        double dthm = std::arg((cplx(sm[0], sm[1]) - center) / (zprev - center));
        if (std::abs(dthm) >= std::abs(target))
          hi = mid;
        else
          lo = mid;
      }
      state sm = s_at_t0;
      double tau = 0.5 * (lo + hi);
      ode::integrate_adaptive(stepper, rhs, sm, t0, t0 + tau, 0.25 * tau);
      cplx zT(sm[0], sm[1]);
      rec.closed = true;
      rec.period = t0 + tau;
      rec.closure_gap = std::abs(zT - z0);
      rec.samples.push_back({rec.period, zT});
      break;
    }
    theta_acc += dth;
    zprev = z;
    rec.samples.push_back({t1, z});
  }
  if (rec.u_drift > tol)
    throw precision_error("level_line_trace: level drift exceeds the requested tolerance");

  // Newtonian residual |z'' + 2 dV/dzbar|, V = -(1/2)|grad u|^2, by second
  // differences of uniformly spaced samples and a spatial FD step of 1e-4.
  auto V = [&](cplx z) { return -2.0 * std::norm(u_dz(f, z, reg)); };
  const double h = 1e-4;
  size_t nsamp = rec.samples.size();
  size_t stride = std::max<size_t>(1, (nsamp > 3 ? (nsamp - 3) / 50 : 1));
  for (size_t k = 1; k + 1 < nsamp; k += stride) {
    double dtl = rec.samples[k].first - rec.samples[k - 1].first;
    double dtr = rec.samples[k + 1].first - rec.samples[k].first;
    if (std::abs(dtl - sample_dt) > 1e-12 || std::abs(dtr - sample_dt) > 1e-12) continue;
    cplx zm = rec.samples[k - 1].second, z = rec.samples[k].second,
         zp = rec.samples[k + 1].second;
    cplx zdd = (zp - 2.0 * z + zm) / (sample_dt * sample_dt);
    double vx = (V(z + h) - V(z - h)) / (2.0 * h);
    double vy = (V(z + I * h) - V(z - I * h)) / (2.0 * h);
    cplx dVdzbar = cplx(0.5 * vx, 0.5 * vy);
    rec.newton_residual = std::max(rec.newton_residual, std::abs(zdd + 2.0 * dVdzbar));
  }
  return rec;
}

// first point on the ray a + s e^{i theta} with u = level (u decreases from
// the pole outward)
inline cplx find_level_point(const UField& f, const Region& reg, double level,
                             double theta_dir) {
  cplx dir = std::exp(I * theta_dir);
  double smax = 0.0;
  {  // march to the domain boundary along the ray
    double step = 1e-3;
    while (boundary_distance(f.a + (smax + step) * dir, reg) > 1e-6) {
      smax += step;
      if (smax > 100.0) break;
    }
  }
  double slo = 1e-9, shi = smax;
  auto g = [&](double sdist) { return u_value(f, f.a + sdist * dir, reg) - level; };
  if (!(g(slo) > 0.0) || !(g(shi) < 0.0))
    throw solver_error("find_level_point: level not bracketed on the ray");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (slo + shi);
    (g(mid) > 0.0 ? slo : shi) = mid;
  }
  return f.a + 0.5 * (slo + shi) * dir;
}

// ---------------------------------------------------------------------------
// geodesic property of level lines
// ---------------------------------------------------------------------------

enum class GeodesicWeight { one, inv_ustar };

struct GeodesicCheck {
  double level_length;
  double perturbed_length;
  double delta_phi;  // |Phi(u*(z1)) - Phi(u*(z0))|, Phi' = phi
};

namespace detail {

// length integral of phi(u*) |grad u| |dz| along a polyline, with the
// conjugate function u* accumulated by the trapezoid rule of Im(2 u_z dz)
inline std::pair<double, double> weighted_polyline_length(
    const std::vector<cplx>& pts, const UField& f, const Region& reg,
    GeodesicWeight phi, double ustar0) {
  auto w = [&](double us) {
    if (phi == GeodesicWeight::one) return 1.0;
    if (!(us > 0.0)) throw domain_error_ex("geodesic weight 1/u*: u* must stay positive");
    return 1.0 / us;
  };
  double len = 0.0, us = ustar0;
  cplx gz_prev = u_dz(f, pts[0], reg);
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    cplx gz_next = u_dz(f, pts[k + 1], reg);
    cplx dz = pts[k + 1] - pts[k];
    double us_next = us + (gz_prev * dz + gz_next * dz).imag();  // Im(2 u_z dz), trapezoid
    len += 0.5 * (w(us) * 2.0 * std::abs(gz_prev) + w(us_next) * 2.0 * std::abs(gz_next)) *
           std::abs(dz);
    us = us_next;
    gz_prev = gz_next;
  }
  return {len, us};
}

}  // namespace detail

// Compares the weighted length of a level-line arc (samples i0..i1 of a
// trace) with a bump-perturbed path joining the same endpoints.
inline GeodesicCheck geodesic_length_check(const TraceRecord& tr, const UField& f,
                                           const Region& reg, GeodesicWeight phi,
                                           size_t i0, size_t i1, double ustar0 = 1.0,
                                           double bump = 0.02) {
  if (i1 >= tr.samples.size() || i1 < i0 + 2)
    throw domain_error_ex("geodesic_length_check: bad sample range");
  std::vector<cplx> level;
  for (size_t k = i0; k <= i1; ++k) level.push_back(tr.samples[k].second);

  auto [llen, us_end] = detail::weighted_polyline_length(level, f, reg, phi, ustar0);
  double dphi;
  if (phi == GeodesicWeight::one)
    dphi = std::abs(us_end - ustar0);
  else
    dphi = std::abs(std::log(us_end) - std::log(ustar0));

  std::vector<cplx> pert(level);
  size_t n = level.size();
  for (size_t k = 0; k < n; ++k) {
    cplx g = 2.0 * std::conj(u_dz(f, level[k], reg));
    cplx nhat = g / std::abs(g);
    pert[k] += bump * std::sin(PI * double(k) / double(n - 1)) * nhat;
    if (boundary_distance(pert[k], reg) <= 0.0)
      throw domain_error_ex("geodesic_length_check: perturbed path exits the domain");
  }
  auto [plen, pus] = detail::weighted_polyline_length(pert, f, reg, phi, ustar0);
  (void)pus;
  return {llen, plen, dphi};
}

// ---------------------------------------------------------------------------
// level-line curvature
// ---------------------------------------------------------------------------

// kappa = -d/dn log|grad u| with n the unit normal along -grad u
template <class DZ>
inline double level_curvature_from_dz(cplx z, DZ&& udz, double h = 1e-4) {
  cplx g = 2.0 * std::conj(udz(z));
  double gn = std::abs(g);
  if (gn <= 1e-8) throw solver_error("level_line_curvature: gradient too small");
  cplx nhat = -g / gn;
  auto lg = [&](cplx w) { return std::log(2.0 * std::abs(udz(w))); };
  return -(lg(z + h * nhat) - lg(z - h * nhat)) / (2.0 * h);
}

inline double level_line_curvature(cplx z, const UField& f, const Region& reg) {
  return level_curvature_from_dz(z, [&](cplx w) { return u_dz(f, w, reg); });
}

// ---------------------------------------------------------------------------
// Kubo average over a level loop (unit disk)
// ---------------------------------------------------------------------------

// Integral of the Green potential of mu over the boundary of
// K = {G(.,a) >= c} in the Poincare line element; equals (pi c / sinh c) mu(K).
inline double kubo_average(cplx a, double c,
                           const std::vector<std::pair<cplx, double>>& mu) {
  Region reg = disk_region();
  if (!(std::abs(a) < 1.0)) throw domain_error_ex("kubo_average: a outside disk");
  if (!(c > 0.0)) throw domain_error_ex("kubo_average: need c > 0");
  if (mu.empty()) throw domain_error_ex("kubo_average: empty measure");
  for (const auto& [p, m] : mu) {
    if (!(m > 0.0)) throw domain_error_ex("kubo_average: masses must be positive");
    if (std::abs(p - a) > 1e-13 && disk_greens(p, a) < c)
      throw domain_error_ex("kubo_average: mass point outside K");
  }
  UField f = greens_field(a);
  cplx z0 = find_level_point(f, reg, c, 0.37);
  TraceRecord tr = level_line_trace(f, reg, z0, 50.0, 1e-7, 1e-4);
  if (!tr.closed) throw solver_error("kubo_average: level loop did not close");
  auto F = [&](cplx z) {
    double g = 0.0;
    for (const auto& [p, m] : mu) g += m * disk_greens(z, p);
    return g / (1.0 - std::norm(z));  // Poincare line element weight
  };
  double total = 0.0;
  for (size_t k = 0; k + 1 < tr.samples.size(); ++k) {
    cplx z1 = tr.samples[k].second, z2 = tr.samples[k + 1].second;
    total += 0.5 * (F(z1) + F(z2)) * std::abs(z2 - z1);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Levy reflection bounds (unit disk)
// ---------------------------------------------------------------------------

struct LevyReport {
  double lower, upper;        // bracket for log|z'-zeta|/|z-zeta| - G(z,zeta)
  double expr_min, expr_max;  // extremes of the expression over the samples
  cplx z_reflected;
};

// Interior tangent radius R = 1 (the disk itself); exterior radius R' = inf,
// whose bound log(1 - 2d/(2R'+d)) degenerates to the monotone limit 0.
inline LevyReport levy_bounds(cplx z, int samples = 128) {
  double d = 1.0 - std::abs(z);
  if (!(d > 0.0)) throw domain_error_ex("levy_bounds: z outside disk");
  if (!(d < 0.5)) throw domain_error_ex("levy_bounds: need d(z) < 1/2");
  cplx nhat = z / std::abs(z);
  cplx zp = z + 2.0 * d * nhat;
  LevyReport rep;
  rep.lower = 0.0;
  rep.upper = std::log1p(2.0 * d / (2.0 - d));
  rep.z_reflected = zp;
  rep.expr_min = 1e300;
  rep.expr_max = -1e300;
  for (int k = 0; k < samples; ++k) {
    cplx zeta = std::exp(2.0 * PI * I * (k + 0.5) / double(samples));
    // G(z,zeta) = log|1 - z conj(zeta)| - log|z - zeta| (vanishing on |zeta|=1)
    double expr = std::log(std::abs(zp - zeta)) - std::log(std::abs(z - zeta)) -
                  (std::log(std::abs(1.0 - z * std::conj(zeta))) -
                   std::log(std::abs(z - zeta)));
    rep.expr_min = std::min(rep.expr_min, expr);
    rep.expr_max = std::max(rep.expr_max, expr);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// q-connection regular part l(zeta,zeta)
// ---------------------------------------------------------------------------

// l(z,w) = L(z,w) - 1/(pi (z-w)^2), with L = -(2/pi) d2G/dz dw obtained by a
// finite difference (in w) of the exact dG/dz.
inline cplx schiffer_l_regular(cplx z, cplx w, const Region& reg, double h) {
  auto Gz = [&](cplx ww) { return region_greens_dz(z, ww, reg); };
  cplx dx = (Gz(w + h) - Gz(w - h)) / (2.0 * h);
  cplx dy = (Gz(w + I * h) - Gz(w - I * h)) / (2.0 * h);
  cplx d2 = 0.5 * dx - 0.5 * I * dy;
  return -(2.0 / PI) * d2 - 1.0 / (PI * (z - w) * (z - w));
}

// Diagonal value by Richardson extrapolation both in the FD step (h, h/2)
// and in the point separation (s, s/2).
inline cplx q_connection_ell(cplx zeta, const Region& reg) {
  double d = boundary_distance(zeta, reg);
  if (!(d > 1e-3)) throw domain_error_ex("q_connection_ell: zeta too close to the boundary");
  cplx dir = reg.is_disk ? std::exp(I * 0.3)
                         : I * zeta / std::abs(zeta);  // tangential inside an annulus
  double s = 0.45 * std::min(d, 0.7);
  auto rich_h = [&](double sep) {
    const double h = 1e-3;
    return (4.0 * schiffer_l_regular(zeta + sep * dir, zeta - sep * dir, reg, 0.5 * h) -
            schiffer_l_regular(zeta + sep * dir, zeta - sep * dir, reg, h)) /
           3.0;
  };
  return 2.0 * rich_h(0.5 * s) - rich_h(s);
}

}  // namespace annulus
