#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "policy.hpp"

namespace annulus {

// Closed-form kernels on the unit disk with boundary weight a = 1 and
// gamma = (2 pi).
enum class DiskKernelKind { neumann, hydro_greens, k_harmonic, K_dirichlet, L_adjoint };

namespace detail {

inline void check_disk_pair(DiskKernelKind kind, cplx z, cplx zeta) {
  if (!(std::abs(z) <= 1.0 + 1e-9)) throw domain_error_ex("disk kernel: z outside closed disk");
  if (!(std::abs(zeta) < 1.0)) throw domain_error_ex("disk kernel: zeta outside disk");
  bool singular = kind == DiskKernelKind::neumann || kind == DiskKernelKind::hydro_greens ||
                  kind == DiskKernelKind::L_adjoint;
  if (singular && std::abs(z - zeta) < 1e-13)
    throw singularity_error("disk kernel: diagonal");
}

// 128 angular x 96 radial Gauss-Legendre tensor grid over the unit disk
struct DiskGrid {
  std::vector<double> r, wr;  // radial nodes and weights (including the r dr factor)
  int n_theta;
  DiskGrid() : n_theta(128) {
    using GL = boost::math::quadrature::gauss<double, 32>;
    for (int seg = 0; seg < 3; ++seg) {
      double lo = seg / 3.0, hi = (seg + 1) / 3.0, mid = 0.5 * (lo + hi),
             half = 0.5 * (hi - lo);
      for (size_t i = 0; i < GL::abscissa().size(); ++i) {
        double x = GL::abscissa()[i], w = GL::weights()[i];
        // boost stores only the nonnegative half of the symmetric rule
        for (double node : {mid + half * x, mid - half * x}) {
          r.push_back(node);
          wr.push_back(w * half * node);
          if (x == 0.0) break;
        }
      }
    }
  }
};

inline const DiskGrid& disk_grid() {
  static const DiskGrid g;
  return g;
}

}  // namespace detail

inline cplx eval_disk_kernel(DiskKernelKind kind, cplx z, cplx zeta) {
  detail::check_disk_pair(kind, z, zeta);
  cplx w = 1.0 - z * std::conj(zeta);
  switch (kind) {
    case DiskKernelKind::neumann:
      return -std::log(std::abs(z - zeta)) - std::log(std::abs(w));
    case DiskKernelKind::hydro_greens:
      return -std::log(std::abs(z - zeta)) + std::log(std::abs(w));
    case DiskKernelKind::k_harmonic:
      return -(1.0 / PI) * std::log(std::abs(w));
    case DiskKernelKind::K_dirichlet:
      return -(1.0 / PI) * std::log(w);  // principal branch
    case DiskKernelKind::L_adjoint:
      return -(1.0 / PI) * std::log(z - zeta);  // cut on the negative real axis
  }
  throw domain_error_ex("eval_disk_kernel: unknown kind");
}

// Bergman kernel of the unit disk
inline cplx disk_bergman_K(cplx z, cplx zeta) {
  cplx w = 1.0 - z * std::conj(zeta);
  return 1.0 / (PI * w * w);
}

// Dirichlet inner product D(u, k(.,zeta)) over the polar tensor grid; equals
// u(zeta) for harmonic u with vanishing boundary mean.
inline double reproduce_harmonic(const std::function<double(cplx)>& u,
                                 const std::function<cplx(cplx)>& udz, cplx zeta) {
  (void)u;  // value handle kept for interface symmetry; only the gradient enters
  if (!(std::abs(zeta) < 1.0)) throw domain_error_ex("reproduce_harmonic: zeta outside disk");
  const auto& g = detail::disk_grid();
  double total = 0.0;
  for (int j = 0; j < g.n_theta; ++j) {
    double th = 2.0 * PI * j / g.n_theta;
    cplx e = std::exp(I * th);
    for (size_t i = 0; i < g.r.size(); ++i) {
      cplx z = g.r[i] * e;
      cplx kz = std::conj(zeta) / (2.0 * PI * (1.0 - z * std::conj(zeta)));
      // grad u . grad k = 4 Re( u_z conj(k_z) )
      total += 4.0 * (udz(z) * std::conj(kz)).real() * g.wr[i] * (2.0 * PI / g.n_theta);
    }
  }
  return total;
}

inline double disk_boundary_average(const std::function<double(cplx)>& u, int nodes = 512) {
  double avg = 0.0;
  for (int k = 0; k < nodes; ++k)
    avg += u(std::exp(2.0 * PI * I * double(k) / double(nodes))) / nodes;
  return avg;
}

enum class BergmanVariant { full, reduced };

// Area quadrature of f against the Bergman kernel; on the disk the full and
// reduced kernels coincide, so the variant tag does not alter the kernel.
inline cplx bergman_reproduce(const std::vector<cplx>& f_coeffs, cplx zeta,
                              BergmanVariant /*variant*/ = BergmanVariant::full) {
  if (f_coeffs.size() > 9) throw domain_error_ex("bergman_reproduce: degree must be <= 8");
  if (!(std::abs(zeta) < 1.0)) throw domain_error_ex("bergman_reproduce: zeta outside disk");
  auto f = [&](cplx z) {
    cplx v = 0.0;
    for (size_t k = f_coeffs.size(); k-- > 0;) v = v * z + f_coeffs[k];
    return v;
  };
  const auto& g = detail::disk_grid();
  cplx total = 0.0;
  for (int j = 0; j < g.n_theta; ++j) {
    double th = 2.0 * PI * j / g.n_theta;
    cplx e = std::exp(I * th);
    for (size_t i = 0; i < g.r.size(); ++i) {
      cplx z = g.r[i] * e;
      total += f(z) * std::conj(disk_bergman_K(z, zeta)) * g.wr[i] * (2.0 * PI / g.n_theta);
    }
  }
  return total;
}

// affine connection Gamma_a(z,zeta) = 2 dN_a/dz for the interior disk
inline cplx disk_affine_connection(cplx z, cplx zeta) {
  return -1.0 / (z - zeta) + std::conj(zeta) / (1.0 - z * std::conj(zeta));
}

// max over boundary samples of |Im(Gamma_a dz) + ds| (a = 1), dz = i z dtheta
inline double affine_connection_residual(cplx zeta, int samples = 64) {
  if (!(std::abs(zeta) < 1.0))
    throw domain_error_ex("affine_connection_residual: zeta outside disk");
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    cplx z = std::exp(2.0 * PI * I * (k + 0.5) / double(samples));
    double im = (disk_affine_connection(z, zeta) * I * z).imag();
    worst = std::max(worst, std::abs(im + 1.0));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// exterior disk: residue structure of the symmetric affine connection
// ---------------------------------------------------------------------------

struct ExteriorNeumannReport {
  cplx res_origin;      // at w = 0 in the chart w = 1/z (expected -2)
  cplx res_zeta;        // at w = 1/zeta, i.e. z = zeta (expected +1)
  cplx res_conj_zeta;   // at w = conj(zeta), i.e. z = 1/conj(zeta) (expected +1)
  cplx sum;
};

// For the exterior disk N_a = -log|z-zeta| - log|1-z conj(zeta)| + 2 log|z|;
// the connection -Gamma_a(z,zeta)dz is represented in the w = 1/z chart by
// -Gamma_a(1/w,zeta) d(1/w) - 2 dw/w (the chart term carries the residue -2).
inline ExteriorNeumannReport exterior_neumann_check(cplx zeta, int nodes = 256) {
  if (!(std::abs(zeta) > 1.0))
    throw domain_error_ex("exterior_neumann_check: zeta must be exterior");
  auto gamma_ext = [&](cplx z) {
    return -1.0 / (z - zeta) + std::conj(zeta) / (1.0 - z * std::conj(zeta)) + 2.0 / z;
  };
  auto gw = [&](cplx w) {
    // -Gamma_a(1/w) * d(1/w)/dw - 2/w,   d(1/w)/dw = -1/w^2
    return gamma_ext(1.0 / w) / (w * w) - 2.0 / w;
  };
  std::array<cplx, 3> poles{cplx(0.0), 1.0 / zeta, std::conj(zeta)};
  auto residue = [&](cplx w0) {
    double sep = 1e9;
    for (cplx p : poles)
      if (std::abs(p - w0) > 1e-12) sep = std::min(sep, std::abs(p - w0));
    double rad = 0.2 * sep;
    cplx total = 0.0;
    for (int k = 0; k < nodes; ++k) {
      cplx e = std::exp(2.0 * PI * I * double(k) / double(nodes));
      // (1/2 pi i) contour integral, trapezoid on the circle
      total += gw(w0 + rad * e) * rad * e / double(nodes);
    }
    return total;
  };
  ExteriorNeumannReport rep;
  rep.res_origin = residue(poles[0]);
  rep.res_zeta = residue(poles[1]);
  rep.res_conj_zeta = residue(poles[2]);
  rep.sum = rep.res_origin + rep.res_zeta + rep.res_conj_zeta;
  return rep;
}

}  // namespace annulus
