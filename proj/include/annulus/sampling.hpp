#pragma once

#include <cmath>
#include <cstdint>

#include "policy.hpp"

namespace annulus {

// Additive-recurrence (Kronecker) low-discrepancy sequence in up to 4
// dimensions, based on the generalized golden ratios.  The seed is an
// integer start offset, so a fixed seed reproduces the exact same points.
class KroneckerSequence {
 public:
  explicit KroneckerSequence(std::uint64_t seed = 0) : n_(seed + 1) {
    // alphas = 1/phi_d, 1/phi_d^2, ... with phi_d the d-harmonious number
    double phi = 1.0;
    for (int i = 0; i < 64; ++i) phi = std::pow(1.0 + phi, 1.0 / 5.0);
    double a = 1.0 / phi;
    double cur = a;
    for (int k = 0; k < 4; ++k) {
      alpha_[k] = cur;
      cur *= a;
    }
  }

  // next point in [0,1)^4
  void next(double out[4]) {
    ++n_;
    for (int k = 0; k < 4; ++k) {
      double v = 0.5 + static_cast<double>(n_) * alpha_[k];
      out[k] = v - std::floor(v);
    }
  }

  // quasirandom interior pair (z, a) of the annulus A(1,R) with the given
  // separation and distance-to-boundary margins
  void next_pair(double R, double sep, double margin, cplx& z, cplx& a) {
    double u[4];
    for (int tries = 0; tries < 10000; ++tries) {
      next(u);
      double rz = 1.0 + margin + (R - 1.0 - 2 * margin) * u[0];
      double ra = 1.0 + margin + (R - 1.0 - 2 * margin) * u[2];
      cplx zz = rz * std::exp(I * (2 * PI * u[1]));
      cplx aa = ra * std::exp(I * (2 * PI * u[3]));
      if (std::abs(zz - aa) >= sep) {
        z = zz;
        a = aa;
        return;
      }
    }
    throw solver_error("KroneckerSequence: could not satisfy separation constraint");
  }

 private:
  std::uint64_t n_;
  double alpha_[4];
};

}  // namespace annulus
