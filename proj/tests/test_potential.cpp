#include <catch2/catch_amalgamated.hpp>

#include <annulus/potential.hpp>

using namespace annulus;

TEST_CASE("Taylor coefficients of the regular part, disk closed forms", "[taylor]") {
  Region disk = disk_region();
  for (cplx zeta : {cplx(0.3, 0.2), cplx(-0.1, 0.55), cplx(0.7, 0.0)}) {
    TaylorCoeffs tc = taylor_coeffs(zeta, disk, 4);
    CHECK(std::abs(tc.c[0].imag()) < 1e-12);
    CHECK(std::abs(tc.c[0].real() - std::log(1.0 - std::norm(zeta))) < 1e-10);
    // c_1 is the analytic derivative -conj(zeta)/(1-|zeta|^2) of the completion
    cplx c1 = -std::conj(zeta) / (1.0 - std::norm(zeta));
    CHECK(std::abs(tc.c[1] - c1) < 1e-10);
    // c_1 = d c_0 / d zeta by finite differences of the c_0 map
    double h = 1e-5;
    auto c0 = [&](cplx w) { return taylor_coeffs(w, disk, 0).c[0].real(); };
    cplx fd(0.5 * (c0(zeta + h) - c0(zeta - h)) / (2 * h),
            -0.5 * (c0(zeta + I * h) - c0(zeta - I * h)) / (2 * h));
    CHECK(std::abs(tc.c[1] - fd) < 1e-6);
  }
}

TEST_CASE("Taylor coefficient bound on the annulus", "[taylor]") {
  Region reg = annulus_region(make_annulus(2.0));
  cplx zeta(1.4, 0.0);
  double d = boundary_distance(zeta, reg);
  TaylorCoeffs tc = taylor_coeffs(zeta, reg, 8);
  for (int n = 1; n <= 8; ++n)
    CHECK(std::abs(tc.c[n]) <= 1.0 / (n * std::pow(d, n)) + 1e-12);
}

TEST_CASE("Taylor coefficients are stable under node doubling", "[taylor]") {
  Region reg = annulus_region(make_annulus(2.0));
  cplx zeta = 1.45 * std::exp(I * 0.8);
  TaylorCoeffs a = taylor_coeffs(zeta, reg, 6, 256);
  TaylorCoeffs b = taylor_coeffs(zeta, reg, 6, 512);
  for (int n = 0; n <= 6; ++n) CHECK(std::abs(a.c[n] - b.c[n]) < 1e-9);
}

TEST_CASE("c0 monotonicity under domain inclusion", "[taylor]") {
  // c_0 of the unit disk at zeta exceeds c_0 of the concentric 0.9-disk,
  // computed by rescaling: G_{0.9D}(z,zeta) = G_D(z/0.9, zeta/0.9) gives
  // c_0^{0.9}(zeta) = log(0.9) + log(1 - |zeta/0.9|^2)
  for (double x : {0.0, 0.3, 0.6}) {
    double big = std::log(1.0 - x * x);
    double small = std::log(0.9) + std::log(1.0 - (x / 0.9) * (x / 0.9));
    CHECK(big >= small);
    // and the quadrature value for the disk agrees with the closed form
    TaylorCoeffs tc = taylor_coeffs(cplx(x, 0.0), disk_region(), 0);
    CHECK(std::abs(tc.c[0].real() - big) < 1e-10);
  }
}

TEST_CASE("Poincare density from the Green's function", "[poincare]") {
  for (cplx z : {cplx(0.0, 0.0), cplx(0.4, 0.1), cplx(-0.2, 0.6)}) {
    double expect = 1.0 / (1.0 - std::norm(z));
    for (cplx a : {cplx(0.5, 0.0), cplx(-0.3, 0.3), cplx(0.1, -0.7)}) {
      if (std::abs(z - a) < 1e-3) continue;
      CHECK(std::abs(poincare_density(z, a) - expect) < 1e-10);
    }
    double d = 1.0 - std::abs(z);
    CHECK(poincare_density(z, cplx(0.5, 0.0)) >= 1.0 / (4.0 * d) - 1e-12);
    CHECK(poincare_density(z, cplx(0.5, 0.0)) <= 1.0 / d + 1e-12);
  }
  CHECK(std::abs(poincare_density(cplx(0.0), cplx(0.5)) - 1.0) < 1e-12);
}

TEST_CASE("distance brackets on the disk", "[distance]") {
  for (double x : {0.5, 0.9, 0.25}) {
    cplx z(x, 0.0);
    double d = 1.0 - x;
    DistanceBounds b = distance_bounds(z);
    CHECK(b.sinh_lower <= d + 1e-12);
    CHECK(b.sinh_upper >= d - 1e-12);
    CHECK(b.c0_lower <= d + 1e-12);
    CHECK(b.c0_upper >= d - 1e-12);
    CHECK(b.sinh_upper / b.sinh_lower <= 4.0 + 1e-12);
    CHECK(b.c0_upper / b.c0_lower <= 4.0 + 1e-12);
  }
}

TEST_CASE("Cauchy-Hadamard distance approximant", "[davis]") {
  // z = 0: the approximant decreases toward 1/d = 1
  double prev = 1e300;
  for (int n : {5, 10, 20, 30}) {
    double v = davis_distance(cplx(0.0), n);
    CHECK(v > 1.0);
    CHECK(v < prev);
    prev = v;
  }
  // z = 0.5: within 20% of 1/d = 2 at n = 25
  CHECK(std::abs(davis_distance(cplx(0.5, 0.0), 25) - 2.0) < 0.4);
  // rotation invariance
  CHECK(std::abs(davis_distance(cplx(0.5, 0.0), 12) -
                 davis_distance(0.5 * std::exp(I * 1.1), 12)) < 1e-12);
}

TEST_CASE("level-line trace on the disk is a circle", "[trace]") {
  Region disk = disk_region();
  UField f = greens_field(0.0);
  cplx z0(0.45, 0.0);
  TraceRecord tr = level_line_trace(f, disk, z0, 5.0, 1e-8);
  REQUIRE(tr.closed);
  CHECK(tr.closure_gap < 1e-6);
  double worst = 0.0;
  for (auto& [t, z] : tr.samples) worst = std::max(worst, std::abs(std::abs(z) - 0.45));
  CHECK(worst < 1e-8);
}

TEST_CASE("annulus level loop conserves u and obeys the Newtonian system", "[trace]") {
  Region reg = annulus_region(make_annulus(2.0));
  UField f = greens_field(cplx(1.4, 0.0));
  cplx z0 = find_level_point(f, reg, 0.3, 0.0);
  CHECK(std::abs(u_value(f, z0, reg) - 0.3) < 1e-10);
  TraceRecord tr = level_line_trace(f, reg, z0, 5.0, 1e-8, 2e-4);
  REQUIRE(tr.closed);
  CHECK(tr.u_drift <= 1e-8);
  CHECK(tr.closure_gap < 1e-6);
  CHECK(tr.newton_residual < 1e-4);
}

TEST_CASE("trace truncates near the critical point", "[trace]") {
  // a fat annulus keeps the saddle gradient above the degenerate-start guard
  Region reg = annulus_region(make_annulus(8.0));
  cplx a(3.0, 0.0);
  UField f = greens_field(a);
  cplx zc = critical_point(a, reg.ann);
  // start inside the guard radius of the saddle: the trace must flag and stop
  cplx z0 = zc + cplx(0.0, 8e-5);
  TraceRecord tr = level_line_trace(f, reg, z0, 1.0, 1.0);
  CHECK(tr.truncated);
}

TEST_CASE("level arcs are geodesics of the conjugate-weighted length", "[geodesic]") {
  Region disk = disk_region();
  UField f0 = greens_field(0.0);
  TraceRecord tr = level_line_trace(f0, disk, cplx(0.5, 0.0), 2.0, 1e-8, 2e-4);
  size_t i1 = tr.samples.size() / 3;
  GeodesicCheck gc = geodesic_length_check(tr, f0, disk, GeodesicWeight::one, 0, i1);
  CHECK(std::abs(gc.level_length - gc.delta_phi) < 1e-6);
  CHECK(gc.perturbed_length > gc.level_length + 1e-6);

  Region reg = annulus_region(make_annulus(2.0));
  UField fa = greens_field(cplx(1.4, 0.0));
  cplx z0 = find_level_point(fa, reg, 0.3, 0.7);
  TraceRecord tra = level_line_trace(fa, reg, z0, 5.0, 1e-8, 2e-4);
  size_t j1 = tra.samples.size() / 3;
  GeodesicCheck gca = geodesic_length_check(tra, fa, reg, GeodesicWeight::one, 0, j1);
  CHECK(std::abs(gca.level_length - gca.delta_phi) < 1e-6);
  CHECK(gca.perturbed_length > gca.level_length);

  GeodesicCheck gcw =
      geodesic_length_check(tr, f0, disk, GeodesicWeight::inv_ustar, 0, i1, 10.0);
  CHECK(std::abs(gcw.level_length - gcw.delta_phi) < 1e-6);
  CHECK(gcw.perturbed_length > gcw.level_length);
}

TEST_CASE("level-line curvature", "[curvature]") {
  Region disk = disk_region();
  UField f = greens_field(0.0);
  for (double r : {0.3, 0.5, 0.8}) {
    cplx z = r * std::exp(I * 0.9);
    double k = level_line_curvature(z, f, disk);
    CHECK(std::abs(k - 1.0 / r) < 1e-4);
  }
}

TEST_CASE("curvature of an image curve matches Study's formula", "[curvature]") {
  // u = -log|w(z)| with z = f(w) = w + 0.1 w^2 (pole of u at z = f(0), matching
  // the Green orientation); the image of the unit circle is the level u = 0.
  // w(z) by Newton inversion; u_z = -w'(z)/(2w) = -1/(2 w f'(w)).
  auto finv = [&](cplx z) {
    cplx w = z;
    for (int it = 0; it < 60; ++it) {
      cplx fw = w + 0.1 * w * w;
      cplx fpw = 1.0 + 0.2 * w;
      cplx step = (fw - z) / fpw;
      w -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return w;
  };
  auto udz = [&](cplx z) {
    cplx w = finv(z);
    return -1.0 / (2.0 * w * (1.0 + 0.2 * w));
  };
  for (double th : {0.4, 1.7, 3.0, 5.1}) {
    cplx w0 = std::exp(I * th);
    cplx z0 = w0 + 0.1 * w0 * w0;
    double k1 = level_curvature_from_dz(z0, udz, 1e-5);
    cplx fp = 1.0 + 0.2 * w0, fpp = 0.2;
    double k2 = (1.0 / std::abs(fp)) * ((w0 * fpp / fp).real() + 1.0);
    CHECK(std::abs(k1 - k2) < 1e-6);
  }
}

TEST_CASE("Kubo average of the Green potential over a level loop", "[kubo]") {
  cplx a(0.2, 0.1);
  double v1 = kubo_average(a, 1.0, {{a, 1.0}});
  CHECK(std::abs(v1 - PI / std::sinh(1.0)) < 1e-5);
  // independence of the shape of mu: two half masses near a
  double v2 = kubo_average(a, 1.0, {{a + cplx(0.02, 0.0), 0.5}, {a - cplx(0.0, 0.03), 0.5}});
  CHECK(std::abs(v2 - PI / std::sinh(1.0)) < 1e-5);
  for (double c : {0.5, 2.0}) {
    double v = kubo_average(a, c, {{a, 1.0}});
    CHECK(std::abs(v - PI * c / std::sinh(c)) < 1e-5);
  }
  CHECK_THROWS_AS(kubo_average(a, 2.0, {{cplx(0.8, 0.0), 1.0}}), domain_error_ex);
}

TEST_CASE("Levy reflection bounds on the disk", "[levy]") {
  LevyReport r = levy_bounds(cplx(0.9, 0.0));
  CHECK(std::abs(r.z_reflected) > 1.0);
  CHECK(r.expr_min >= r.lower - 1e-12);
  CHECK(r.expr_max < r.upper);
  // bracket width shrinks linearly with d
  double w2 = levy_bounds(cplx(1.0 - 1e-2, 0.0)).upper;
  double w3 = levy_bounds(cplx(1.0 - 1e-3, 0.0)).upper;
  CHECK(std::abs(w2 / w3 - 10.0) < 0.1);
  CHECK_THROWS_AS(levy_bounds(cplx(0.2, 0.0)), domain_error_ex);
}

TEST_CASE("q-connection vanishes identically on the disk", "[qconnection]") {
  Region disk = disk_region();
  for (cplx zeta : {cplx(0.0, 0.0), cplx(0.3, -0.2), cplx(-0.45, 0.1)}) {
    CHECK(std::abs(q_connection_ell(zeta, disk)) < 1e-8);
  }
}

TEST_CASE("potential module validation", "[potential]") {
  Region disk = disk_region();
  CHECK_THROWS_AS(taylor_coeffs(cplx(0.2), disk, 13), domain_error_ex);
  CHECK_THROWS_AS(taylor_coeffs(cplx(1.2), disk, 4), domain_error_ex);
  CHECK_THROWS_AS(davis_distance(cplx(0.2), 31), domain_error_ex);
  CHECK_THROWS_AS(poincare_density(cplx(0.3), cplx(0.3)), singularity_error);
  UField f = greens_field(0.0);
  CHECK_THROWS_AS(level_line_trace(f, disk, cplx(0.5, 0.0), -1.0, 1e-8), domain_error_ex);
  CHECK_THROWS_AS(u_value(f, cplx(0.5, 0.0), annulus_region(make_annulus(2.0))),
                  domain_error_ex);
}
