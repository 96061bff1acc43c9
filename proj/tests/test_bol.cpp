#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <annulus/bol.hpp>

using namespace annulus;

namespace {

// disk automorphism z = e^{i th}(t - p)/(1 - conj(p) t), normalized to det 1
MobiusMap disk_automorphism(cplx p, double th) {
  cplx e = std::exp(I * th);
  cplx s = std::sqrt(e * (1.0 - std::norm(p)));
  return MobiusMap(e / s, -e * p / s, -std::conj(p) / s, 1.0 / s);
}

}  // namespace

TEST_CASE("kernel and basic action of the higher-order operators", "[bol]") {
  // Lambda_m annihilates polynomials of degree < m
  for (int m = 1; m <= 5; ++m) {
    for (int k = 0; k < m; ++k) {
      PolySeries out = bol(m, 0.0, PolySeries::monomial(k));
      for (cplx c : out.c) CHECK(std::abs(c) == 0.0);
    }
  }
  // Lambda_2 z^4 = 12 z^2
  PolySeries r = bol(2, 0.0, PolySeries::monomial(4));
  CHECK(std::abs(r.eval(0.7) - 12.0 * 0.49) < 1e-14);
  // with a constant connection, Lambda_2 F = F'' + q F / 2
  PolySeries r2 = bol(2, cplx(3.0), PolySeries::monomial(4));
  CHECK(std::abs(r2.eval(0.5) - (12.0 * 0.25 + 1.5 * 0.0625)) < 1e-14);
}

TEST_CASE("Bol covariance under Mobius substitutions", "[bol]") {
  std::vector<cplx> pts{cplx(0.2, 0.1), cplx(-0.4, 0.3), cplx(0.55, -0.2)};
  // m = 1: plain chain rule, holds for any Mobius map
  MobiusMap f(1.3, 0.2, cplx(0.4, 0.1), (1.0 + 0.2 * cplx(0.4, 0.1)) / 1.3);
  CHECK(bol_covariance(1, f, PolySeries::monomial(3), pts) < 1e-12);
  // m = 3 with a disk automorphism and F = z^5
  MobiusMap g = disk_automorphism(cplx(0.3, 0.1), 0.7);
  CHECK(bol_covariance(3, g, PolySeries::monomial(5), pts) < 1e-10);
  CHECK(bol_covariance(2, g, PolySeries::monomial(4), pts) < 1e-10);
  // negative control: a genuinely nonlinear substitution breaks covariance
  PolySeries gp(std::vector<cplx>{0.0, 1.0, 1.0});  // g(t) = t + t^2
  std::vector<cplx> far{cplx(0.5, 0.0), cplx(0.3, 0.2)};
  CHECK(bol_covariance_poly(2, gp, PolySeries::monomial(5), far) > 0.01);
  // ... while m = 1 still holds there
  CHECK(bol_covariance_poly(1, gp, PolySeries::monomial(5), far) < 1e-12);
}

TEST_CASE("weighted Bergman inner products", "[inner]") {
  PolySeries one = PolySeries::monomial(0);
  PolySeries z = PolySeries::monomial(1);
  PolySeries z2 = PolySeries::monomial(2);
  // orthogonality of distinct monomials
  CHECK(std::abs(weighted_inner(z, z2, 1.5)) == 0.0);
  // (1,1)_1 = area of the disk
  CHECK(std::abs(weighted_inner(one, one, 1.0) - PI) < 1e-14);
  // closed form against the radial quadrature oracle at integer weights
  for (double alpha : {1.0, 2.0, 3.0}) {
    PolySeries f(std::vector<cplx>{cplx(0.3, 0.1), 1.0, cplx(0.0, -0.7), 0.4});
    cplx a = weighted_inner(f, f, alpha);
    CHECK(std::abs(a - weighted_inner_quad(f, f, alpha)) < 1e-4);
    CHECK(std::abs(a - weighted_inner_quad(f, f, alpha, 4096)) < 1e-7);
  }
  // Szego limit: alpha (f,f)_alpha -> pi sum |f_j|^2 as alpha -> 0
  cplx s = szego_inner(z, z);
  CHECK(std::abs(s - cplx(PI)) < 1e-14);
  for (double alpha : {1e-3, 1e-4}) {
    cplx v = alpha * weighted_inner(z, z, alpha);
    CHECK(std::abs(v - s) < 0.01 * std::abs(s) * (alpha == 1e-3 ? 1.0 : 0.1));
  }
}

TEST_CASE("Stokes boundary formula for the weighted pairings", "[stokes]") {
  struct Case {
    int m;
    PolySeries F, g;
  };
  std::vector<Case> cases{
      {1, PolySeries::monomial(2), PolySeries::monomial(1)},
      {2, PolySeries::monomial(3), PolySeries::monomial(0)},
      {2, PolySeries::monomial(3), PolySeries::monomial(1)},
      {3, PolySeries::monomial(4), PolySeries::monomial(1)},
      {2, PolySeries(std::vector<cplx>{0.0, 0.2, cplx(0.0, 0.5), 1.0}),
       PolySeries(std::vector<cplx>{1.0, cplx(0.3, -0.2)})},
  };
  for (const auto& c : cases) {
    auto [lhs, rhs] = stokes_check(c.m, c.F, c.g);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
  // kernel element: both sides vanish
  auto [l0, r0] = stokes_check(2, PolySeries::monomial(1), PolySeries::monomial(1));
  CHECK(std::abs(l0) < 1e-14);
  CHECK(std::abs(r0) < 1e-12);
}

TEST_CASE("boundary pairing realizes the negative-weight isometry", "[isometry]") {
  auto [n0, p0] = isometry_check(0, PolySeries::monomial(1), PolySeries::monomial(1));
  CHECK(std::abs(n0 - p0) < 1e-10);
  auto [n2, p2] = isometry_check(2, PolySeries::monomial(3), PolySeries::monomial(3));
  CHECK(std::abs(n2 - p2) < 1e-10);
  PolySeries F(std::vector<cplx>{0.1, cplx(0.0, 0.4), 0.7, 1.0, cplx(0.2, -0.1)});
  PolySeries G(std::vector<cplx>{0.0, 1.0, cplx(0.3, 0.3), 0.0, 0.5});
  for (int m = 0; m <= 3; ++m) {
    auto [n, p] = isometry_check(m, F, G);
    CHECK(std::abs(n - p) < 1e-10);
  }
  // degree below the kernel order pairs to zero
  auto [nk, pk] = isometry_check(3, PolySeries::monomial(2), PolySeries::monomial(2));
  CHECK(std::abs(nk) < 1e-12);
  CHECK(std::abs(pk) < 1e-14);
  // positive semidefiniteness of (F,F)_{-m} over random polynomials
  std::mt19937 rng(20260823);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cplx> c(7);
    for (auto& v : c) v = cplx(U(rng), U(rng));
    PolySeries P(c);
    for (int m = 1; m <= 3; ++m) {
      auto [n, p] = isometry_check(m, P, P);
      CHECK(n.real() > -1e-10);
      CHECK(std::abs(n.imag()) < 1e-10);
      CHECK(std::abs(n - p) < 1e-8);
    }
  }
}

TEST_CASE("reproducing kernels of the higher-order spaces", "[kernels]") {
  // Lambda_1 Lambdabar_1 K_1 = Bergman kernel, by mixed finite differences
  cplx z(0.3, 0.2), zeta(0.1, -0.25);
  double h = 1e-4;
  // K_1 is analytic in z and in conj(zeta); real steps in zeta step conj(zeta)
  cplx mixed = (kernel_Km(1, z + h, zeta + h) - kernel_Km(1, z - h, zeta + h) -
                kernel_Km(1, z + h, zeta - h) + kernel_Km(1, z - h, zeta - h)) /
               (4.0 * h * h);
  cplx w = 1.0 - z * std::conj(zeta);
  CHECK(std::abs(mixed - 1.0 / (PI * w * w)) < 1e-5);

  // leading singularity coefficient of L_2 is -i/(2 pi)
  cplx small(1e-5, 0.0);
  cplx lead = kernel_Lm(2, zeta + small, zeta) / (small * std::log(small));
  CHECK(std::abs(lead - (-I / (2.0 * PI))) < 1e-4);

  // resolvent identity for m = 2: F = z^3 is reconstructed from F''
  PolySeries F = PolySeries::monomial(3);
  for (cplx zt : {cplx(0.2, 0.3), cplx(-0.4, 0.1)}) {
    CHECK(std::abs(resolvent_reconstruct(F, zt) - zt * zt * zt) < 1e-8);
  }

  // the operator annihilates the (m-1)-th power of the metric density
  for (int m = 2; m <= 8; ++m) CHECK(metric_annihilation_residual(m) == 0.0);
}

TEST_CASE("bol module validation", "[bol]") {
  CHECK_THROWS_AS(MobiusMap(1.0, 0.0, 0.0, 2.0), domain_error_ex);
  CHECK_THROWS_AS(bol(9, 0.0, PolySeries::monomial(1)), domain_error_ex);
  CHECK_THROWS_AS(bol(5, cplx(1.0), PolySeries::monomial(1)), domain_error_ex);
  CHECK_THROWS_AS(weighted_inner(PolySeries::monomial(1), PolySeries::monomial(1), 0.0),
                  domain_error_ex);
  CHECK_THROWS_AS(kernel_Km(4, 0.1, 0.1), domain_error_ex);
  CHECK_THROWS_AS(kernel_Lm(1, 0.1, 0.1), singularity_error);
  CHECK_THROWS_AS(resolvent_reconstruct(PolySeries::monomial(1), 0.2), domain_error_ex);
}
