#include <catch2/catch_amalgamated.hpp>

#include <annulus/elliptic.hpp>

using namespace annulus;

static Lattice L2 = make_lattice(2.0);

TEST_CASE("eta1 matches high-precision lattice sum", "[elliptic]") {
  // reference: Richardson-extrapolated Eisenstein lattice sum, R = 2
  CHECK(std::abs(L2.eta1 - cplx(1.1865691104033893, 0.0)) < 1e-11);
  Lattice L4 = make_lattice(4.0);
  CHECK(std::abs(L4.eta1 - cplx(0.5932752306094347, 0.0)) < 1e-11);
}

TEST_CASE("wp matches high-precision lattice sum", "[elliptic]") {
  cplx ref(-1.3057741869224702, -3.4743446397303597);
  CHECK(std::abs(wp(cplx(0.3, 0.4), L2) - ref) < 1e-9);
}

TEST_CASE("Legendre relation", "[elliptic]") {
  cplx res = L2.eta1 * L2.omega2 - L2.eta2 * L2.omega1 - I * PI / 2.0;
  CHECK(std::abs(res) < 1e-12);
}

TEST_CASE("zeta at half periods gives eta1, eta2", "[elliptic]") {
  CHECK(std::abs(w_zeta(cplx(L2.omega1, 0.0), L2) - L2.eta1) < 1e-12);
  CHECK(std::abs(w_zeta(L2.omega2, L2) - L2.eta2) < 1e-12);
}

TEST_CASE("wp differential equation", "[elliptic]") {
  for (cplx t : {cplx(0.3, 0.4), cplx(0.51, -0.22), cplx(0.11, 2.3), cplx(-0.4, 1.0)}) {
    cplx p = wp(t, L2), pp = wp_prime(t, L2);
    cplx lhs = pp * pp;
    cplx rhs = 4.0 * p * p * p - L2.g2 * p - L2.g3;
    CHECK(std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1.0) < 1e-9);
  }
}

TEST_CASE("quasi-periodicity of zeta and sigma", "[elliptic]") {
  cplx t(0.23, 0.61);
  CHECK(std::abs(w_zeta(t + 2.0 * L2.omega1, L2) - w_zeta(t, L2) - 2.0 * L2.eta1) < 1e-10);
  CHECK(std::abs(w_zeta(t + 2.0 * L2.omega2, L2) - w_zeta(t, L2) - 2.0 * L2.eta2) < 1e-10);
  // sigma(t + 2 w) = -sigma(t) exp(2 eta (t + w))
  cplx s = w_sigma(t, L2);
  cplx s1 = w_sigma(t + 2.0 * L2.omega1, L2);
  cplx s2 = w_sigma(t + 2.0 * L2.omega2, L2);
  cplx e1 = -s * std::exp(2.0 * L2.eta1 * (t + L2.omega1));
  cplx e2 = -s * std::exp(2.0 * L2.eta2 * (t + L2.omega2));
  CHECK(std::abs(s1 - e1) / std::abs(e1) < 1e-10);
  CHECK(std::abs(s2 - e2) / std::abs(e2) < 1e-10);
}

TEST_CASE("wp periodicity", "[elliptic]") {
  cplx t(0.41, 0.17);
  CHECK(std::abs(wp(t + 2.0 * L2.omega1, L2) - wp(t, L2)) < 1e-10);
  CHECK(std::abs(wp(t + 2.0 * L2.omega2, L2) - wp(t, L2)) < 1e-10);
}

TEST_CASE("derivative relations by finite differences", "[elliptic]") {
  cplx t(0.37, 0.29);
  double h = 1e-5;
  cplx zp = (w_zeta(t + h, L2) - w_zeta(t - h, L2)) / (2.0 * h);
  CHECK(std::abs(zp + wp(t, L2)) < 1e-6);
  cplx sp = (w_sigma(t + h, L2) - w_sigma(t - h, L2)) / (2.0 * h);
  CHECK(std::abs(sp / w_sigma(t, L2) - w_zeta(t, L2)) < 1e-6);
  cplx ppd = (wp(t + h, L2) - wp(t - h, L2)) / (2.0 * h);
  CHECK(std::abs(ppd - wp_prime(t, L2)) < 1e-5);
}

TEST_CASE("parity and conjugation symmetry", "[elliptic]") {
  cplx t(0.33, 0.52);
  CHECK(std::abs(wp(-t, L2) - wp(t, L2)) < 1e-12);
  CHECK(std::abs(wp_prime(-t, L2) + wp_prime(t, L2)) < 1e-12);
  CHECK(std::abs(w_zeta(-t, L2) + w_zeta(t, L2)) < 1e-12);
  CHECK(std::abs(wp(std::conj(t), L2) - std::conj(wp(t, L2))) < 1e-12);
  CHECK(std::abs(w_sigma(std::conj(t), L2) - std::conj(w_sigma(t, L2))) < 1e-12);
}

TEST_CASE("sigma is odd with simple zero of derivative 1", "[elliptic]") {
  cplx t(0.21, 0.34);
  CHECK(std::abs(w_sigma(-t, L2) + w_sigma(t, L2)) < 1e-12);
  cplx tiny(1e-6, 2e-6);
  CHECK(std::abs(w_sigma(tiny, L2) / tiny - 1.0) < 1e-9);
}

TEST_CASE("pole detection", "[elliptic]") {
  CHECK_THROWS_AS(wp(cplx(0.0, 0.0), L2), pole_error);
  CHECK_THROWS_AS(w_zeta(2.0 * L2.omega1 + 2.0 * L2.omega2, L2), pole_error);
}

TEST_CASE("theta series equals theta product", "[theta]") {
  cplx tau = L2.tau;
  for (cplx z : {cplx(0.17, 0.05), cplx(-0.31, 0.22), cplx(0.43, -0.11)}) {
    cplx a = theta1(z, tau), b = theta1_product(z, tau);
    CHECK(std::abs(a - b) / (std::abs(a) + 1e-30) < 1e-12);
  }
}

TEST_CASE("theta against independent multiprecision values", "[theta]") {
  cplx tau = L2.tau;
  // reference: mpmath jtheta at tau = i pi / log 2
  cplx ref(-0.029319588214212067449, -0.0077240687019356396669);
  CHECK(std::abs(theta1(cplx(0.17, 0.05), tau) - ref) < 1e-14);
}

TEST_CASE("theta quasi-periodicity", "[theta]") {
  cplx tau = L2.tau;
  cplx z(0.13, 0.21);
  CHECK(std::abs(theta1(z + 1.0, tau) + theta1(z, tau)) < 1e-12);
  cplx fac = -std::exp(-I * PI * tau - 2.0 * PI * I * z);
  cplx lhs = theta1(z + tau, tau);
  cplx rhs = fac * theta1(z, tau);
  CHECK(std::abs(lhs - rhs) / (std::abs(rhs) + 1e-30) < 1e-11);
}

TEST_CASE("theta equals odd characteristic sum", "[theta]") {
  cplx tau = L2.tau;
  for (cplx z : {cplx(0.17, 0.05), cplx(-0.31, 0.22)}) {
    cplx a = theta1(z, tau), b = theta_char(0.5, 0.5, z, tau);
    CHECK(std::abs(a - b) / (std::abs(a) + 1e-30) < 1e-12);
  }
}

TEST_CASE("modular inversion for flat tori", "[theta]") {
  // tau = 0.03i has nome |q| = exp(-0.06 pi) far too close to 1 for the raw
  // sum; values frozen from mpmath jtheta
  cplx tau(0.0, 0.03);
  cplx v1 = theta1(cplx(0.31, 0.12), tau);
  cplx v2 = theta1(cplx(-0.2, 0.35), tau);
  CHECK(std::abs(v1 - cplx(-0.037362381715085465314, 0.59385805164403844681)) < 1e-12);
  CHECK(std::abs(v2 - cplx(-173.58562440126328842, 0.0)) < 1e-9);
}

TEST_CASE("theta constant ratio gives E2", "[theta]") {
  // th1'''(0)/th1'(0) = -E2(tau) in the v-argument convention; E2 value
  // frozen from a direct divisor sum at tau = i pi / log 2
  cplx ratio = theta1_d3_over_d1_at0(L2.qt);
  CHECK(std::abs(ratio + cplx(0.99999999998970749154, 0.0)) < 1e-12);
}

TEST_CASE("prime form antisymmetry and normalization", "[primeform]") {
  cplx t(0.31, 0.7), u(0.05, -0.3);
  cplx e1 = prime_form_cover(t, u, L2);
  cplx e2 = prime_form_cover(u, t, L2);
  CHECK(std::abs(e1 + e2) < 1e-12 * std::abs(e1));
  cplx d(1e-6, -2e-6);
  CHECK(std::abs(prime_form_cover(t, t - d, L2) / d - 1.0) < 1e-9);
}

TEST_CASE("lattice rejects degenerate radii", "[elliptic]") {
  CHECK_THROWS_AS(make_lattice(1.0), domain_error_ex);
  CHECK_THROWS_AS(make_lattice(0.5), domain_error_ex);
}
