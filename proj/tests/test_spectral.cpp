#include <catch2/catch_amalgamated.hpp>

#include <annulus/spectral.hpp>

using namespace annulus;

TEST_CASE("eigenvalue closed form vs discrete Laplacian", "[spectral]") {
  AnnulusDomain dom = make_annulus(2.0);
  EigenMode md = eigen_mode(2, 3, dom);
  double w = dom.lattice.omega1;
  CHECK(std::abs(md.lambda - (4.0 * PI * PI / (w * w) + 9.0)) < 1e-14);
  auto u = [&](double x, double y) {
    return eigen_function(md.m, md.n, std::exp(cplx(x, y)), dom);
  };
  double x0 = 0.4 * w, y0 = 1.3, h = 1e-4;
  double lap = (u(x0 + h, y0) + u(x0 - h, y0) + u(x0, y0 + h) + u(x0, y0 - h) -
                4.0 * u(x0, y0)) /
               (h * h);
  CHECK(std::abs(-lap - md.lambda * u(x0, y0)) < 1e-5);
}

TEST_CASE("eigenfunction orthonormality by quadrature", "[spectral]") {
  AnnulusDomain dom = make_annulus(2.0);
  double w = dom.lattice.omega1;
  int N = 64;
  double ip_1112 = 0.0, ip_1111 = 0.0;
  for (int i = 0; i < N; ++i) {
    double x = w * (i + 0.5) / N;
    for (int j = 0; j < N; ++j) {
      double y = 2.0 * PI * j / N;
      cplx z = std::exp(cplx(x, y));
      double u11 = eigen_function(1, 1, z, dom);
      double u12 = eigen_function(1, 2, z, dom);
      double dA = (w / N) * (2.0 * PI / N);
      ip_1112 += u11 * u12 * dA;
      ip_1111 += u11 * u11 * dA;
    }
  }
  CHECK(std::abs(ip_1112) < 1e-8);
  CHECK(std::abs(ip_1111 - 1.0) < 1e-8);
}

TEST_CASE("partial sums approach the closed Green's function", "[spectral]") {
  AnnulusDomain dom = make_annulus(2.0);
  cplx z = 1.7 * std::exp(I * (0.3 + PI)), a = 1.25 * std::exp(I * 0.3);
  double gt = theta_greens(z, a, dom);
  double gs = eigen_partial_sum(z, a, dom, 1.1, 200, 200);
  CHECK(std::abs(gs - gt) / std::abs(gt) < 0.05);
}

TEST_CASE("rotation invariance of the mode sum", "[spectral]") {
  AnnulusDomain dom = make_annulus(2.0);
  cplx z = 1.7 * std::exp(I * 2.4), a = 1.25 * std::exp(I * 0.3);
  cplx rot = std::exp(I * 0.83);
  double g1 = eigen_partial_sum(z, a, dom, 1.3, 40, 40);
  double g2 = eigen_partial_sum(rot * z, rot * a, dom, 1.3, 40, 40);
  CHECK(std::abs(g1 - g2) < 1e-10);
}

TEST_CASE("theta route agrees with the default formula", "[spectral]") {
  AnnulusDomain dom = make_annulus(2.0);
  cplx z = 1.7 * std::exp(I * 2.4), a = 1.25 * std::exp(I * 0.3);
  CHECK(std::abs(theta_greens(z, a, dom) - greens(z, a, dom).value) < 1e-10);
}

TEST_CASE("spectral validation", "[spectral]") {
  AnnulusDomain dom = make_annulus(2.0);
  cplx z = 1.7, a = cplx(0.0, 1.25);
  CHECK_THROWS_AS(eigen_mode(0, 1, dom), domain_error_ex);
  CHECK_THROWS_AS(eigen_partial_sum(z, a, dom, 0.9, 10, 10), domain_error_ex);
  CHECK_THROWS_AS(eigen_partial_sum(z, a, dom, 1.5, 500, 10), domain_error_ex);
}
