#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "models.hpp"

using namespace etalab;

TEST_CASE("valid geometries pass, broken ones name the identity") {
  for (const auto& g : {models::circle2(), models::ladder4(), double_geometry(models::circle2())}) {
    auto r = validate_geometry(g);
    CHECK(r.passed);
    CHECK(r.max_violation() < 1e-12);
  }
  auto g = models::circle2();
  g.A(0, 0) = 2.0;  // spectrum no longer symmetric, gamma A + A gamma != 0
  auto r = validate_geometry(g);
  CHECK_FALSE(r.passed);
  CHECK(r.failures().find("gamma A + A gamma = 0") != std::string::npos);
  CHECK_THROWS_AS(require_valid(g), Error);

  auto odd = models::circle2();
  odd.A = Mat::Identity(3, 3);
  CHECK_THROWS_AS(validate_geometry(odd), Error);
}

TEST_CASE("tolerance override") {
  auto g = models::circle2();
  g.A(0, 1) = 1e-9;  // non-Hermitian at the 1e-9 level
  CHECK_FALSE(validate_geometry(g).passed);
  CHECK(validate_geometry(g, 1e-6).passed);
}

TEST_CASE("spectral parts") {
  auto sp = spectral_parts(models::ladder4());
  CHECK(sp.abs_spaces.size() == 2);
  CHECK(sp.abs_spaces[0].lambda == doctest::Approx(1.0));
  CHECK(sp.abs_spaces[1].multiplicity() == 2);
  Mat I = Mat::Identity(4, 4);
  CHECK(opnorm(Mat(sp.P_gt0 + sp.P_lt0 + sp.P_0 - I)) < 1e-14);
  CHECK(opnorm(Mat(sp.absA * sp.sgnA - models::ladder4().A)) < 1e-14);
}

TEST_CASE("kernel split and reflection") {
  auto g = models::fiber4();
  auto ks = kernel_split(g);
  CHECK(ks.K_plus.cols() == 1);
  CHECK(ks.K_minus.cols() == 1);
  CHECK(opnorm(Mat(g.gamma * ks.K_plus - cplx(0, 1) * ks.K_plus)) < 1e-14);
  CHECK(opnorm(Mat(g.gamma * ks.K_minus + cplx(0, 1) * ks.K_minus)) < 1e-14);
  Mat s = kernel_reflection(g, models::phase(0.4, 1));
  g.sigma = s;
  CHECK(validate_geometry(g).passed);
  // sigma^2 = I on ker A only
  auto sp = spectral_parts(g);
  CHECK(opnorm(Mat(s * s - sp.P_0)) < 1e-14);
}

TEST_CASE("missing reflection on a nontrivial kernel is a configuration error") {
  try {
    generic_family(models::fiber4(), [](double) { return Mat::Zero(4, 4).eval(); });
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
    CHECK(std::string(e.what()).find("Lagrangian reflection") != std::string::npos);
  }
}

TEST_CASE("doubled geometry and the gluing symmetry") {
  auto g = double_geometry(models::fiber4());
  CHECK(g.n() == 8);
  REQUIRE(g.tau.has_value());
  REQUIRE(g.sigma.has_value());
  CHECK(validate_geometry(g).passed);
  Mat mu = gluing_symmetry(4);
  CHECK(opnorm(Mat(mu * mu + Mat::Identity(8, 8))) < 1e-15);
  CHECK(opnorm(Mat(mu * g.A + g.A * mu)) < 1e-15);
  CHECK(opnorm(Mat(mu * g.gamma + g.gamma * mu)) < 1e-15);
  CHECK(opnorm(Mat(mu * *g.tau + *g.tau * mu)) < 1e-15);
  // distinguished reflection is -tau on ker A~
  auto sp = spectral_parts(g);
  CHECK(opnorm(Mat(*g.sigma + *g.tau * sp.P_0)) < 1e-14);
}

TEST_CASE("cutting family axioms") {
  auto d = cutting_family(double_geometry(models::fiber4()));
  for (double th : {-1.2, -0.3, 0.0, 0.4, pi / 4, 1.3}) {
    auto r = validate_deformation(d, th);
    INFO("theta = " << th << " failures: " << r.failures());
    CHECK(r.passed);
    CHECK(a_of_theta(d, th) == doctest::Approx(std::cos(2 * th)).epsilon(1e-12));
    // c(lambda) = 2 tr_{ker(|A| - lambda)} P
    for (const auto& e : d.parts.abs_spaces) {
      cplx tr = (e.basis.adjoint() * projection(d, th) * e.basis).trace();
      CHECK(std::abs(tr - 0.5 * e.multiplicity()) < 1e-12);
    }
  }
  Mat U = unitary(d, 0.3) * unitary(d, 0.5);
  CHECK(opnorm(Mat(U - unitary(d, 0.8))) < 1e-13);
  CHECK_THROWS_AS(projection(d, pi / 2), Error);
}

TEST_CASE("pi/4 is the transmission condition away from ker A") {
  auto g = double_geometry(models::circle2());
  auto d = cutting_family(g);
  Mat P = projection(d, pi / 4);
  Mat expect = 0.5 * (Mat::Identity(4, 4) - *g.tau);
  CHECK(opnorm(Mat(P - expect)) < 1e-14);
  CHECK(opnorm(Mat(projection(d, 0.0) - d.parts.P_gt0)) < 1e-14);
}

TEST_CASE("generic family reproduces the cutting family and fits a") {
  auto g = double_geometry(models::ladder4());
  auto cut = cutting_family(g);
  Mat S = cut.parts.sgnA * *g.tau;  // anti-Hermitian
  auto gen = generic_family(g, [S](double th) { return Mat(cplx(0, -1) * th * S); });
  for (double th : {0.2, 0.7, 1.1}) {
    CHECK(opnorm(Mat(projection(gen, th) - projection(cut, th))) < 1e-12);
    CHECK(a_of_theta(gen, th) == doctest::Approx(std::cos(2 * th)).epsilon(1e-10));
    CHECK(opnorm(Mat(generator_derivative(gen, th) - cplx(0, -1) * S)) < 1e-7);
    CHECK(validate_deformation(gen, th).passed);
  }
  // a generator that breaks gamma P = (I - P) gamma is reported, not trusted
  Mat bad = Mat::Zero(8, 8);
  bad(0, 0) = 1.0;
  auto wrong = generic_family(g, [bad](double th) { return Mat(th * bad); }, [](double) { return 1.0; });
  CHECK_FALSE(validate_deformation(wrong, 0.5).passed);
}
