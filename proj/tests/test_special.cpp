#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "etalab/etalab.hpp"

using namespace etalab;

namespace {

// F_a by integrating erfc(z) e^{-2axz} by parts; a = 0 is the limit x e^{-x^2} / sqrt(pi).
double f_a_oracle(double a, double x) {
  if (a == 0.0) return x * std::exp(-x * x) / sqrt_pi;
  return (std::exp(-x * x) - std::exp((a * a - 1.0) * x * x) * std::erfc(a * x)) / (2.0 * a);
}

}  // namespace

TEST_CASE("erfc and erfcx") {
  for (double z : {-3.0, -0.5, 0.0, 0.1, 1.0, 2.5, 5.0, 10.0}) CHECK(erfc_eval(z) == doctest::Approx(std::erfc(z)).epsilon(1e-14));
  CHECK(erfcx(0.0) == doctest::Approx(1.0));
  // asymptotic series at large argument
  for (double y : {30.0, 100.0}) {
    double s = 1.0 / (y * sqrt_pi) * (1.0 - 1.0 / (2 * y * y) + 3.0 / (4 * std::pow(y, 4)) - 15.0 / (8 * std::pow(y, 6)));
    CHECK(erfcx(y) == doctest::Approx(s).epsilon(1e-12));
  }
  CHECK(erfcx(1.0) == doctest::Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-14));
  CHECK(erfcx(-1.0) == doctest::Approx(std::exp(1.0) * std::erfc(-1.0)).epsilon(1e-14));
}

TEST_CASE("F_a closed form against an independent formula and quadrature") {
  double worst = 0.0, worst_q = 0.0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      double a = -0.95 + 1.95 * i / 19.0;
      double x = 0.01 * std::pow(500.0, j / 19.0);
      double v = f_a_eval(a, x);
      double q = f_a_eval(a, x, FaMethod::quadrature);
      worst_q = std::max(worst_q, std::abs(v - q) / std::abs(q));
      if (a > 0.05 && x < 4.0) worst = std::max(worst, std::abs(v - f_a_oracle(a, x)) / std::abs(v));
    }
  CHECK(worst_q < 1e-10);
  CHECK(worst < 1e-9);
  CHECK(f_a_eval(0.0, 0.7) == doctest::Approx(f_a_oracle(0.0, 0.7)).epsilon(1e-13));
  CHECK_THROWS_AS(f_a_eval(1.5, 1.0), Error);
}

TEST_CASE("Mellin transform of F_0 is Gamma((w+1)/2) / (2 sqrt pi)") {
  for (cplx w : {cplx(0.5, 0.0), cplx(1.3, 2.0), cplx(3.0, -1.0), cplx(-0.4, 0.7), cplx(-2.5, 0.3)}) {
    cplx expect = gamma_complex((w + 1.0) / 2.0) / (2.0 * sqrt_pi);
    CHECK(std::abs(mellin_f(0.0, w).value - expect) < 1e-11 * std::abs(expect));
  }
}

TEST_CASE("Mellin duality against direct integration") {
  for (double a : {0.0, 0.4, 1.0})
    for (cplx w : {cplx(0.5, 0.0), cplx(2.0, 1.5), cplx(4.0, -0.5)}) {
      std::function<cplx(double)> f = [&](double x) { return std::pow(x, w - 1.0) * f_a_eval(a, x); };
      cplx direct = integrate_c(f, 0.0, 1.0).value + integrate_inf_c(f, 1.0).value;
      CHECK(std::abs(mellin_f(a, w).value - direct) < 1e-8);
    }
}

TEST_CASE("Mellin residues") {
  // a = 0: poles of Gamma((w+1)/2) at w = -1 - 2m with residue (-1)^m / (m! sqrt pi)
  double fact = 1.0;
  for (int m = 0; m < 4; ++m) {
    if (m > 0) fact *= m;
    CHECK(mellin_f_residue(0.0, 1 + 2 * m) == doctest::Approx(std::pow(-1.0, m) / (fact * sqrt_pi)).epsilon(1e-12));
    CHECK(std::abs(mellin_f_residue(0.0, 2 * m)) < 1e-14);
  }
  // contour integral for general a
  for (double a : {0.3, 0.6, 1.0})
    for (int k = 0; k <= 6; ++k) {
      const int N = 96;
      cplx sum = 0.0;
      for (int j = 0; j < N; ++j) {
        cplx e = std::polar(1.0, 2 * pi * j / N);
        sum += mellin_f(a, -double(k) + 0.35 * e).value * 0.35 * e;
      }
      double r = (sum / double(N)).real();
      double c = mellin_f_residue(a, k);
      CHECK(std::abs(r - c) <= 1e-8 * std::max(std::abs(c), 1e-3));
    }
  CHECK_THROWS_AS(mellin_f(0.5, cplx(-2.0, 0.0)), PoleError);
}

TEST_CASE("Hurwitz zeta") {
  CHECK(hurwitz_zeta(2.0, 1.0).real() == doctest::Approx(pi * pi / 6).epsilon(1e-13));
  for (double q : {0.1, 0.5, 1.7}) {
    CHECK(hurwitz_zeta(0.0, q).real() == doctest::Approx(0.5 - q).epsilon(1e-12));
    CHECK(hurwitz_zeta(-1.0, q).real() == doctest::Approx(-(q * q - q + 1.0 / 6) / 2).epsilon(1e-12));
    cplx s(0.3, 2.0);
    CHECK(std::abs(hurwitz_zeta(s, q) - hurwitz_zeta(s, q + 1) - std::pow(q, -s)) < 1e-12);
  }
  CHECK_THROWS_AS(hurwitz_zeta(1.0, 1.0), Error);
}

TEST_CASE("Gamma and even zeta values") {
  for (double x : {0.3, 1.0, 2.5, 7.2}) CHECK(gamma_complex(x).real() == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
  CHECK(gamma_complex(-0.5).real() == doctest::Approx(-2 * sqrt_pi).epsilon(1e-13));
  cplx z(0.3, 1.1);
  CHECK(std::abs(gamma_complex(z) * gamma_complex(1.0 - z) - pi / std::sin(pi * z)) < 1e-12);
  CHECK(zeta_even(1) == doctest::Approx(pi * pi / 6).epsilon(1e-14));
  CHECK(zeta_even(2) == doctest::Approx(std::pow(pi, 4) / 90).epsilon(1e-14));
}
