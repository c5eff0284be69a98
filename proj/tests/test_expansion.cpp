#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "models.hpp"

using namespace etalab;

namespace {

BoundaryGeometry ladder_tau() {
  auto g = models::ladder4();
  Mat tau = Mat::Zero(4, 4);
  tau(0, 1) = tau(1, 0) = tau(2, 3) = tau(3, 2) = 1.0;
  g.tau = tau;
  return g;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return v;
}

}  // namespace

TEST_CASE("series bookkeeping") {
  ExpansionSeries s;
  s.add(-1, 0, 2.0);
  s.add(2, 1, 0.5);
  s.add(-1, 0, 1.0);
  CHECK(s.terms.size() == 2);
  CHECK(s.coeff(-1).real() == 3.0);
  CHECK(s.coeff(0) == cplx(0.0));
  CHECK(s.has_logs());
  CHECK(s.evaluate(0.25).real() == doctest::Approx(3.0 / 0.5 + 0.5 * 0.25 * std::log(0.25)));
  CHECK_THROWS_AS(s.add(0, -1, 1.0), Error);
}

TEST_CASE("heat series against the exact trace") {
  auto g = models::ladder4();
  Mat B = g.gamma * g.A + Mat::Identity(4, 4);
  auto s = heat_series(g.A, B, 16);
  for (double t : {1e-2, 1e-3}) {
    Mat H = hermitian_function(Mat(g.A * g.A), [t](double v) { return std::exp(-t * v); });
    cplx exact = (B * H).trace();
    CHECK(std::abs(s.evaluate(t) - exact) < 1e-10);
  }
  CHECK(std::abs(spectral_zeta(g, 2.0) - (2.0 + 2.0 / 6.25)) < 1e-14);
}

TEST_CASE("eta from a power series") {
  const double c = 0.7;
  for (int two_alpha : {-1, 1, 3}) {
    ExpansionSeries s;
    s.add(two_alpha, 0, c);
    auto e = eta_from_expansion(s);
    int s0 = -1 - two_alpha;
    cplx expect = 2.0 * c / gamma_complex(-0.5 * two_alpha);
    CHECK(std::abs(e.res(s0) - expect) < 1e-10);
    CHECK(std::abs(e.reconstruct(0.3) - s.evaluate(0.3)) < 1e-10);
  }
  // integer alpha: the pole of 1/Gamma cancels the residue
  ExpansionSeries z;
  z.add(0, 0, 1.0);
  CHECK(std::abs(eta_from_expansion(z).res(-1)) < 1e-12);
  // t^{-1/2} log t gives a double pole with coefficient -4c / sqrt(pi)
  ExpansionSeries l;
  l.add(-1, 1, c);
  auto el = eta_from_expansion(l);
  CHECK(std::abs(el.res(0, 2) - (-4.0 * c / sqrt_pi)) < 1e-10);
  CHECK(std::abs(el.reconstruct(0.2) - l.evaluate(0.2)) < 1e-10);
}

TEST_CASE("reciprocal gamma Taylor coefficients") {
  auto g = reciprocal_gamma_taylor(0.0, 3);
  // 1/Gamma((s+1)/2) at s = 0 is 1/sqrt(pi), derivative psi(1/2) / (-2 sqrt(pi))
  CHECK(g[0].real() == doctest::Approx(1.0 / sqrt_pi).epsilon(1e-12));
  const double psi_half = -0.5772156649015329 - 2.0 * std::log(2.0);
  CHECK(g[1].real() == doctest::Approx(-psi_half / (2.0 * sqrt_pi)).epsilon(1e-10));
}

TEST_CASE("fit recovers a synthetic expansion") {
  std::vector<std::pair<double, double>> samples;
  for (double t : logspace(1e-3, 1e-1, 40)) samples.emplace_back(t, 2.0 / std::sqrt(t) - 1.0 + 0.5 * std::sqrt(t) + 0.25 * t);
  auto fit = fit_expansion(samples, half_integer_template(5));
  CHECK(fit.series.coeff(-1).real() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.series.coeff(0).real() == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(fit.series.coeff(1).real() == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(std::abs(fit.series.coeff(3).real()) < 1e-5);
  CHECK(fit.residual_rms < 1e-12);

  std::vector<std::pair<double, double>> few(samples.begin(), samples.begin() + 6);
  try {
    fit_expansion(few, half_integer_template(5));
    FAIL("expected a conditioning error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::conditioning);
  }
  std::vector<std::pair<double, double>> narrow;
  for (double t : logspace(1e-2, 2e-2, 40)) narrow.emplace_back(t, 1.0 / std::sqrt(t));
  CHECK_THROWS_AS(fit_expansion(narrow, half_integer_template(4)), Error);
}

TEST_CASE("predicted expansion matches the limit traces") {
  for (const auto& g : {ladder_tau(), double_geometry(models::circle2())}) {
    auto d = cutting_family(g);
    for (double th : {0.0, 0.35, -0.8}) {
      auto k = make_kernel(d, th);
      auto p0 = trace_expansion_predict(d, th, 0, 10);
      auto p1 = trace_expansion_predict(d, th, 1, 10);
      for (double t : {1e-3, 1e-4}) {
        double scale = 1.0 / std::sqrt(t);
        CHECK(std::abs(p0.evaluate(t).real() - heat_trace_terms(k, t).total_limit) < 1e-9 * scale);
        CHECK(std::abs(p1.evaluate(t).real() - eta_density_terms(k, t).total_limit) < 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("regularity of eta at zero") {
  for (const auto& g : {ladder_tau(), double_geometry(models::fiber4())}) {
    auto d = cutting_family(g);
    for (double th : {-1.3, -0.4, 0.0, 0.5, 1.2}) CHECK(std::abs(residue_at_zero(d, th)) < 1e-8);
  }
}

TEST_CASE("contour shift for the third term") {
  auto k = make_kernel(cutting_family(ladder_tau()), 0.3);
  for (double t : {0.01, 0.2}) {
    auto c = contour_check_III(k, t);
    CHECK(c.line == doctest::Approx(c.direct).epsilon(1e-8));
    CHECK(c.shifted == doctest::Approx(c.direct).epsilon(1e-8));
  }
  CHECK_THROWS_AS(contour_check_III(k, 0.1, 2.0, 3), Error);  // shifted line through a pole
}

TEST_CASE("noncommutative residue in the finite model") {
  auto g = models::fiber4();
  auto sp = spectral_parts(g);
  auto r = noncomm_residue_model(g, sp.P_gt0);
  CHECK(r.idempotent);
  CHECK(std::abs(r.value) < 1e-12);
  CHECK(std::abs(noncomm_residue_model(g, sp.sgnA).value) < 1e-12);
  Mat B = Mat::Random(4, 4);
  B = B - sp.P_0 * B * sp.P_0;
  auto rb = noncomm_residue_model(g, B);
  CHECK_FALSE(rb.idempotent);
  CHECK(std::abs(rb.value) < 1e-12);
  CHECK_THROWS_AS(noncomm_residue_model(g, Mat::Identity(4, 4)), Error);
}
