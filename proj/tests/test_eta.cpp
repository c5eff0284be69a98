#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "models.hpp"

using namespace etalab;

namespace {

// Two classes per period on each side with a 1/(m+1) drift; eta(0) = sum over classes of (q_minus - q_plus).
SpectrumSlice lattice(double h, std::vector<double> dp, std::vector<double> dm, double c, double Lambda,
                      std::vector<SpectralLevel> extra = {}) {
  std::vector<SpectralLevel> lv = extra;
  for (int m = 0;; ++m) {
    bool any = false;
    for (size_t j = 0; j < dp.size(); ++j) {
      double lp = h * (m + dp[j]) + c / (m + 1.0);
      double lm = h * (m + dm[j]) + 0.5 * c / (m + 1.0);
      if (lp <= Lambda) lv.push_back({lp, 1}), any = true;
      if (lm <= Lambda) lv.push_back({-lm, 1}), any = true;
    }
    if (!any) break;
  }
  return make_slice(lv, Lambda);
}

}  // namespace

TEST_CASE("finite spectra") {
  Mat H = Mat::Zero(4, 4);
  H.diagonal() << 1.0, 2.0, -3.0, 0.0;
  auto e = eta_of_matrix(H);
  CHECK(e.eta0 == doctest::Approx(1.0));
  CHECK(e.dim_ker == 1);
  CHECK(e.xi == doctest::Approx(1.0));
  CHECK(e.eta_bar == doctest::Approx(0.0));
  // symmetric spectrum: eta = 0 exactly
  H.diagonal() << 1.5, -1.5, 0.2, -0.2;
  CHECK(eta_of_matrix(H).eta0 == 0.0);
  auto s = make_slice({{0.5, 1}, {0.5 + 1e-12, 2}, {-2.0, 1}}, 3.0);
  CHECK(s.levels.size() == 2);
  CHECK(s.levels[1].mult == 3);
  CHECK_THROWS_AS(eta_regularized(s), Error);  // neither complete nor tailed
}

TEST_CASE("Hurwitz continuation of a shifted lattice") {
  const double h = pi;
  std::vector<double> dp{0.2, 0.55}, dm{0.35, 0.9};
  double expect = (dm[0] + dm[1]) - (dp[0] + dp[1]);
  for (double c : {0.0, 0.3}) {
    auto s = lattice(h, dp, dm, c, 2000.0);
    s.tail = fit_tail(s, 2, h);
    CHECK(s.tail->h == doctest::Approx(h).epsilon(1e-9));
    auto e = eta_regularized(s);
    CHECK(e.eta0 == doctest::Approx(expect).epsilon(1e-8));
    CHECK(e.error_estimate < 1e-6);
    // Richardson on partial sums is only a rough cross-check
    CHECK(e.richardson == doctest::Approx(expect).epsilon(1e-3));
  }
  // a head of isolated levels and a kernel
  auto s = lattice(h, dp, dm, 0.0, 1000.0, {{0.0, 2}, {0.05, 1}});
  s.tail = fit_tail(s, 2, h);
  auto e = eta_regularized(s);
  CHECK(e.dim_ker == 2);
  CHECK(e.eta0 == doctest::Approx(expect + 1.0).epsilon(1e-8));
  CHECK(e.xi == doctest::Approx(0.5 * (expect + 1.0) + 1.0).epsilon(1e-8));
  CHECK(std::abs(e.tau - std::polar(1.0, 2 * pi * e.xi)) < 1e-14);
  CHECK(e.eta_bar >= 0.0);
  CHECK(e.eta_bar < 1.0);
  CHECK(std::abs(std::polar(1.0, 2 * pi * e.eta_bar) - e.tau) < 1e-12);
}

TEST_CASE("eta function at Re s > 0 is the convergent sum") {
  auto s = lattice(1.0, {0.25}, {0.5}, 0.0, 4000.0);
  s.tail = fit_tail(s, 1, 1.0);
  // eta(2) = zeta(3, 0.25) - zeta(3, 0.5) for weights sgn(lambda) |lambda|^{-s}
  cplx v = eta_function(s, 2.0);
  cplx expect = hurwitz_zeta(2.0, 0.25) - hurwitz_zeta(2.0, 0.5);
  CHECK(std::abs(v - expect) < 1e-9);
}

TEST_CASE("tail fit failures") {
  auto s = lattice(1.0, {0.25}, {0.5}, 0.0, 10.0);
  CHECK_THROWS_AS(fit_tail(s, 1, 1.0), Error);  // too few levels
  auto wide = lattice(1.0, {0.25}, {0.5}, 0.0, 400.0);
  CHECK_THROWS_AS(fit_tail(wide, 1, 1.1), Error);  // wrong period
  // a non-lattice spectrum is refused at evaluation time
  std::vector<SpectralLevel> lv;
  for (int m = 1; m < 400; ++m) lv.push_back({std::sqrt(double(m)) * 10, 1}), lv.push_back({-std::sqrt(double(m)) * 10, 1});
  auto bad = make_slice(lv, 200.0);
  bool threw = false;
  try {
    bad.tail = fit_tail(bad, 1, 10.0 / (2 * std::sqrt(300.0)));
    eta_regularized(bad);
  } catch (const Error&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("Maslov index") {
  std::vector<double> beta{0.3, -1.2, 2.9};
  Mat T1 = Mat::Identity(3, 3);
  Mat T2 = Mat::Zero(3, 3);
  for (int i = 0; i < 3; ++i) T2(i, i) = -std::polar(1.0, beta[i]);  // -T1 T2 = diag(e^{i beta})
  double expect = -(beta[0] + beta[1] + beta[2]) / pi;
  CHECK(std::abs(maslov_index(T1, T2) - expect) < 1e-12);
  // conjugation invariance
  Eigen::HouseholderQR<Mat> qr(Mat::Random(3, 3));
  Mat V = qr.householderQ();
  CHECK(std::abs(maslov_index(V * T1 * V.adjoint(), V * T2 * V.adjoint()) - expect) < 1e-12);
  Mat T3 = Mat::Identity(3, 3);
  CHECK_THROWS_AS(maslov_index(T1, T3), Error);  // -T1 T3 = -I sits on the branch cut
}

TEST_CASE("variation right-hand sides") {
  auto U = [](double u) {
    Mat m = Mat::Identity(2, 2);
    m(0, 0) = std::polar(1.0, u);
    return m;
  };
  for (double u : {0.0, 1.0, 5.0}) CHECK(variation_kernel_twist(U, u) == doctest::Approx(1.0 / (2 * pi)).epsilon(1e-9));
  CHECK(variation_kernel_twist([](double) { return Mat(); }, 0.3) == 0.0);
  // the gluing symmetry kills the rate along the cutting family
  auto d = cutting_family(double_geometry(models::fiber4()));
  for (double th : {0.0, 0.6}) {
    auto v = variation_rhs(d, th);
    CHECK(std::abs(v.d_eta_bar) < 1e-14);
    CHECK(std::abs(v.d_res) < 1e-14);
  }
}

TEST_CASE("integrality bookkeeping") {
  std::vector<double> grid, zero, one;
  for (int i = 0; i <= 20; ++i) {
    grid.push_back(2 * pi * i / 20);
    zero.push_back(0.0);
    one.push_back(1.0 / (2 * pi));
  }
  CHECK(integrality_check(0.3, 0.3, grid, zero).nearest_int_distance == 0.0);
  auto r = integrality_check(0.25, 0.25, grid, one);
  CHECK(r.integral == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(r.nearest_int_distance < 1e-12);
}

TEST_CASE("gluing check verdicts") {
  auto s = lattice(1.0, {0.25}, {0.75}, 0.0, 400.0);
  s.tail = fit_tail(s, 1, 1.0);
  auto g = gluing_check(s, s, Mat(), 0);
  CHECK(g.verdict == "pass");
  CHECK(g.gap < 1e-12);
  CHECK_FALSE(g.separating);
  CHECK_FALSE(g.maslov.has_value());
  auto f = gluing_check(s, s, models::phase(1.0, 1), 0);
  CHECK(f.verdict == "fail");
  auto i = gluing_check(s, s, models::phase(1e-4, 1), 0, 1e-20);
  CHECK(i.verdict == "inconclusive");
}
