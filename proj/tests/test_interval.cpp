#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "models.hpp"

using namespace etalab;

namespace {

// Periodic circle of length L: D = gamma(ik + A) on e^{ikx}, squares to k^2 + A^2.
std::vector<double> periodic_circle2(double L, double lo, double hi) {
  std::vector<double> out;
  for (int j = -200; j <= 200; ++j) {
    double k = 2 * pi * j / L;
    double e = std::sqrt(1.0 + k * k);
    for (double v : {e, -e})
      if (v >= lo && v <= hi) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> expand(const SpectrumSlice& s) {
  std::vector<double> v;
  for (const auto& l : s.levels)
    for (int i = 0; i < l.mult; ++i) v.push_back(l.lambda);
  return v;
}

}  // namespace

TEST_CASE("transfer matrix against the matrix exponential") {
  for (const auto& g : {models::ladder4(), models::fiber4(), double_geometry(models::circle2())}) {
    for (double lambda : {0.0, 0.7, 2.2, -4.0})
      for (double len : {0.3, 1.0}) {
        Mat M = len * (-g.A - lambda * g.gamma);
        Mat expect = M.exp();
        CHECK(opnorm(Mat(transfer_matrix(g, lambda, len) - expect)) < 1e-11 * std::max(1.0, opnorm(expect)));
      }
  }
  CHECK_THROWS_AS(transfer_matrix(models::ladder4(), 0.0, 1000.0), Error);
}

TEST_CASE("transmission angle with -I gives the periodic spectrum") {
  auto m = make_cut_circle(models::circle2(), 2.0, pi / 4);
  auto r = spectrum_in(m, -20.0, 20.0);
  auto got = expand(r.slice);
  auto expect = periodic_circle2(2.0, -20.0, 20.0);
  REQUIRE(got.size() == expect.size());
  for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-10));
  CHECK_FALSE(r.completeness_warning);
  for (double l : {expect[3], expect[10]}) {
    CHECK(std::abs(boundary_determinant(m, l)) < 1e-8);
    Eigen::JacobiSVD<Mat> svd(folded_system(m, l));
    CHECK(svd.singularValues().tail(1)(0) < 1e-8 * svd.singularValues()(0));
  }
}

TEST_CASE("found eigenvalues are zeros of the folded system") {
  auto m = make_cut_circle(models::fiber4(), 2.0, 0.3);
  auto r = spectrum_in(m, -15.0, 15.0);
  REQUIRE(r.slice.levels.size() > 10);
  for (const auto& l : r.slice.levels) {
    Eigen::JacobiSVD<Mat> svd(folded_system(m, l.lambda));
    auto sv = svd.singularValues();
    CHECK(sv(sv.size() - l.mult) < 1e-7 * sv(0));
    Mat W = boundary_unitary(m, l.lambda);
    Eigen::ComplexEigenSolver<Mat> es(W);
    int ones = 0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) ones += std::abs(es.eigenvalues()(i) - 1.0) < 1e-6;
    CHECK(ones == l.mult);
  }
}

TEST_CASE("Weyl law") {
  for (double th : {0.0, 0.3, pi / 4}) {
    auto m = make_cut_circle(models::fiber4(), 2.0, th);
    auto r = spectrum_in(m, -100.0, 100.0);
    double n = double(m.base.n());
    double weyl = 2.0 / pi * n / 2 * 200.0;
    long count = 0;
    for (const auto& l : r.slice.levels) count += l.mult;
    CHECK(std::abs(count - weyl) / weyl < 0.02);
  }
}

TEST_CASE("gluing symmetry forces a symmetric spectrum") {
  for (double th : {0.0, 0.3, -0.9}) {
    auto m = make_cut_circle(models::fiber4(), 2.0, th);  // -I twist keeps mu a symmetry
    auto v = expand(spectrum_in(m, -25.0, 25.0).slice);
    std::vector<double> neg;
    for (auto it = v.rbegin(); it != v.rend(); ++it) neg.push_back(-*it);
    REQUIRE(neg.size() == v.size());
    for (size_t i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(neg[i]).epsilon(1e-9));
  }
}

TEST_CASE("threads do not change the result") {
  auto m = make_cut_circle(models::fiber4(), 2.0, 0.3);
  SolveOptions a, b;
  b.threads = 3;
  auto x = spectrum_in(m, -40.0, 40.0, a).slice;
  auto y = spectrum_in(m, -40.0, 40.0, b).slice;
  REQUIRE(x.levels.size() == y.levels.size());
  for (size_t i = 0; i < x.levels.size(); ++i) {
    CHECK(x.levels[i].lambda == y.levels[i].lambda);
    CHECK(x.levels[i].mult == y.levels[i].mult);
  }
}

TEST_CASE("spectral flow") {
  auto base = models::fiber4();
  std::vector<double> us;
  for (int i = 0; i <= 32; ++i) us.push_back(2 * pi * i / 32);
  auto constant = spectral_flow([&](double) { return make_cut_circle(base, 2.0, 0.2); }, us, 5.0);
  CHECK(constant.flow == 0);
  // twisting one K+ direction once round the circle moves one eigenvalue through 0
  auto twisted = spectral_flow(
      [&](double u) {
        Mat T = -Mat::Identity(2, 2);
        T(0, 0) *= std::polar(1.0, u);
        return make_cut_circle(base, 2.0, pi / 4, T);
      },
      us, 5.0);
  CHECK(std::abs(twisted.flow) == 1);
}

TEST_CASE("cut spectrum carries a tail") {
  auto m = make_cut_circle(models::circle2(), 2.0, pi / 4);
  auto r = cut_spectrum(m, 300.0);
  REQUIRE(r.slice.tail.has_value());
  CHECK(r.slice.tail->h == doctest::Approx(pi).epsilon(1e-6));
  auto e = eta_regularized(r.slice);
  CHECK(std::abs(e.eta0) < 1e-8);
  CHECK_THROWS_AS(make_cut_circle(models::fiber4(), 2.0, 0.0, models::phase(0.0, 3)), Error);
}
