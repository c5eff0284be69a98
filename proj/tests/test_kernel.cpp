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

double gauss(double t, double x) { return std::exp(-x * x / (4 * t)) / std::sqrt(4 * pi * t); }

}  // namespace

TEST_CASE("cutoff") {
  Cutoff phi;
  CHECK(phi(0.0) == 1.0);
  CHECK(phi(0.25) == 1.0);
  CHECK(phi(0.75) == 0.0);
  std::function<double(double)> d = [&](double x) { return phi.derivative(x); };
  CHECK(integrate(d, 0.0, 1.0).value == doctest::Approx(-1.0).epsilon(1e-12));
  std::function<double(double)> f = [&](double x) { return phi(x); };
  CHECK(integrate(f, 0.0, 1.0).value == doctest::Approx(phi.integral()).epsilon(1e-12));
  CHECK_THROWS_AS((Cutoff{0.5, 0.4}.check()), Error);
}

TEST_CASE("closed-form z-integral against quadrature") {
  for (double a : {1.0, 0.4, -0.6})
    for (double mu : {0.5, 2.5})
      for (double t : {0.01, 0.3})
        for (double s : {0.02, 0.4, 1.5}) {
          std::function<double(double)> f = [&](double z) {
            return std::exp(-(s + z) * (s + z) / (4 * t) - a * mu * z);
          };
          double q = integrate_inf(f, 0.0, 1e-16, 1e-13).value;
          CHECK(z_integral(a, mu, t, s) == doctest::Approx(q).epsilon(1e-11));
        }
}

TEST_CASE("transmission angle unfolds to the full-line kernel") {
  auto g = double_geometry(models::circle2());
  auto k = make_kernel(cutting_family(g), pi / 4);
  const double t = 0.2;
  for (auto [x, y] : {std::pair{0.1, 0.3}, std::pair{0.8, 0.05}, std::pair{1.2, 1.2}}) {
    Mat H = heat_matrix(k, t);
    Mat expect = gauss(t, x - y) * H + gauss(t, x + y) * (*g.tau) * H;
    CHECK(opnorm(Mat(kernel_at(k, t, x, y) - expect)) < 1e-14);
  }
}

TEST_CASE("heat equation, symmetry and boundary behaviour") {
  auto d = cutting_family(double_geometry(models::ladder4()));
  for (double th : {0.0, 0.3, pi / 4, -0.7}) {
    auto k = make_kernel(d, th);
    for (auto [x, y] : {std::pair{0.3, 0.5}, std::pair{0.05, 0.4}, std::pair{1.0, 1.0}}) {
      CHECK(opnorm(heat_equation_residual(k, 0.1, x, y)) < 1e-4);
      CHECK(opnorm(Mat(kernel_at(k, 0.1, x, y) - kernel_at(k, 0.1, y, x).adjoint())) < 1e-10);
    }
    auto bd = boundary_decay(k, 0.1, 0.5);
    CHECK(bd.projected_order == doctest::Approx(1.0).epsilon(0.05));
    CHECK(bd.adjoint_order == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("semigroup on a quadrature grid") {
  auto d = cutting_family(double_geometry(models::circle2()));
  auto k = make_kernel(d, 0.3);
  Grid grid = gauss_panels(0.0, 6.0, 60, 10);
  std::vector<Vec> u(grid.x.size());
  for (size_t i = 0; i < u.size(); ++i) {
    u[i] = Vec::Ones(4) * std::exp(-4 * (grid.x[i] - 1) * (grid.x[i] - 1));
    u[i](1) *= cplx(0.0, 2.0);
  }
  auto a = apply_kernel(k, 0.1, grid, u, 2);
  auto b = apply_kernel(k, 0.05, grid, a.values, 1);
  auto c = apply_kernel(k, 0.15, grid, u, 3);
  CHECK_FALSE(a.resolution_warning);
  double gap = 0, scale = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    gap = std::max(gap, (b.values[i] - c.values[i]).norm());
    scale = std::max(scale, c.values[i].norm());
  }
  CHECK(gap / scale < 1e-5);
  // coarse grid is flagged
  auto coarse = apply_kernel(k, 0.001, gauss_panels(0.0, 6.0, 4, 4), std::vector<Vec>(16, Vec::Ones(4)));
  CHECK(coarse.resolution_warning);
}

TEST_CASE("identically vanishing trace terms") {
  for (const auto& g : {double_geometry(models::ladder4()), ladder_tau()}) {
    auto d = cutting_family(g);
    for (double th : {0.0, 0.4, -1.0}) {
      auto k = make_kernel(d, th);
      for (double t : {1.0, 0.1, 0.01}) {
        CHECK(std::abs(heat_trace_terms(k, t).II) < 1e-12);
        CHECK(std::abs(eta_density_terms(k, t).I) < 1e-12);
        CHECK(std::abs(variation_trace_terms(d, th, t).It) < 1e-12);
      }
    }
  }
}

TEST_CASE("heat trace pieces") {
  auto d = cutting_family(ladder_tau());
  auto k = make_kernel(d, 0.3);
  Cutoff phi;
  const double t = 0.05;
  auto h = heat_trace_terms(k, t, phi);
  double trH = 2 * std::exp(-t) + 2 * std::exp(-6.25 * t);
  CHECK(h.I == doctest::Approx(trH * phi.integral() / std::sqrt(4 * pi * t)).epsilon(1e-13));
  // strict and limit agree once the cutoff sits far outside sqrt t
  for (double tt : {1e-3, 1e-4}) {
    auto s = heat_trace_terms(k, tt, phi);
    CHECK(std::abs(s.III_strict - s.III_limit) < 1e-9);
    auto e = eta_density_terms(k, tt, phi);
    CHECK(std::abs(e.II_strict - e.II_limit) < 1e-9);
    CHECK(std::abs(e.III_strict - e.III_limit) < 1e-9);
  }
  // the eta density vanishes with the gluing symmetry
  auto sym = make_kernel(cutting_family(double_geometry(models::ladder4())), 0.3);
  CHECK(std::abs(eta_density_terms(sym, 0.01).total_limit) < 1e-14);
}

TEST_CASE("kernel errors") {
  auto k = make_kernel(cutting_family(double_geometry(models::circle2())), 0.0);
  CHECK_THROWS_AS(kernel_at(k, -1.0, 0.5, 0.5), Error);
  CHECK_THROWS_AS(kernel_at(k, 0.1, 0.0, 0.5), Error);
}
