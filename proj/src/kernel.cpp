#include "etalab/kernel.hpp"

#include "etalab/special.hpp"

#include <algorithm>

namespace etalab {

namespace {

const char* kModule = "heat-kernel";

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::domain, kModule, std::string(name) + " must be > 0");
}

// Adaptive quadrature over consecutive breakpoints.
double integrate_pieces(const std::function<double(double)>& f, std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double v = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) v += integrate(f, pts[i], pts[i + 1], 1e-15, 1e-12).value;
  return v;
}

std::vector<double> trace_breaks(const Cutoff& phi, double t) {
  const double w = std::sqrt(t);
  std::vector<double> pts{0.0, phi.r0, phi.r1};
  for (double m : {1.0, 4.0, 10.0})
    if (m * w < phi.r1) pts.push_back(m * w);
  return pts;
}

double fit_order(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0)) continue;
    double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::infinity();  // identically zero
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double re_trace(const Mat& m) { return m.trace().real(); }

}  // namespace

double Cutoff::operator()(double x) const {
  if (x <= r0) return 1.0;
  if (x >= r1) return 0.0;
  double s = (x - r0) / (r1 - r0);
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double Cutoff::derivative(double x) const {
  if (x <= r0 || x >= r1) return 0.0;
  double s = (x - r0) / (r1 - r0);
  double q = 1.0 - s * s;
  return (*this)(x) * (-2.0 * s / (q * q)) / (r1 - r0);
}

double Cutoff::integral() const {
  check();
  return r0 + integrate([this](double x) { return (*this)(x); }, r0, r1, 1e-16, 1e-14).value;
}

void Cutoff::check() const {
  if (!(r0 > 0.0 && r1 > r0 && r1 < 1.0))
    throw Error(ErrorKind::configuration, kModule, "cutoff needs 0 < r0 < r1 < 1");
}

SommerfeldKernel make_kernel(const ApsDeformation& d, double theta) {
  SommerfeldKernel k;
  k.deformation = d;
  k.theta = theta;
  k.a = a_of_theta(d, theta);
  if (!(k.a > -1.0)) throw Error(ErrorKind::domain, kModule, "a(theta) must exceed -1");
  k.P = projection(d, theta);
  const Index n = d.geometry.n();
  k.I_minus_P = Mat::Identity(n, n) - k.P;
  k.A2 = d.geometry.A * d.geometry.A;
  for (const auto& s : d.parts.abs_spaces) {
    SommerfeldKernel::Block b;
    b.mu = s.lambda;
    b.Q = s.projector();
    b.c = static_cast<double>(s.multiplicity());
    k.blocks.push_back(b);
  }
  k.Q0 = d.parts.P_0;
  return k;
}

Mat heat_matrix(const SommerfeldKernel& k, double t) {
  Mat h = k.Q0;
  for (const auto& b : k.blocks) h += std::exp(-t * b.mu * b.mu) * b.Q;
  return h;
}

double z_integral(double a, double mu, double t, double s) {
  const double rt = std::sqrt(t);
  const double y = (s + 2.0 * a * mu * t) / (2.0 * rt);
  const double pref = std::sqrt(pi * t);
  if (y >= 0.0) return pref * std::exp(-s * s / (4.0 * t)) * erfcx(y);
  // erfc(y) = 2 - erfc(-y) for y < 0
  return pref * (2.0 * std::exp(a * mu * s + a * a * mu * mu * t) - std::exp(-s * s / (4.0 * t)) * erfcx(-y));
}

KernelPieces kernel_pieces(const SommerfeldKernel& k, double t, double x, double y) {
  require_positive(t, "t");
  require_positive(x, "x");
  require_positive(y, "y");
  const Index n = k.P.rows();
  Mat H = heat_matrix(k, t);
  const double norm = 1.0 / std::sqrt(4.0 * pi * t);
  KernelPieces p;
  p.free_part = norm * std::exp(-(x - y) * (x - y) / (4.0 * t)) * H;
  p.image_part = norm * std::exp(-(x + y) * (x + y) / (4.0 * t)) * (Mat::Identity(n, n) - 2.0 * k.P) * H;
  p.third_part = Mat::Zero(n, n);
  if (k.a != 0.0) {
    for (const auto& b : k.blocks) {
      double c = -k.a * b.mu * std::exp(-t * b.mu * b.mu) * z_integral(k.a, b.mu, t, x + y);
      p.third_part += c * b.Q;
    }
    p.third_part = (1.0 / std::sqrt(pi * t)) * k.I_minus_P * p.third_part;
  }
  return p;
}

Mat kernel_at(const SommerfeldKernel& k, double t, double x, double y) {
  auto p = kernel_pieces(k, t, x, y);
  return p.free_part + p.image_part + p.third_part;
}

ApplyResult apply_kernel(const SommerfeldKernel& k, double t, const Grid& grid, const std::vector<Vec>& u,
                         int threads) {
  require_positive(t, "t");
  if (static_cast<Index>(u.size()) != grid.size())
    throw Error(ErrorKind::structural, kModule, "sample count does not match the grid");
  ApplyResult r;
  const Index n = k.P.rows();
  r.values.assign(u.size(), Vec::Zero(n));
  if (grid.max_spacing > 0.5 * std::sqrt(t)) {
    r.resolution_warning = true;
    r.note = "grid spacing exceeds sqrt(t)/2, kernel is under-resolved";
  }
  const int N = static_cast<int>(u.size());
  parallel_for(N, threads, [&](int i) {
    Vec acc = Vec::Zero(n);
    for (int j = 0; j < N; ++j) {
      if (u[j].squaredNorm() == 0.0) continue;
      acc += grid.w[j] * (kernel_at(k, t, grid.x[i], grid.x[j]) * u[j]);
    }
    r.values[i] = acc;
  });
  return r;
}

Mat heat_equation_residual(const SommerfeldKernel& k, double t, double x, double y) {
  double h = 1e-2 * std::pow(t, 0.75);
  h = std::min(h, 0.25 * x);
  double ht = std::min(1e-2 * std::pow(t, 0.75), 0.25 * t);
  auto d2x = [&](double hh) {
    return Mat((kernel_at(k, t, x + hh, y) - 2.0 * kernel_at(k, t, x, y) + kernel_at(k, t, x - hh, y)) / (hh * hh));
  };
  auto dt = [&](double hh) { return Mat((kernel_at(k, t + hh, x, y) - kernel_at(k, t - hh, x, y)) / (2.0 * hh)); };
  Mat Kxx = (4.0 * d2x(0.5 * h) - d2x(h)) / 3.0;
  Mat Kt = (4.0 * dt(0.5 * ht) - dt(ht)) / 3.0;
  return Kt - Kxx + k.A2 * kernel_at(k, t, x, y);
}

BoundaryDecay boundary_decay(const SommerfeldKernel& k, double t, double y, const std::vector<double>& xs) {
  BoundaryDecay b;
  const auto& G = k.deformation.geometry.gamma;
  Mat At = deformed_tangential(k.deformation, k.theta);
  for (double x : xs) {
    b.xs.push_back(x);
    b.projected.push_back(opnorm(k.P * kernel_at(k, t, x, y)));
    double h = 0.25 * x;
    auto dx = [&](double hh) {
      return Mat((kernel_at(k, t, x + hh, y) - kernel_at(k, t, x - hh, y)) / (2.0 * hh));
    };
    Mat Kx = (4.0 * dx(0.5 * h) - dx(h)) / 3.0;
    Mat v = G * (k.I_minus_P * Kx + At * k.I_minus_P * kernel_at(k, t, x, y));
    b.adjoint.push_back(opnorm(v));
  }
  b.projected_order = fit_order(b.xs, b.projected);
  b.adjoint_order = fit_order(b.xs, b.adjoint);
  return b;
}

HeatTraceTerms heat_trace_terms(const SommerfeldKernel& k, double t, const Cutoff& phi) {
  require_positive(t, "t");
  phi.check();
  const Index n = k.P.rows();
  HeatTraceTerms r;
  Mat H = heat_matrix(k, t);
  const double norm = 1.0 / std::sqrt(4.0 * pi * t);
  const auto breaks = trace_breaks(phi, t);
  r.I = norm * phi.integral() * re_trace(H);
  double gauss = integrate_pieces([&](double x) { return phi(x) * std::exp(-x * x / t); }, breaks);
  r.II = norm * gauss * re_trace((Mat::Identity(n, n) - 2.0 * k.P) * H);

  // tr[(I - P) Q_mu] = c(mu)/2 is evaluated, not assumed
  std::vector<double> w;
  for (const auto& b : k.blocks) w.push_back(re_trace(k.I_minus_P * b.Q));
  auto diag3 = [&](double x) {
    double s = 0.0;
    for (size_t i = 0; i < k.blocks.size(); ++i) {
      const auto& b = k.blocks[i];
      s += -k.a * b.mu * std::exp(-t * b.mu * b.mu) * z_integral(k.a, b.mu, t, 2.0 * x) * w[i];
    }
    return s / std::sqrt(pi * t);
  };
  if (k.a != 0.0) {
    r.III_strict = integrate_pieces([&](double x) { return phi(x) * diag3(x); }, breaks);
    for (const auto& b : k.blocks) r.III_limit += -0.5 * k.a * b.c * f_a_eval(k.a, std::sqrt(t) * b.mu);
  }
  r.total_strict = r.I + r.II + r.III_strict;
  r.total_limit = r.I + r.II + r.III_limit;
  return r;
}

EtaDensityTerms eta_density_terms(const SommerfeldKernel& k, double t, const Cutoff& phi) {
  require_positive(t, "t");
  phi.check();
  const Index n = k.P.rows();
  const auto& g = k.deformation.geometry;
  Mat GA = g.gamma * g.A;
  Mat H = heat_matrix(k, t);
  const double norm = 1.0 / std::sqrt(4.0 * pi * t);
  const auto breaks = trace_breaks(phi, t);
  EtaDensityTerms r;
  r.tr_gamma_heat = std::abs((g.gamma * H).trace());
  r.tr_gamma_P_heat = std::abs((g.gamma * k.P * H).trace());
  r.I = norm * phi.integral() * re_trace(GA * H);
  double gauss = integrate_pieces([&](double x) { return phi(x) * std::exp(-x * x / t); }, breaks);
  r.II_strict = norm * gauss * re_trace(GA * (Mat::Identity(n, n) - 2.0 * k.P) * H);
  r.II_limit = -0.5 * re_trace(GA * k.P * H);
  if (k.a != 0.0) {
    std::vector<double> w, dmu;
    for (const auto& b : k.blocks) {
      w.push_back(re_trace(GA * b.Q * k.I_minus_P));
      dmu.push_back(re_trace(b.Q * GA * k.P));
    }
    auto diag3 = [&](double x) {
      double s = 0.0;
      for (size_t i = 0; i < k.blocks.size(); ++i) {
        const auto& b = k.blocks[i];
        s += -k.a * b.mu * std::exp(-t * b.mu * b.mu) * z_integral(k.a, b.mu, t, 2.0 * x) * w[i];
      }
      return s / std::sqrt(pi * t);
    };
    r.III_strict = integrate_pieces([&](double x) { return phi(x) * diag3(x); }, breaks);
    for (size_t i = 0; i < k.blocks.size(); ++i)
      r.III_limit += k.a * dmu[i] * f_a_eval(k.a, std::sqrt(t) * k.blocks[i].mu);
  }
  r.total_strict = r.I + r.II_strict + r.III_strict;
  r.total_limit = r.I + r.II_limit + r.III_limit;
  return r;
}

VariationTerms variation_trace_terms(const ApsDeformation& d, double theta, double t, const Cutoff& phi) {
  require_positive(t, "t");
  phi.check();
  SommerfeldKernel k = make_kernel(d, theta);
  const auto& g = d.geometry;
  const Index n = g.n();
  Mat dT = generator_derivative(d, theta);
  if (dT.rows() != n || dT.cols() != n)
    throw Error(ErrorKind::configuration, kModule, "T'(theta) unavailable or of wrong size");
  const cplx I(0.0, 1.0);
  Mat GT = g.gamma * dT;
  Mat GTA = GT * g.A;
  Mat H = heat_matrix(k, t);
  Mat Id = Mat::Identity(n, n);
  const double norm = 1.0 / std::sqrt(4.0 * pi * t);
  const auto breaks = trace_breaks(phi, t);
  VariationTerms r;

  // phi' integrals; \int phi' = -phi(0) = -1
  std::vector<double> dbreaks{phi.r0, phi.r1};
  double dgauss = integrate_pieces([&](double x) { return phi.derivative(x) * std::exp(-x * x / t); }, dbreaks);
  double gauss = integrate_pieces([&](double x) { return phi(x) * std::exp(-x * x / t); }, breaks);

  r.I = -I * norm * (GT * H).trace();
  r.II = I * norm * dgauss * (GT * (Id - 2.0 * k.P) * H).trace();
  r.It = -2.0 * I * norm * phi.integral() * (GTA * H).trace();
  r.IIt_strict = -2.0 * I * norm * gauss * (GTA * (Id - 2.0 * k.P) * H).trace();
  r.IIt_limit = I * (GTA * k.P * H).trace();
  r.III = 0.0;
  r.IIIt_strict = 0.0;
  r.IIIt_limit = 0.0;
  if (k.a != 0.0) {
    std::vector<cplx> w1, w2, dmu;
    for (const auto& b : k.blocks) {
      w1.push_back((GT * k.I_minus_P * b.Q).trace());
      w2.push_back((GTA * k.I_minus_P * b.Q).trace());
      dmu.push_back((b.Q * GTA * k.P).trace());
    }
    auto scal = [&](size_t i, double x) {
      const auto& b = k.blocks[i];
      return -k.a * b.mu * std::exp(-t * b.mu * b.mu) * z_integral(k.a, b.mu, t, 2.0 * x) / std::sqrt(pi * t);
    };
    auto part = [&](const std::vector<cplx>& w, bool deriv, const std::vector<double>& pts) {
      auto re = [&](double x) {
        double s = 0.0;
        for (size_t i = 0; i < w.size(); ++i) s += scal(i, x) * w[i].real();
        return (deriv ? phi.derivative(x) : phi(x)) * s;
      };
      auto im = [&](double x) {
        double s = 0.0;
        for (size_t i = 0; i < w.size(); ++i) s += scal(i, x) * w[i].imag();
        return (deriv ? phi.derivative(x) : phi(x)) * s;
      };
      return cplx(integrate_pieces(re, pts), integrate_pieces(im, pts));
    };
    r.III = I * part(w1, true, dbreaks);
    r.IIIt_strict = -2.0 * I * part(w2, false, breaks);
    for (size_t i = 0; i < k.blocks.size(); ++i)
      r.IIIt_limit += -2.0 * I * k.a * dmu[i] * f_a_eval(k.a, std::sqrt(t) * k.blocks[i].mu);
  }
  r.total_strict = r.I + r.II + r.III + r.It + r.IIt_strict + r.IIIt_strict;
  r.total_limit = r.I + r.It + r.IIt_limit + r.IIIt_limit;
  return r;
}

}  // namespace etalab
