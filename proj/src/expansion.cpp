#include "etalab/expansion.hpp"

#include "etalab/special.hpp"

#include <algorithm>

namespace etalab {

namespace {

const char* kModule = "mellin-expansion";

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// tr(B A^{2j}) for j = 0..count-1
std::vector<cplx> moment_traces(const Mat& A, const Mat& B, int count) {
  std::vector<cplx> out;
  Mat A2 = A * A;
  Mat M = B;
  for (int j = 0; j < count; ++j) {
    out.push_back(M.trace());
    M = M * A2;
  }
  return out;
}

}  // namespace

void ExpansionSeries::add(int two_alpha, int k, cplx c) {
  if (k < 0) throw Error(ErrorKind::structural, kModule, "log power must be nonnegative");
  for (auto& term : terms)
    if (term.two_alpha == two_alpha && term.k == k) {
      term.coeff += c;
      return;
    }
  terms.push_back({two_alpha, k, c});
  std::sort(terms.begin(), terms.end(), [](const ExpansionTerm& a, const ExpansionTerm& b) {
    return a.two_alpha != b.two_alpha ? a.two_alpha < b.two_alpha : a.k < b.k;
  });
}

cplx ExpansionSeries::coeff(int two_alpha, int k) const {
  for (const auto& term : terms)
    if (term.two_alpha == two_alpha && term.k == k) return term.coeff;
  return 0.0;
}

cplx ExpansionSeries::evaluate(double t) const {
  if (!(t > 0.0)) throw Error(ErrorKind::domain, kModule, "series evaluation needs t > 0");
  cplx s = 0.0;
  const double lt = std::log(t);
  for (const auto& term : terms) s += term.coeff * std::pow(t, term.alpha()) * std::pow(lt, term.k);
  return s;
}

bool ExpansionSeries::has_logs(double tol) const {
  for (const auto& term : terms)
    if (term.k > 0 && std::abs(term.coeff) > tol) return true;
  return false;
}

cplx spectral_zeta(const BoundaryGeometry& g, cplx w) {
  auto parts = spectral_parts(g);
  cplx s = 0.0;
  for (const auto& e : parts.abs_spaces)
    s += static_cast<double>(e.multiplicity()) * std::exp(-w * std::log(e.lambda));
  return s;
}

ExpansionSeries heat_series(const Mat& A, const Mat& B, int J) {
  ExpansionSeries s;
  const int count = std::max(0, (J + 1) / 2);
  auto m = moment_traces(A, B, count);
  for (int j = 0; j < count; ++j) {
    if (2 * j >= J) break;
    s.add(2 * j, 0, ((j % 2) ? -1.0 : 1.0) / factorial(j) * m[j]);
  }
  s.remainder_order = 0.5 * J;
  return s;
}

ExpansionSeries trace_expansion_predict(const ApsDeformation& d, double theta, int l, int J, const Cutoff& phi) {
  if (l != 0 && l != 1) throw Error(ErrorKind::domain, kModule, "l must be 0 or 1");
  if (J < 0) throw Error(ErrorKind::domain, kModule, "order must be nonnegative");
  SommerfeldKernel k = make_kernel(d, theta);
  const auto& g = d.geometry;
  const double a = k.a;
  ExpansionSeries s;
  s.remainder_order = 0.5 * J - 0.5;
  // two_alpha ranges over -1, 0, ..., J - 2
  if (l == 0) {
    const double mass = phi.integral() / std::sqrt(4.0 * pi);
    const Index n = g.n();
    auto m = moment_traces(g.A, Mat::Identity(n, n), J / 2 + 2);
    for (int j = 0; 2 * j - 1 <= J - 2; ++j)
      s.add(2 * j - 1, 0, mass * ((j % 2) ? -1.0 : 1.0) / factorial(j) * m[j]);
    if (a != 0.0) {
      for (int j = 0; j <= J - 2; ++j) {
        double zeta = 0.0;  // zeta_{A^2}(-j/2) = sum c mu^j
        for (const auto& b : k.blocks) zeta += b.c * std::pow(b.mu, j);
        double c = -0.5 * a * zeta * mellin_f_residue(a, j);
        if (c != 0.0) s.add(j, 0, c);
      }
    }
    return s;
  }
  Mat GA = g.gamma * g.A;
  auto m = moment_traces(g.A, GA * k.P, J / 2 + 2);
  for (int j = 0; 2 * j <= J - 2; ++j) s.add(2 * j, 0, -0.5 * ((j % 2) ? -1.0 : 1.0) / factorial(j) * m[j]);
  if (a != 0.0) {
    std::vector<cplx> dmu;
    for (const auto& b : k.blocks) dmu.push_back((b.Q * GA * k.P).trace());
    for (int j = 0; j <= J - 2; ++j) {
      cplx sum = 0.0;
      for (size_t i = 0; i < k.blocks.size(); ++i) sum += dmu[i] * std::pow(k.blocks[i].mu, j);
      cplx c = a * mellin_f_residue(a, j) * sum;
      if (c != 0.0) s.add(j, 0, c);
    }
  }
  return s;
}

std::vector<cplx> reciprocal_gamma_taylor(double s0, int count) {
  // 1/Gamma is entire, so the trapezoidal rule on a circle converges geometrically
  const int N = 64;
  const double r = 0.5;
  std::vector<cplx> out(count, 0.0);
  for (int i = 0; i < N; ++i) {
    double phi = 2.0 * pi * (i + 0.5) / N;
    cplx u = std::polar(r, phi);
    cplx z = 0.5 * (s0 + u + 1.0);
    cplx f = 1.0 / gamma_complex(z);
    for (int m = 0; m < count; ++m) out[m] += f * std::pow(u, -m) / static_cast<double>(N);
  }
  for (auto& v : out)
    if (std::abs(v) < 1e-15) v = 0.0;
  return out;
}

cplx MeromorphicEta::res(int s0, int order) const {
  auto it = principal.find(s0);
  if (it == principal.end() || order < 1 || order > static_cast<int>(it->second.size())) return 0.0;
  return it->second[order - 1];
}

cplx MeromorphicEta::reconstruct(double t) const {
  const double lt = std::log(t);
  cplx sum = 0.0;
  for (const auto& [s0, C] : gamma_principal) {
    const double alpha = -0.5 * (s0 + 1);
    for (size_t k = 0; k < C.size(); ++k)
      sum += C[k] * std::pow(t, alpha) * std::pow(-0.5 * lt, static_cast<double>(k)) / factorial(static_cast<int>(k));
  }
  return 0.5 * sum;
}

MeromorphicEta eta_from_expansion(const ExpansionSeries& series) {
  MeromorphicEta out;
  std::map<int, std::vector<cplx>> byalpha;  // two_alpha -> a_{alpha,k}
  for (const auto& term : series.terms) {
    auto& v = byalpha[term.two_alpha];
    if (static_cast<int>(v.size()) <= term.k) v.resize(term.k + 1, 0.0);
    if (v[term.k] != cplx(0.0)) throw Error(ErrorKind::structural, kModule, "duplicate (alpha, k) term");
    v[term.k] = term.coeff;
  }
  for (const auto& [ta, a] : byalpha) {
    const int s0 = -ta - 1;
    const int K = static_cast<int>(a.size()) - 1;
    std::vector<cplx> C(K + 1);
    for (int k = 0; k <= K; ++k) C[k] = a[k] * ((k % 2) ? -1.0 : 1.0) * factorial(k) * std::pow(2.0, k + 1);
    out.gamma_principal[s0] = C;
    auto g = reciprocal_gamma_taylor(static_cast<double>(s0), K + 2);
    // Res_j = sum_k C_k g_{k+1-j}, j = 1..K+1
    std::vector<cplx> R(K + 1, 0.0);
    for (int j = 1; j <= K + 1; ++j)
      for (int k = j - 1; k <= K; ++k) R[j - 1] += C[k] * g[k + 1 - j];
    while (!R.empty() && std::abs(R.back()) == 0.0) R.pop_back();
    if (!R.empty()) out.principal[s0] = R;
  }
  return out;
}

std::vector<std::pair<int, int>> half_integer_template(int count) {
  std::vector<std::pair<int, int>> t;
  for (int j = 0; j < count; ++j) t.push_back({j - 1, 0});
  return t;
}

FitResult fit_expansion(const std::vector<std::pair<double, double>>& samples,
                        const std::vector<std::pair<int, int>>& templ) {
  const Index m = static_cast<Index>(samples.size());
  const Index p = static_cast<Index>(templ.size());
  if (p == 0) throw Error(ErrorKind::domain, kModule, "empty template");
  if (m < 2 * p)
    throw Error(ErrorKind::conditioning, kModule, "need at least twice as many samples as template terms");
  double tmin = samples[0].first, tmax = samples[0].first;
  for (const auto& s : samples) {
    if (!(s.first > 0.0)) throw Error(ErrorKind::domain, kModule, "sample times must be positive");
    tmin = std::min(tmin, s.first);
    tmax = std::max(tmax, s.first);
  }
  if (std::log10(tmax / tmin) < 1.5 - 1e-12)
    throw Error(ErrorKind::conditioning, kModule, "sample times must span at least 1.5 decades");

  Eigen::MatrixXd X(m, p);
  Eigen::VectorXd y(m);
  for (Index i = 0; i < m; ++i) {
    const double t = samples[i].first, lt = std::log(t);
    for (Index j = 0; j < p; ++j) X(i, j) = std::pow(t, 0.5 * templ[j].first) * std::pow(lt, templ[j].second);
    y(i) = samples[i].second;
  }
  Eigen::VectorXd scale = X.colwise().norm().transpose();
  for (Index j = 0; j < p; ++j) X.col(j) /= scale(j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  FitResult r;
  r.condition = sv(p - 1) > 0.0 ? sv(0) / sv(p - 1) : std::numeric_limits<double>::infinity();
  if (r.condition > 1e12)
    throw Error(ErrorKind::conditioning, kModule,
                "design matrix condition " + std::to_string(r.condition) + " exceeds 1e12, prune the template");
  Eigen::VectorXd beta = svd.solve(y);
  Eigen::VectorXd res = y - X * beta;
  r.residual_rms = std::sqrt(res.squaredNorm() / m);
  const double dof = std::max<double>(1.0, static_cast<double>(m - p));
  const double sigma2 = res.squaredNorm() / dof;
  // covariance (X^T X)^{-1} = V S^{-2} V^T
  Eigen::MatrixXd V = svd.matrixV();
  for (Index j = 0; j < p; ++j) {
    double v = 0.0;
    for (Index q = 0; q < p; ++q) v += V(j, q) * V(j, q) / (sv(q) * sv(q));
    r.std_errors.push_back(std::sqrt(sigma2 * v) / scale(j));
    r.series.add(templ[j].first, templ[j].second, beta(j) / scale(j));
  }
  // empirical remainder order from the residual envelope
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (Index i = 0; i < m; ++i) {
    double ar = std::abs(res(i));
    if (ar <= 0.0) continue;
    double lx = std::log(samples[i].first), ly = std::log(ar);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  r.remainder_order = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
  int top = templ.back().first;
  r.series.remainder_order = 0.5 * (top + 1);
  return r;
}

double residue_at_zero(const ApsDeformation& d, double theta) {
  const int J = 6;
  auto series = trace_expansion_predict(d, theta, 1, J);
  auto eta = eta_from_expansion(series);
  double r = eta.res(0, 1).real();
  // t^{-1/2} contribution routed through res(gamma sgn(A) P) = Res_1 eta(A, gamma sgn(A) P; -1)
  const auto& g = d.geometry;
  Mat P = projection(d, theta);
  Mat B = g.gamma * d.parts.sgnA * P;
  auto eta_b = eta_from_expansion(heat_series(g.A, B, J));
  double resB = eta_b.res(-1, 1).real();
  double a = a_of_theta(d, theta);
  if (resB != 0.0) r += (-0.5 + 2.0 * a / sqrt_pi * mellin_f(a, 1.0).value.real()) * resB;
  return r;
}

ContourCheck contour_check_III(const SommerfeldKernel& k, double t, double c, int poles) {
  ContourCheck out;
  out.c = c;
  out.c_shift = c - poles;
  if (std::abs(out.c_shift - std::round(out.c_shift)) < 1e-3 || c <= 0.0)
    throw Error(ErrorKind::domain, kModule, "contours must avoid the poles and start right of 0");
  const double a = k.a;
  if (a == 0.0) return out;
  for (const auto& b : k.blocks) out.direct += -0.5 * a * b.c * f_a_eval(a, std::sqrt(t) * b.mu);
  const double lt = std::log(t);
  auto line = [&](double cc) {
    auto f = [&](double y) {
      cplx w(cc, y);
      cplx z = 0.0;
      for (const auto& b : k.blocks) z += b.c * std::exp(-w * std::log(b.mu));
      cplx v = std::exp(-0.5 * w * lt) * z * mellin_f(a, w).value;
      return v.real();
    };
    // the integrand is conjugate symmetric in y
    double I = integrate(f, 0.0, 10.0, 1e-14, 1e-11).value + integrate(f, 10.0, 80.0, 1e-14, 1e-11).value;
    return -0.5 * a * 2.0 * I / (2.0 * pi);
  };
  out.line = line(c);
  for (int j = 0; j < -out.c_shift; ++j) {
    double z = 0.0;
    for (const auto& b : k.blocks) z += b.c * std::pow(b.mu, j);
    out.residue_sum += -0.5 * a * std::pow(t, 0.5 * j) * z * mellin_f_residue(a, j);
  }
  out.shifted = line(out.c_shift) + out.residue_sum;
  return out;
}

}  // namespace etalab
