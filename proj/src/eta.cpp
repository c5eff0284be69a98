#include "etalab/eta.hpp"

#include "etalab/special.hpp"

#include <algorithm>

namespace etalab {

namespace {

const char* kModule = "eta-engine";

// |lambda| values of one sign, repeated by multiplicity, ascending.
std::vector<double> branch_values(const SpectrumSlice& slice, int sign, double zero_tol) {
  std::vector<double> v;
  for (const auto& l : slice.levels) {
    if (std::abs(l.lambda) < zero_tol) continue;
    if ((l.lambda > 0.0) != (sign > 0)) continue;
    for (int k = 0; k < l.mult; ++k) v.push_back(std::abs(l.lambda));
  }
  std::sort(v.begin(), v.end());
  return v;
}

double tail_zero_tol(const SpectrumSlice& s, double rel) {
  if (s.tail) return rel * s.tail->h;
  double m = 0.0;
  for (const auto& l : s.levels) m = std::max(m, std::abs(l.lambda));
  return rel * std::max(m, 1.0);
}

// tail of one branch with weight exponent p: sum_j h^{-p} zeta(p, q_j) - p c_j h^{-p-1} zeta(p+2, q_j)
cplx branch_sum(const LatticeBranch& b, double h, cplx p) {
  cplx s = 0.0;
  const double lh = std::log(h);
  for (size_t j = 0; j < b.delta.size(); ++j) {
    const double q = b.start[j] + b.delta[j];
    s += std::exp(-p * lh) * hurwitz_zeta(p, q);
    if (b.c[j] != 0.0 && p != cplx(0.0)) s -= p * b.c[j] * std::exp(-(p + 1.0) * lh) * hurwitz_zeta(p + 2.0, q);
  }
  return s;
}

double eta0_direct(const SpectrumSlice& slice, double zero_tol) {
  double e = 0.0;
  for (const auto& l : slice.levels) {
    if (std::abs(l.lambda) < zero_tol) continue;
    e += (l.lambda > 0.0 ? 1.0 : -1.0) * l.mult;
  }
  if (slice.tail) {
    for (size_t j = 0; j < slice.tail->plus.delta.size(); ++j)
      e += 0.5 - (slice.tail->plus.start[j] + slice.tail->plus.delta[j]);
    for (size_t j = 0; j < slice.tail->minus.delta.size(); ++j)
      e -= 0.5 - (slice.tail->minus.start[j] + slice.tail->minus.delta[j]);
  }
  return e;
}

}  // namespace

int SpectrumSlice::dim_ker(double zero_tol) const {
  int d = 0;
  for (const auto& l : levels)
    if (std::abs(l.lambda) < zero_tol) d += l.mult;
  return d;
}

SpectrumSlice SpectrumSlice::truncated(double Lambda_new) const {
  SpectrumSlice s;
  s.Lambda = Lambda_new;
  s.complete = false;
  for (const auto& l : levels)
    if (std::abs(l.lambda) <= Lambda_new) s.levels.push_back(l);
  return s;
}

SpectrumSlice make_slice(std::vector<SpectralLevel> levels, double Lambda, double tol) {
  std::sort(levels.begin(), levels.end(),
            [](const SpectralLevel& a, const SpectralLevel& b) { return a.lambda < b.lambda; });
  SpectrumSlice s;
  s.Lambda = Lambda;
  for (const auto& l : levels) {
    if (l.mult <= 0) throw Error(ErrorKind::structural, kModule, "multiplicities must be positive");
    if (!s.levels.empty() && l.lambda - s.levels.back().lambda <= tol) {
      auto& b = s.levels.back();
      b.lambda = (b.lambda * b.mult + l.lambda * l.mult) / (b.mult + l.mult);
      b.mult += l.mult;
    } else {
      s.levels.push_back(l);
    }
  }
  return s;
}

LatticeTail fit_tail(const SpectrumSlice& slice, int classes, double h0) {
  if (classes <= 0 || !(h0 > 0.0)) throw Error(ErrorKind::domain, kModule, "tail fit needs classes > 0, h > 0");
  const double ztol = 1e-8 * h0;
  std::vector<double> vp = branch_values(slice, +1, ztol);
  std::vector<double> vm = branch_values(slice, -1, ztol);
  const int n = classes;
  const int need = 3 * (2 * n + 1) + 3 * n;
  if (static_cast<int>(vp.size()) < need || static_cast<int>(vm.size()) < need)
    throw Error(ErrorKind::numerical, kModule, "too few eigenvalues for a tail fit, enlarge the window");

  // joint least squares: shared h, per class offsets b_j and 1/(m+1) coefficients per branch
  struct Row {
    int branch, m, j;
    double v;
  };
  std::vector<Row> rows;
  for (int br = 0; br < 2; ++br) {
    const auto& v = br == 0 ? vp : vm;
    const int N = static_cast<int>(v.size());
    // whole periods only, so every class is represented equally
    int first = (2 * N / 3) / n * n;
    for (int i = first; i < N; ++i) rows.push_back({br, i / n, i % n, v[i]});
  }
  const Index p = 1 + 4 * n;
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(rows.size(), p);
  Eigen::VectorXd y(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    X(r, 0) = row.m;
    X(r, 1 + row.branch * 2 * n + row.j) = 1.0;
    X(r, 1 + row.branch * 2 * n + n + row.j) = 1.0 / (row.m + 1.0);
    y(r) = row.v;
  }
  Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  Eigen::VectorXd res = y - X * beta;

  LatticeTail t;
  t.h = beta(0);
  t.classes = n;
  t.fit_residual = std::sqrt(res.squaredNorm() / rows.size());
  if (!(t.h > 0.0) || std::abs(t.h - h0) > 1e-3 * h0)
    throw Error(ErrorKind::numerical, kModule, "fitted lattice period disagrees with the expected period");
  for (int br = 0; br < 2; ++br) {
    const int N = static_cast<int>(br == 0 ? vp.size() : vm.size());
    LatticeBranch b;
    for (int j = 0; j < n; ++j) {
      double delta = beta(1 + br * 2 * n + j) / t.h;
      double f = std::floor(delta);
      int count = j < N ? (N - j + n - 1) / n : 0;
      b.delta.push_back(delta - f);
      b.start.push_back(count + f);
      b.c.push_back(beta(1 + br * 2 * n + n + j));
    }
    (br == 0 ? t.plus : t.minus) = b;
  }
  return t;
}

cplx eta_weighted(const SpectrumSlice& slice, const std::vector<double>& weights, cplx s, TailWeight mode) {
  if (weights.size() != slice.levels.size())
    throw Error(ErrorKind::structural, kModule, "one weight per spectral level is required");
  if (!slice.tail && !slice.complete && s.real() <= 0.0)
    throw Error(ErrorKind::domain, kModule, "continuation unavailable: no tail model and Re s <= 0");
  const double ztol = tail_zero_tol(slice, 1e-8);
  cplx sum = 0.0;
  for (size_t i = 0; i < slice.levels.size(); ++i) {
    double l = std::abs(slice.levels[i].lambda);
    if (l < ztol) continue;
    sum += weights[i] * std::exp(-(s + 1.0) * std::log(l));
  }
  if (slice.tail) {
    const auto& t = *slice.tail;
    if (mode == TailWeight::sign) sum += branch_sum(t.plus, t.h, s) - branch_sum(t.minus, t.h, s);
    else sum += branch_sum(t.plus, t.h, s + 1.0) + branch_sum(t.minus, t.h, s + 1.0);
  }
  return sum;
}

cplx eta_function(const SpectrumSlice& slice, cplx s) {
  std::vector<double> w;
  for (const auto& l : slice.levels) w.push_back(l.lambda * l.mult);
  return eta_weighted(slice, w, s, TailWeight::sign);
}

EtaResult eta_regularized(const SpectrumSlice& slice, const EtaOptions& opt) {
  if (!slice.complete && !slice.tail)
    throw Error(ErrorKind::domain, kModule, "eta(0) needs a complete spectrum or a fitted tail");
  EtaResult r;
  const double ztol = tail_zero_tol(slice, opt.zero_tol_rel);
  r.dim_ker = slice.dim_ker(ztol);
  if (slice.tail) {
    r.tail_residual = slice.tail->fit_residual;
    if (r.tail_residual > opt.max_tail_residual * slice.tail->h)
      throw Error(ErrorKind::numerical, kModule,
                  "tail fit residual " + std::to_string(r.tail_residual) + " exceeds tolerance, spectrum is not lattice-like");
  }
  r.eta0 = eta0_direct(slice, ztol);
  {
    std::vector<double> ss{0.2, 0.1, 0.05}, fs;
    for (double s : ss) fs.push_back(eta_function(slice, s).real());
    r.richardson = richardson_to_zero(ss, fs);
  }
  if (slice.tail) {
    auto half = slice.truncated(0.5 * slice.Lambda);
    half.tail = fit_tail(half, slice.tail->classes, slice.tail->h);
    double e_half = eta0_direct(half, ztol);
    r.error_estimate = std::abs(r.eta0 - e_half);
  }
  r.xi = 0.5 * (r.eta0 + r.dim_ker);
  r.eta_bar = r.xi - std::floor(r.xi);
  if (r.eta_bar >= 1.0) r.eta_bar = 0.0;
  r.tau = std::polar(1.0, 2.0 * pi * r.xi);
  return r;
}

EtaResult eta_of_matrix(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (H + H.adjoint()), Eigen::EigenvaluesOnly);
  std::vector<SpectralLevel> lv;
  const auto& ev = es.eigenvalues();
  double scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    double l = ev(i);
    if (std::abs(l) <= 1e-12 * std::max(scale, 1.0)) l = 0.0;
    lv.push_back({l, 1});
  }
  auto s = make_slice(lv, scale, 1e-12 * std::max(scale, 1.0));
  s.complete = true;
  return eta_regularized(s);
}

VariationRhs variation_rhs(const ApsDeformation& d, double theta) {
  Mat dT = generator_derivative(d, theta);
  const cplx I(0.0, 1.0);
  Mat B = d.geometry.gamma * (I * dT);
  VariationRhs r;
  r.d_eta_bar = B.trace().real() / (2.0 * pi);
  // res of a finite rank operator: Res_1 eta(A, B; -1) of an entire function
  Mat P0 = d.parts.P_0;
  Mat Bc = B - P0 * B * P0;
  auto eta = eta_from_expansion(heat_series(d.geometry.A, Bc, 8));
  r.d_res = eta.res(-1, 1).real() / sqrt_pi;
  return r;
}

double variation_kernel_twist(const std::function<Mat(double)>& U, double u, double h) {
  Mat U0 = U(u);
  if (U0.size() == 0) return 0.0;  // ker A = 0: nothing to twist
  Mat dU = (U(u + h) - U(u - h)) / (2.0 * h);
  cplx tr = (U0.inverse() * dU).trace();
  return (tr / cplx(0.0, 2.0 * pi)).real();
}

double maslov_index(const Mat& T1, const Mat& T2) {
  if (T1.rows() != T2.rows() || T1.cols() != T2.cols() || T1.rows() != T1.cols())
    throw Error(ErrorKind::structural, kModule, "Maslov index needs square unitaries of equal size");
  Mat M = -T1 * T2;
  Eigen::ComplexEigenSolver<Mat> es(M, false);
  double sum = 0.0;
  for (Index i = 0; i < M.rows(); ++i) {
    cplx e = es.eigenvalues()(i);
    if (std::abs(e + 1.0) < 1e-10)
      throw Error(ErrorKind::domain, kModule, "-T1 T2 has eigenvalue -1, outside the chart of the phase formula");
    sum += std::arg(e);
  }
  return -sum / pi;
}

ResidueReport noncomm_residue_model(const BoundaryGeometry& g, const Mat& B) {
  auto parts = spectral_parts(g);
  if (B.rows() != g.n() || B.cols() != g.n()) throw Error(ErrorKind::structural, kModule, "B has wrong size");
  if (opnorm(parts.P_0 * B * parts.P_0) > 1e-10 * (1.0 + opnorm(B)))
    throw Error(ErrorKind::domain, kModule, "precondition P0 B P0 = 0 violated");
  ResidueReport r;
  auto eta = eta_from_expansion(heat_series(g.A, B, 10));
  r.value = eta.res(-1, 1).real();
  r.idempotent = opnorm(B * B - B) < 1e-10;
  r.note = "finite model: eta(A, B; s) is entire, so the residue vanishes for every admissible B";
  if (r.idempotent) r.note += "; vanishing on idempotents is immediate here";
  return r;
}

GluingResult gluing_check(const SpectrumSlice& cut, const SpectrumSlice& glued, const Mat& T, int ind_A_plus,
                          double tol) {
  auto ec = eta_regularized(cut);
  auto eg = eta_regularized(glued);
  GluingResult r;
  r.lhs = ec.tau;
  cplx det = T.size() ? T.determinant() : cplx(1.0);
  r.rhs = ((ind_A_plus % 2) ? -1.0 : 1.0) * det * eg.tau;
  r.gap = std::abs(r.lhs - r.rhs);
  r.error = pi * (ec.error_estimate + eg.error_estimate);
  if (r.error > tol) r.verdict = "inconclusive";
  else r.verdict = r.gap < tol ? "pass" : "fail";
  r.separating = false;
  return r;
}

IntegralityResult integrality_check(double xi_start, double xi_end, const std::vector<double>& grid,
                                    const std::vector<double>& rate) {
  if (grid.size() != rate.size() || grid.size() < 2)
    throw Error(ErrorKind::structural, kModule, "rate samples must match a grid of at least two points");
  IntegralityResult r;
  const size_t n = grid.size();
  bool uniform = true;
  const double h = (grid.back() - grid.front()) / (n - 1);
  for (size_t i = 1; i < n; ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::domain, kModule, "grid must increase");
    if (std::abs(grid[i] - grid[i - 1] - h) > 1e-9 * std::abs(h)) uniform = false;
  }
  if (uniform && n % 2 == 1) {
    double s = rate.front() + rate.back();
    for (size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * rate[i];
    r.integral = s * h / 3.0;
  } else {
    for (size_t i = 1; i < n; ++i) r.integral += 0.5 * (rate[i] + rate[i - 1]) * (grid[i] - grid[i - 1]);
  }
  r.delta_xi = xi_end - xi_start;
  r.value = r.delta_xi - r.integral;
  r.nearest_int_distance = std::abs(r.value - std::round(r.value));
  return r;
}

}  // namespace etalab
