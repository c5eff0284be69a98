#include "etalab/interval.hpp"

#include <algorithm>
#include <mutex>

namespace etalab {

namespace {

const char* kModule = "interval-solver";

// Unitary whose graph over E+ is the Lagrangian spanned by the columns of B.
Mat graph_unitary(const Mat& E_plus, const Mat& E_minus, const Mat& B) {
  Mat a = E_plus.adjoint() * B;
  Mat b = E_minus.adjoint() * B;
  return b * a.partialPivLu().inverse();
}

double wrap(double x) {
  x = std::fmod(x + pi, 2.0 * pi);
  if (x < 0) x += 2.0 * pi;
  return x - pi;
}

struct PhaseState {
  double arg_det = 0.0;    // principal arg det W
  double sum_psi = 0.0;    // sum of phases in [0, 2 pi)
};

PhaseState phase_state(const CutCircleModel& m, double lambda) {
  Mat W = boundary_unitary(m, lambda);
  Eigen::ComplexEigenSolver<Mat> es(W, false);
  PhaseState s;
  cplx det = 1.0;
  for (Index i = 0; i < W.rows(); ++i) {
    cplx e = es.eigenvalues()(i);
    e /= std::abs(e);
    det *= e;
    double psi = std::arg(e);
    if (psi < 0.0) psi += 2.0 * pi;
    if (psi >= 2.0 * pi) psi -= 2.0 * pi;
    s.sum_psi += psi;
  }
  s.arg_det = std::arg(det);
  return s;
}

struct Tracked {
  double lambda;
  double phi;  // lifted arg det
  long N;
};

Tracked track(const CutCircleModel& m, const Tracked& from, double lambda) {
  PhaseState s = phase_state(m, lambda);
  double base = wrap(from.phi);  // principal arg at `from`
  Tracked t;
  t.lambda = lambda;
  t.phi = from.phi + wrap(s.arg_det - base);
  t.N = std::lround((t.phi - s.sum_psi) / (2.0 * pi));
  return t;
}

Tracked start_at(const CutCircleModel& m, double lambda) {
  PhaseState s = phase_state(m, lambda);
  return {lambda, s.arg_det, std::lround((s.arg_det - s.sum_psi) / (2.0 * pi))};
}

void refine(const CutCircleModel& m, const Tracked& l, const Tracked& r, double tol, std::vector<SpectralLevel>& out,
            int depth = 0) {
  const double width = std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(r.lambda));
  if (r.lambda - l.lambda <= width || depth > 200) {
    out.push_back({0.5 * (l.lambda + r.lambda), static_cast<int>(std::labs(r.N - l.N))});
    return;
  }
  Tracked mid = track(m, l, 0.5 * (l.lambda + r.lambda));
  if (mid.N != l.N) refine(m, l, mid, tol, out, depth + 1);
  if (mid.N != r.N) refine(m, mid, r, tol, out, depth + 1);
}

}  // namespace

CutCircleModel make_cut_circle(const BoundaryGeometry& base, double L, double theta, const Mat& twist) {
  if (!(L > 0.0)) throw Error(ErrorKind::domain, kModule, "circumference must be positive");
  require_valid(base);
  CutCircleModel m;
  m.base = base;
  m.L = L;
  m.theta = theta;
  m.base_parts = spectral_parts(base.A);
  m.doubled = double_geometry(base);
  auto split = kernel_split(m.doubled);
  const Index k = split.K_plus.cols();
  if (twist.size() == 0) {
    m.twist = -Mat::Identity(k, k);
  } else {
    if (twist.rows() != k || twist.cols() != k)
      throw Error(ErrorKind::structural, kModule,
                  "twist must act on the " + std::to_string(k) + "-dimensional K+ of the doubled geometry");
    m.twist = twist;
  }
  if (k > 0) m.doubled.sigma = kernel_reflection(m.doubled, m.twist);
  m.family = cutting_family(m.doubled);
  m.P = projection(m.family, theta);

  const Index n2 = m.doubled.n();
  Eigen::SelfAdjointEigenSolver<Mat> es(Mat(cplx(0.0, -1.0) * m.doubled.gamma));
  // eigenvalues of -i gamma~ are -1 (E-) then +1 (E+)
  m.E_minus = es.eigenvectors().leftCols(n2 / 2);
  m.E_plus = es.eigenvectors().rightCols(n2 / 2);
  Mat K = null_basis(m.P, 1e-8);
  if (K.cols() != n2 / 2) throw Error(ErrorKind::numerical, kModule, "ker P~ does not have half dimension");
  m.V_P = graph_unitary(m.E_plus, m.E_minus, K);
  return m;
}

Mat transfer_matrix(const BoundaryGeometry& g, const SpectralParts& parts, double lambda, double length) {
  if (length < 0.0) throw Error(ErrorKind::domain, kModule, "length must be nonnegative");
  const Index n = g.n();
  Mat X = -g.A - lambda * g.gamma;
  Mat out = Mat::Zero(n, n);
  auto add_block = [&](const Mat& Q, double mu) {
    double k2 = mu * mu - lambda * lambda;
    double C, S;
    if (k2 > 0.0) {
      double kap = std::sqrt(k2);
      if (length * kap > 700.0)
        throw Error(ErrorKind::range, kModule, "transfer matrix overflow (length * kappa > 700), rescale the model");
      C = std::cosh(length * kap);
      S = kap * length < 1e-8 ? length : std::sinh(length * kap) / kap;
    } else {
      double om = std::sqrt(-k2);
      C = std::cos(length * om);
      S = om * length < 1e-8 ? length : std::sin(length * om) / om;
    }
    out += Q * (C * Mat::Identity(n, n) + S * X);
  };
  if (parts.kernel.cols() > 0) add_block(parts.P_0, 0.0);
  for (const auto& e : parts.abs_spaces) add_block(e.projector(), e.lambda);
  return out;
}

Mat transfer_matrix(const BoundaryGeometry& g, double lambda, double length) {
  return transfer_matrix(g, spectral_parts(g.A), lambda, length);
}

Mat boundary_unitary(const CutCircleModel& m, double lambda) {
  const Index n = m.base.n();
  Mat M = transfer_matrix(m.base, m.base_parts, lambda, m.L);
  Mat B(2 * n, n);
  B << Mat::Identity(n, n), M;
  Eigen::HouseholderQR<Mat> qr(B);
  Mat Q = qr.householderQ() * Mat::Identity(2 * n, n);
  Mat V_S = graph_unitary(m.E_plus, m.E_minus, Q);
  return m.V_P.adjoint() * V_S;
}

double boundary_determinant(const CutCircleModel& m, double lambda) {
  Mat W = boundary_unitary(m, lambda);
  Eigen::ComplexEigenSolver<Mat> es(W, false);
  double p = 1.0;
  for (Index i = 0; i < W.rows(); ++i) p *= std::sin(0.5 * std::arg(es.eigenvalues()(i)));
  return p;
}

Mat folded_system(const CutCircleModel& m, double lambda) {
  const Index n = m.base.n();
  Mat R = column_basis(m.P, 1e-8);  // range P~
  Mat E = transfer_matrix(m.doubled, lambda, 0.5 * m.L);
  Mat S(2 * n, 2 * n);
  S.topRows(n) = R.adjoint();
  S.bottomRows(n) = E.topRows(n) - E.bottomRows(n);
  return S;
}

SolveReport spectrum_in(const CutCircleModel& m, double lo, double hi, const SolveOptions& opt) {
  if (!(hi > lo)) throw Error(ErrorKind::domain, kModule, "empty window");
  const Index n = m.base.n();
  const double step0 = pi / (4.0 * m.L * n);
  const int chunks = std::max(1, opt.chunks);
  std::vector<std::vector<SpectralLevel>> found(chunks);
  parallel_for(chunks, opt.threads, [&](int c) {
    const double a = lo + (hi - lo) * c / chunks;
    const double b = c + 1 == chunks ? hi : lo + (hi - lo) * (c + 1) / chunks;
    std::vector<SpectralLevel> roots;
    Tracked cur = start_at(m, a);
    double step = step0;
    while (cur.lambda < b) {
      double x = std::min(b, cur.lambda + step);
      Tracked nx = track(m, cur, x);
      if (std::abs(nx.phi - cur.phi) > 0.5 * pi && step > 1e-9) {
        step *= 0.5;
        continue;
      }
      if (nx.N != cur.N) refine(m, cur, nx, opt.tol, roots);
      cur = nx;
      step = std::min(step0, 2.0 * step);
    }
    found[c] = std::move(roots);
  });
  std::vector<SpectralLevel> all;
  for (auto& f : found) all.insert(all.end(), f.begin(), f.end());
  SolveReport r;
  r.slice = make_slice(all, std::max(std::abs(lo), std::abs(hi)), 1e-9);
  for (const auto& l : r.slice.levels) r.found += l.mult;
  r.weyl_estimate = std::lround(m.L / pi * 0.5 * n * (hi - lo));
  if (std::labs(r.found - r.weyl_estimate) > n + 2) {
    r.completeness_warning = true;
    r.note = "eigenvalue count " + std::to_string(r.found) + " deviates from the Weyl estimate " +
             std::to_string(r.weyl_estimate) + ", consider a finer scan";
  }
  return r;
}

SolveReport cut_spectrum(const CutCircleModel& m, double Lambda, const SolveOptions& opt) {
  SolveReport r = spectrum_in(m, -Lambda, Lambda, opt);
  r.slice.Lambda = Lambda;
  r.slice.tail = fit_tail(r.slice, static_cast<int>(m.base.n()), 2.0 * pi / m.L);
  return r;
}

FlowResult spectral_flow(const std::function<CutCircleModel(double)>& model, const std::vector<double>& params,
                         double window, const SolveOptions& opt) {
  FlowResult fr;
  fr.params = params;
  for (double p : params) {
    CutCircleModel m = model(p);
    auto rep = spectrum_in(m, -window, window, opt);
    std::vector<double> v;
    for (const auto& l : rep.slice.levels)
      for (int k = 0; k < l.mult; ++k) v.push_back(l.lambda);
    fr.curves.push_back(v);
  }
  const double ztol = 1e-8;
  for (size_t i = 1; i < fr.curves.size(); ++i) {
    const auto& p = fr.curves[i - 1];
    const auto& q = fr.curves[i];
    // align sorted lists by the index shift that best matches the inner half of the window
    const int maxshift = 8;
    double best = std::numeric_limits<double>::infinity(), second = best;
    int bestk = 0;
    for (int k = -maxshift; k <= maxshift; ++k) {
      double cost = 0.0;
      int used = 0;
      for (size_t j = 0; j < p.size(); ++j) {
        if (std::abs(p[j]) > 0.5 * window) continue;
        long jj = static_cast<long>(j) + k;
        if (jj < 0 || jj >= static_cast<long>(q.size())) {
          cost = std::numeric_limits<double>::infinity();
          break;
        }
        cost += std::abs(q[jj] - p[j]);
        ++used;
      }
      if (used == 0) continue;
      if (cost < best) {
        second = best;
        best = cost;
        bestk = k;
      } else if (cost < second) {
        second = cost;
      }
    }
    if (!(best < second * 0.5) && std::isfinite(second))
      throw Error(ErrorKind::numerical, kModule, "eigenvalue tracks are ambiguous, refine the parameter grid");
    for (size_t j = 0; j < p.size(); ++j) {
      if (std::abs(p[j]) > 0.5 * window) continue;
      double a = p[j], b = q[j + bestk];
      fr.flow += (b > ztol ? 1 : 0) - (a > ztol ? 1 : 0);
    }
  }
  return fr;
}

}  // namespace etalab
