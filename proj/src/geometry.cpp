#include "etalab/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace etalab {

namespace {

const char* kModule = "model-core";

void add(ValidationReport& r, const std::string& name, double violation) {
  IdentityCheck c{name, violation, violation <= r.tolerance};
  if (!c.ok) r.passed = false;
  r.checks.push_back(c);
}

void require_square(const Mat& m, Index n, const std::string& name) {
  if (m.rows() != n || m.cols() != n) {
    std::ostringstream os;
    os << name << " must be " << n << "x" << n << ", got " << m.rows() << "x" << m.cols();
    throw Error(ErrorKind::structural, kModule, os.str());
  }
}

void check_structure(const BoundaryGeometry& g) {
  const Index n = g.A.rows();
  if (n <= 0 || n % 2 != 0)
    throw Error(ErrorKind::structural, kModule, "fiber dimension must be an even positive integer");
  require_square(g.A, n, "A");
  require_square(g.gamma, n, "gamma");
  if (g.tau) require_square(*g.tau, n, "tau");
  if (g.sigma) require_square(*g.sigma, n, "sigma");
}

// Gram-Schmidt on the columns of Pi e_j, dropping near-dependent ones.
Mat projected_basis(const Mat& Pi) {
  const Index n = Pi.rows();
  Mat out(n, 0);
  for (Index j = 0; j < n; ++j) {
    Vec v = Pi.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Index k = 0; k < out.cols(); ++k) v -= out.col(k) * out.col(k).dot(v);
    double nv = v.norm();
    if (nv > 1e-8) {
      out.conservativeResize(n, out.cols() + 1);
      out.col(out.cols() - 1) = v / nv;
    }
  }
  return out;
}

}  // namespace

std::string ValidationReport::failures() const {
  std::string s;
  for (const auto& c : checks)
    if (!c.ok) s += (s.empty() ? "" : ", ") + c.identity;
  return s;
}

double ValidationReport::max_violation() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.violation);
  return m;
}

double default_tolerance(const BoundaryGeometry& g) { return 1e-10 * (opnorm(g.A) + 1.0); }

SpectralParts spectral_parts(const Mat& A) {
  const Index n = A.rows();
  Mat H = 0.5 * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  SpectralParts p;
  Eigen::VectorXd ev = es.eigenvalues();
  p.eigenvectors = es.eigenvectors();
  double scale = n ? ev.cwiseAbs().maxCoeff() : 0.0;
  p.merge_tol = 1e-10 * std::max(scale, 1e-300);
  if (scale == 0.0) p.merge_tol = 0.0;

  // chain clusters of nearby eigenvalues
  std::vector<std::pair<Index, Index>> clusters;
  for (Index i = 0; i < n;) {
    Index j = i + 1;
    while (j < n && ev(j) - ev(j - 1) <= p.merge_tol) ++j;
    clusters.push_back({i, j});
    i = j;
  }
  p.eigenvalues = ev;
  for (auto [b, e] : clusters) {
    double mean = ev.segment(b, e - b).mean();
    if (std::abs(mean) <= p.merge_tol) mean = 0.0;
    for (Index k = b; k < e; ++k) p.eigenvalues(k) = mean;
    p.spaces.push_back({mean, p.eigenvectors.middleCols(b, e - b)});
  }

  p.P_gt0 = Mat::Zero(n, n);
  p.P_lt0 = Mat::Zero(n, n);
  p.P_0 = Mat::Zero(n, n);
  p.absA = Mat::Zero(n, n);
  p.kernel = Mat(n, 0);
  for (const auto& s : p.spaces) {
    Mat Q = s.projector();
    if (s.lambda > 0.0) p.P_gt0 += Q;
    else if (s.lambda < 0.0) p.P_lt0 += Q;
    else {
      p.P_0 += Q;
      p.kernel = s.basis;
    }
    p.absA += std::abs(s.lambda) * Q;
  }
  p.sgnA = p.P_gt0 - p.P_lt0;

  // eigenspaces of |A|: pair +mu with -mu
  std::vector<bool> used(p.spaces.size(), false);
  for (size_t i = 0; i < p.spaces.size(); ++i) {
    if (used[i] || p.spaces[i].lambda == 0.0) continue;
    double mu = std::abs(p.spaces[i].lambda);
    Mat basis = p.spaces[i].basis;
    used[i] = true;
    for (size_t j = i + 1; j < p.spaces.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(std::abs(p.spaces[j].lambda) - mu) <= p.merge_tol) {
        Mat b2(n, basis.cols() + p.spaces[j].basis.cols());
        b2 << basis, p.spaces[j].basis;
        basis = b2;
        used[j] = true;
      }
    }
    p.abs_spaces.push_back({mu, basis});
  }
  std::sort(p.abs_spaces.begin(), p.abs_spaces.end(),
            [](const Eigenspace& a, const Eigenspace& b) { return a.lambda < b.lambda; });
  return p;
}

KernelSplit kernel_split(const BoundaryGeometry& g) {
  check_structure(g);
  auto parts = spectral_parts(g.A);
  const Index n = g.n();
  const cplx I(0.0, 1.0);
  Mat Id = Mat::Identity(n, n);
  Mat Pi_plus = parts.P_0 * (Id - I * g.gamma) * 0.5;
  Mat Pi_minus = parts.P_0 * (Id + I * g.gamma) * 0.5;
  KernelSplit k;
  k.K_plus = projected_basis(Pi_plus);
  if (g.tau) k.K_minus = (*g.tau) * k.K_plus;
  else k.K_minus = projected_basis(Pi_minus);
  return k;
}

Mat kernel_reflection(const BoundaryGeometry& g, const Mat& T) {
  auto k = kernel_split(g);
  if (k.K_plus.cols() != k.K_minus.cols())
    throw Error(ErrorKind::structural, kModule, "dim K+ != dim K-, no Lagrangian reflection exists");
  const Index m = k.K_plus.cols();
  require_square(T, m, "kernel twist");
  if (opnorm(T.adjoint() * T - Mat::Identity(m, m)) > 1e-10)
    throw Error(ErrorKind::structural, kModule, "kernel twist must be unitary");
  Mat U = k.K_minus * T * k.K_plus.adjoint();
  return U + U.adjoint();
}

ValidationReport validate_geometry(const BoundaryGeometry& g, double tol) {
  check_structure(g);
  const Index n = g.n();
  ValidationReport r;
  r.tolerance = tol > 0.0 ? tol : default_tolerance(g);
  const Mat Id = Mat::Identity(n, n);
  const Mat& A = g.A;
  const Mat& G = g.gamma;
  add(r, "A = A*", hermitian_defect(A));
  add(r, "gamma^2 = -I", opnorm(G * G + Id));
  add(r, "gamma* = -gamma", opnorm(G.adjoint() + G));
  add(r, "gamma A + A gamma = 0", opnorm(G * A + A * G));

  auto parts = spectral_parts(A);
  const auto& ev = parts.eigenvalues;
  double asym = 0.0;
  for (Index i = 0; i < n; ++i) asym = std::max(asym, std::abs(ev(i) + ev(n - 1 - i)));
  add(r, "spec(A) = -spec(A)", asym);

  const cplx I(0.0, 1.0);
  Mat Pi_plus = parts.P_0 * (Id - I * G) * 0.5;
  Mat Pi_minus = parts.P_0 * (Id + I * G) * 0.5;
  Index dp = column_basis(Pi_plus, 1e-8).cols();
  Index dm = column_basis(Pi_minus, 1e-8).cols();
  add(r, "dim K+ = dim K-", static_cast<double>(std::abs(dp - dm)));

  if (g.tau) {
    const Mat& t = *g.tau;
    add(r, "tau gamma + gamma tau = 0", opnorm(t * G + G * t));
    add(r, "tau A + A tau = 0", opnorm(t * A + A * t));
    add(r, "tau^2 = I", opnorm(t * t - Id));
    add(r, "tau = tau*", hermitian_defect(t));
  }
  if (g.sigma) {
    const Mat& s = *g.sigma;
    const Mat& P0 = parts.P_0;
    add(r, "sigma = sigma*", hermitian_defect(s));
    add(r, "sigma supported on ker A", opnorm(s - P0 * s * P0));
    add(r, "sigma^2 = I on ker A", opnorm(s * s - P0));
    add(r, "sigma gamma + gamma sigma = 0 on ker A", opnorm(P0 * (s * G + G * s) * P0));
  }
  return r;
}

void require_valid(const BoundaryGeometry& g, double tol) {
  auto r = validate_geometry(g, tol);
  if (!r.passed) throw Error(ErrorKind::validation, kModule, "geometry violates: " + r.failures());
}

BoundaryGeometry double_geometry(const BoundaryGeometry& g) {
  check_structure(g);
  const Index n = g.n();
  BoundaryGeometry d;
  d.A = Mat::Zero(2 * n, 2 * n);
  d.A.topLeftCorner(n, n) = g.A;
  d.A.bottomRightCorner(n, n) = -g.A;
  d.gamma = Mat::Zero(2 * n, 2 * n);
  d.gamma.topLeftCorner(n, n) = g.gamma;
  d.gamma.bottomRightCorner(n, n) = -g.gamma;
  Mat t = Mat::Zero(2 * n, 2 * n);
  t.topRightCorner(n, n) = Mat::Identity(n, n);
  t.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  d.tau = t;
  auto parts = spectral_parts(d.A);
  if (parts.kernel.cols() > 0) d.sigma = Mat(-t * parts.P_0);
  return d;
}

Mat gluing_symmetry(Index n) {
  Mat mu = Mat::Zero(2 * n, 2 * n);
  mu.topRightCorner(n, n) = Mat::Identity(n, n);
  mu.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return mu;
}

namespace {

ApsDeformation base_family(const BoundaryGeometry& g) {
  require_valid(g);
  ApsDeformation d;
  d.geometry = g;
  d.parts = spectral_parts(g.A);
  const Index n = g.n();
  if (d.parts.kernel.cols() > 0) {
    if (!g.sigma)
      throw Error(ErrorKind::configuration, kModule, "ker A is nontrivial: a Lagrangian reflection sigma is required");
    d.P_sigma = 0.5 * (d.parts.P_0 + *g.sigma);
  } else {
    d.P_sigma = Mat::Zero(n, n);
  }
  d.P_zero = d.parts.P_gt0 + d.P_sigma;
  return d;
}

}  // namespace

ApsDeformation cutting_family(const BoundaryGeometry& g) {
  if (!g.tau) throw Error(ErrorKind::configuration, kModule, "the cutting family requires tau");
  ApsDeformation d = base_family(g);
  d.kind = FamilyKind::cutting;
  return d;
}

ApsDeformation generic_family(const BoundaryGeometry& g, std::function<Mat(double)> T,
                              std::function<double(double)> a, std::function<Mat(double)> dT) {
  if (!T) throw Error(ErrorKind::configuration, kModule, "a generic family needs a generator T(theta)");
  ApsDeformation d = base_family(g);
  d.kind = FamilyKind::generic;
  d.T = std::move(T);
  d.a = std::move(a);
  d.dT = std::move(dT);
  return d;
}

namespace {

void check_theta(const ApsDeformation& d, double theta) {
  if (d.kind == FamilyKind::cutting && !(std::abs(theta) < 0.5 * pi))
    throw Error(ErrorKind::domain, kModule, "cutting family needs |theta| < pi/2");
  if (!std::isfinite(theta)) throw Error(ErrorKind::domain, kModule, "theta must be finite");
}

Mat sgn_tau(const ApsDeformation& d) { return d.parts.sgnA * (*d.geometry.tau); }

}  // namespace

Mat generator(const ApsDeformation& d, double theta) {
  check_theta(d, theta);
  if (d.kind == FamilyKind::cutting) return cplx(0.0, -theta) * sgn_tau(d);
  return d.T(theta);
}

Mat generator_derivative(const ApsDeformation& d, double theta) {
  check_theta(d, theta);
  if (d.kind == FamilyKind::cutting) return cplx(0.0, -1.0) * sgn_tau(d);
  if (d.dT) return d.dT(theta);
  const double h = 1e-4;
  // fourth order central difference
  return (-d.T(theta + 2 * h) + 8.0 * d.T(theta + h) - 8.0 * d.T(theta - h) + d.T(theta - 2 * h)) / (12.0 * h);
}

Mat unitary(const ApsDeformation& d, double theta) {
  check_theta(d, theta);
  const Index n = d.geometry.n();
  if (d.kind == FamilyKind::cutting) {
    return std::cos(theta) * (d.parts.P_gt0 + d.parts.P_lt0) + std::sin(theta) * sgn_tau(d) + d.parts.P_0;
  }
  Mat T = d.T(theta);
  if (hermitian_defect(T) > 1e-8 * (1.0 + opnorm(T)))
    throw Error(ErrorKind::validation, kModule, "generator T(theta) is not Hermitian");
  (void)n;
  return hermitian_function(T, [](double x) { return std::exp(cplx(0.0, x)); });
}

Mat projection(const ApsDeformation& d, double theta) {
  check_theta(d, theta);
  if (d.kind == FamilyKind::cutting) {
    const double c = std::cos(theta), s = std::sin(theta);
    const Mat& E = d.parts.P_gt0;
    const Mat& F = d.parts.P_lt0;
    return c * c * E + s * s * F - s * c * (*d.geometry.tau) * (E + F) + d.P_sigma;
  }
  Mat U = unitary(d, theta);
  return U * d.P_zero * U.adjoint();
}

double a_of_theta(const ApsDeformation& d, double theta) {
  check_theta(d, theta);
  if (d.kind == FamilyKind::cutting) return std::cos(2.0 * theta);
  if (d.a) return d.a(theta);
  // least squares fit of P A P = a |A| P
  Mat P = projection(d, theta);
  Mat lhs = P * d.geometry.A * P;
  Mat rhs = d.parts.absA * P;
  double den = rhs.squaredNorm();
  if (den == 0.0) return 0.0;
  return (rhs.conjugate().cwiseProduct(lhs)).sum().real() / den;
}

Mat deformed_tangential(const ApsDeformation& d, double theta) {
  const Index n = d.geometry.n();
  return -a_of_theta(d, theta) * d.parts.absA * (Mat::Identity(n, n) - projection(d, theta));
}

ValidationReport validate_deformation(const ApsDeformation& d, double theta, double tol) {
  const auto& g = d.geometry;
  const Index n = g.n();
  ValidationReport r;
  r.tolerance = tol > 0.0 ? tol : 1e-9 * (opnorm(g.A) + 1.0);
  const Mat Id = Mat::Identity(n, n);
  Mat P = projection(d, theta);
  Mat U = unitary(d, theta);
  Mat T = generator(d, theta);
  double a = a_of_theta(d, theta);
  const Mat& A = g.A;
  const Mat& G = g.gamma;
  Mat A2 = A * A;
  add(r, "P^2 = P", opnorm(P * P - P));
  add(r, "P = P*", hermitian_defect(P));
  add(r, "gamma P = (I - P) gamma", opnorm(G * P - (Id - P) * G));
  add(r, "[P, A^2] = 0", opnorm(P * A2 - A2 * P));
  add(r, "P A P = a |A| P", opnorm(P * A * P - a * d.parts.absA * P));
  add(r, "P = U P(0) U*", opnorm(P - U * d.P_zero * U.adjoint()));
  add(r, "rank P = n/2", std::abs(P.trace().real() - 0.5 * n));
  add(r, "[gamma, T] = 0", opnorm(G * T - T * G));
  add(r, "A T + T A = 0", opnorm(A * T + T * A));
  add(r, "T = T*", hermitian_defect(T));
  add(r, "U unitary", opnorm(U.adjoint() * U - Id));
  return r;
}

}  // namespace etalab
