#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace etalab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double sqrt_pi = 1.772453850905516027298167483341145183;

enum class ErrorKind {
  structural,
  validation,
  numerical,
  configuration,
  domain,
  pole,
  conditioning,
  range,
  inconclusive
};

const char* to_string(ErrorKind kind);

// Every library failure carries its kind and the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what);
  ErrorKind kind() const { return kind_; }
  const std::string& module() const { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

// Raised when an argument sits on (or too close to) a pole.
class PoleError : public Error {
 public:
  PoleError(std::string module, const std::string& what, int pole, double residue);
  int pole() const { return pole_; }
  double residue() const { return residue_; }

 private:
  int pole_;
  double residue_;
};

// Operator (spectral) norm.
template <typename Derived>
double opnorm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(m);
  return svd.singularValues()(0);
}

template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  return opnorm(m - m.adjoint());
}

// f(H) for Hermitian H through its eigendecomposition.
template <typename Derived, typename F>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> hermitian_function(
    const Eigen::MatrixBase<Derived>& h, F f) {
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<M> es(M(h), Eigen::ComputeEigenvectors);
  M d = M::Zero(h.rows(), h.cols());
  for (Index i = 0; i < h.rows(); ++i) d(i, i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * d * es.eigenvectors().adjoint();
}

// Orthonormal basis of the column span (rank decided relative to tol).
Mat column_basis(const Mat& m, double tol = 1e-10);

// Orthonormal basis of ker m.
Mat null_basis(const Mat& m, double tol = 1e-10);

template <typename T>
struct QuadResult {
  T value;
  double error;
  int intervals;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b].
QuadResult<double> integrate(const std::function<double(double)>& f, double a, double b,
                             double abs_tol = 1e-14, double rel_tol = 1e-13, int max_intervals = 4000);
QuadResult<cplx> integrate_c(const std::function<cplx(double)>& f, double a, double b,
                             double abs_tol = 1e-14, double rel_tol = 1e-13, int max_intervals = 4000);

// Integral over [a, inf) by the map x = a + u/(1-u).
QuadResult<double> integrate_inf(const std::function<double(double)>& f, double a,
                                 double abs_tol = 1e-14, double rel_tol = 1e-13, int max_intervals = 4000);
QuadResult<cplx> integrate_inf_c(const std::function<cplx(double)>& f, double a,
                                 double abs_tol = 1e-14, double rel_tol = 1e-13, int max_intervals = 4000);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

// Composite Gauss-Legendre grid on [a, b].
struct Grid {
  std::vector<double> x;
  std::vector<double> w;
  double max_spacing = 0.0;
  Index size() const { return static_cast<Index>(x.size()); }
};
Grid gauss_panels(double a, double b, int panels, int order = 10);

// Value at 0 of the interpolating polynomial through (s_i, f_i).
double richardson_to_zero(const std::vector<double>& s, const std::vector<double>& f);

// Runs body(i) for i in [0, count) on up to `threads` workers.
// Work items are independent, so results do not depend on scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace etalab
