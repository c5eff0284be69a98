#pragma once

#include "etalab/numeric.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace etalab {

// Boundary data of D = gamma (d/dx + A) on the fiber C^n.
struct BoundaryGeometry {
  Mat A;
  Mat gamma;
  std::optional<Mat> tau;
  std::optional<Mat> sigma;  // reflection acting on ker A, zero on its complement

  Index n() const { return A.rows(); }
};

struct IdentityCheck {
  std::string identity;
  double violation = 0.0;
  bool ok = true;
};

struct ValidationReport {
  std::vector<IdentityCheck> checks;
  double tolerance = 0.0;
  bool passed = true;

  // Names of failing identities, comma separated.
  std::string failures() const;
  double max_violation() const;
};

// 1e-10 (||A|| + 1).
double default_tolerance(const BoundaryGeometry& g);

// Structural problems throw; identity violations are reported.
ValidationReport validate_geometry(const BoundaryGeometry& g, double tol = -1.0);

// Throws a validation error naming the failing identities.
void require_valid(const BoundaryGeometry& g, double tol = -1.0);

struct Eigenspace {
  double lambda = 0.0;
  Mat basis;  // orthonormal columns

  Index multiplicity() const { return basis.cols(); }
  Mat projector() const { return basis * basis.adjoint(); }
};

struct SpectralParts {
  Mat P_gt0, P_lt0, P_0, absA, sgnA;
  Eigen::VectorXd eigenvalues;  // ascending, merged clusters share one value
  Mat eigenvectors;
  std::vector<Eigenspace> spaces;      // eigenspaces of A, ascending
  std::vector<Eigenspace> abs_spaces;  // eigenspaces of |A| with lambda > 0, ascending
  Mat kernel;                          // orthonormal basis of ker A
  double merge_tol = 0.0;
};

// Eigenvalues closer than 1e-10 ||A|| are merged into one eigenspace.
SpectralParts spectral_parts(const Mat& A);
inline SpectralParts spectral_parts(const BoundaryGeometry& g) { return spectral_parts(g.A); }

// K^+ = ker A cap ker(gamma - i), K^- = ker A cap ker(gamma + i).
// K^+ is built by Gram-Schmidt on projected standard basis vectors; when tau
// is present K^- := tau K^+, otherwise the same recipe is used.
struct KernelSplit {
  Mat K_plus;
  Mat K_minus;
};
KernelSplit kernel_split(const BoundaryGeometry& g);

// sigma = [[0, U^*], [U, 0]] on K^+ + K^- with U = K_minus T K_plus^*.
Mat kernel_reflection(const BoundaryGeometry& g, const Mat& T);

// A~ = diag(A, -A), gamma~ = diag(gamma, -gamma), tau = swap (x) I.
// When ker A != 0 the distinguished reflection sigma = -tau|ker A~ is attached.
BoundaryGeometry double_geometry(const BoundaryGeometry& g);

// mu = [[0, I], [-I, 0]] on the doubled fiber of a size-n geometry.
Mat gluing_symmetry(Index n);

enum class FamilyKind { cutting, generic };

struct ApsDeformation {
  BoundaryGeometry geometry;
  FamilyKind kind = FamilyKind::cutting;
  SpectralParts parts;
  Mat P_sigma;  // (P_0 + sigma) / 2
  Mat P_zero;   // P(0) = P_{>0}(A) + P_sigma
  std::function<Mat(double)> T;       // generic families only
  std::function<double(double)> a;    // optional for generic families
  std::function<Mat(double)> dT;      // optional for generic families
};

// a(theta) = cos 2 theta, U(theta) = exp(sgn A tau theta). Requires tau.
ApsDeformation cutting_family(const BoundaryGeometry& g);

// P(theta) = U P(0) U^* with U = exp(i T(theta)). The axioms are checked by
// validate_deformation at each requested theta, never assumed.
ApsDeformation generic_family(const BoundaryGeometry& g, std::function<Mat(double)> T,
                              std::function<double(double)> a = {}, std::function<Mat(double)> dT = {});

double a_of_theta(const ApsDeformation& d, double theta);
inline double a_minus(const ApsDeformation& d, double theta) { return -std::min(0.0, a_of_theta(d, theta)); }
Mat generator(const ApsDeformation& d, double theta);
Mat generator_derivative(const ApsDeformation& d, double theta);
Mat projection(const ApsDeformation& d, double theta);
Mat unitary(const ApsDeformation& d, double theta);
// A~(theta) = -a(theta) |A| (I - P(theta)).
Mat deformed_tangential(const ApsDeformation& d, double theta);

ValidationReport validate_deformation(const ApsDeformation& d, double theta, double tol = -1.0);

}  // namespace etalab
