#pragma once

#include "etalab/eta.hpp"

#include <string>
#include <vector>

namespace etalab {

// D = gamma (d/dx + A) on a circle of length L cut at one point. The two sides of the
// cut are folded into the doubled geometry: u~(x) = (u(x), u(L - x)), so the boundary
// vector is b = (u(0), u(L)) and the condition reads P~(theta) b = 0.
struct CutCircleModel {
  BoundaryGeometry base;
  double L = 2.0;
  double theta = 0.0;
  Mat twist;  // on K+ of the doubled geometry; -I gives the distinguished reflection

  // derived
  BoundaryGeometry doubled;
  ApsDeformation family;
  Mat P;        // P~(theta) with sigma(twist)
  Mat E_plus;   // orthonormal basis of ker(gamma~ - i)
  Mat E_minus;  // orthonormal basis of ker(gamma~ + i)
  Mat V_P;      // ker P~ as the graph of a unitary E+ -> E-
  SpectralParts base_parts;
};

// Validates the base geometry and assembles the doubled boundary problem.
// An empty twist means -I.
CutCircleModel make_cut_circle(const BoundaryGeometry& base, double L, double theta, const Mat& twist = Mat());

// exp(length (-A - lambda gamma)), closed form through X^2 = A^2 - lambda^2.
Mat transfer_matrix(const BoundaryGeometry& g, double lambda, double length);
Mat transfer_matrix(const BoundaryGeometry& g, const SpectralParts& parts, double lambda, double length);

// Unitary W(lambda) whose eigenvalue 1 multiplicity is the multiplicity of lambda.
Mat boundary_unitary(const CutCircleModel& m, double lambda);

// prod_j sin(phi_j / 2) over the principal eigenphases of W(lambda); zero exactly at eigenvalues.
// Also changes sign when a phase passes pi.
double boundary_determinant(const CutCircleModel& m, double lambda);

// 2n x 2n folded system: range(P~)^* rows on u~(0) and matching u~_1(L/2) = u~_2(L/2).
Mat folded_system(const CutCircleModel& m, double lambda);

struct SolveOptions {
  double tol = 1e-11;  // bracket width
  int threads = 1;
  int chunks = 64;
};

struct SolveReport {
  SpectrumSlice slice;
  bool completeness_warning = false;
  std::string note;
  long weyl_estimate = 0;
  long found = 0;
};

// All eigenvalues in [lo, hi] with multiplicities.
SolveReport spectrum_in(const CutCircleModel& m, double lo, double hi, const SolveOptions& opt = {});

// Eigenvalues in [-Lambda, Lambda] plus a fitted lattice tail.
SolveReport cut_spectrum(const CutCircleModel& m, double Lambda, const SolveOptions& opt = {});

struct FlowResult {
  std::vector<double> params;
  std::vector<std::vector<double>> curves;  // curves[i][k]: k-th tracked eigenvalue at params[i]
  int flow = 0;
};

// Eigenvalues in [-window, window] along a parameter path, tracked by nearest neighbour.
// Flow counts crossings of 0 from below minus crossings from above.
FlowResult spectral_flow(const std::function<CutCircleModel(double)>& model, const std::vector<double>& params,
                         double window, const SolveOptions& opt = {});

}  // namespace etalab
