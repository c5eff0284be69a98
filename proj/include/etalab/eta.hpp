#pragma once

#include "etalab/expansion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace etalab {

struct SpectralLevel {
  double lambda = 0.0;
  int mult = 1;
};

// Eigenvalues of one sign, past the computed window, modelled class by class as
//   lambda = h (m + delta_j) + c_j / (m + 1),  m >= start_j,
// with n classes per period h.
struct LatticeBranch {
  std::vector<double> delta;  // in [0, 1)
  std::vector<double> start;  // first tail index, q_j = start_j + delta_j
  std::vector<double> c;
};

struct LatticeTail {
  double h = 0.0;
  int classes = 0;
  LatticeBranch plus, minus;
  double fit_residual = 0.0;  // rms over the fitted points, in units of lambda
};

struct SpectrumSlice {
  std::vector<SpectralLevel> levels;  // ascending, deduplicated
  double Lambda = 0.0;                // window is [-Lambda, Lambda]
  bool complete = false;              // the full spectrum (finite operator)
  std::optional<LatticeTail> tail;

  int dim_ker(double zero_tol) const;
  SpectrumSlice truncated(double Lambda_new) const;  // levels only, tail dropped
};

// Merges eigenvalues within tol and sorts.
SpectrumSlice make_slice(std::vector<SpectralLevel> levels, double Lambda, double tol = 1e-9);

// Fits both branches; classes = eigenvalues per period, h0 = expected period.
LatticeTail fit_tail(const SpectrumSlice& slice, int classes, double h0);

enum class TailWeight {
  sign,  // tail eigenvalue weighted by lambda: contributes sgn(lambda) |lambda|^{-s}
  unit   // weighted by 1: contributes |lambda|^{-s-1}
};

// sum_levels w |lambda|^{-s-1} + lattice continuation of the tail.
cplx eta_weighted(const SpectrumSlice& slice, const std::vector<double>& weights, cplx s,
                  TailWeight mode = TailWeight::sign);

// eta(s) = sum sgn(lambda) |lambda|^{-s} with the tail continued.
cplx eta_function(const SpectrumSlice& slice, cplx s);

struct EtaResult {
  double eta0 = 0.0;
  double xi = 0.0;
  double eta_bar = 0.0;
  cplx tau;
  double error_estimate = 0.0;
  double richardson = 0.0;  // extrapolation from s in {0.2, 0.1, 0.05}
  int dim_ker = 0;
  double tail_residual = 0.0;
};

struct EtaOptions {
  double zero_tol_rel = 1e-8;      // zero mode if |lambda| < zero_tol_rel * h
  double max_tail_residual = 1e-4; // relative to h
};

// Needs either a complete slice or a fitted tail.
EtaResult eta_regularized(const SpectrumSlice& slice, const EtaOptions& opt = {});

EtaResult eta_of_matrix(const Mat& H);

struct VariationRhs {
  double d_eta_bar = 0.0;  // (1/2 pi) tr(gamma i T')
  double d_res = 0.0;      // (1/sqrt pi) res(gamma i T'), zero for finite rank
};
VariationRhs variation_rhs(const ApsDeformation& d, double theta);

// (1/2 pi i) tr_{K+}[U^{-1} dU/du] by central differences.
double variation_kernel_twist(const std::function<Mat(double)>& U, double u, double h = 1e-5);

// -(1/pi) sum of principal phases of spec(-T1 T2).
double maslov_index(const Mat& T1, const Mat& T2);

// res B = Res_1 eta(A, B; -1) through the expansion pipeline (ord A = 1).
struct ResidueReport {
  double value = 0.0;
  bool idempotent = false;
  std::string note;
};
ResidueReport noncomm_residue_model(const BoundaryGeometry& g, const Mat& B);

struct GluingResult {
  cplx lhs, rhs;
  double gap = 0.0;
  double error = 0.0;  // combined eta error estimate
  std::string verdict;  // pass | fail | inconclusive
  bool separating = false;
  std::optional<double> maslov;
};

// lhs = tau of the cut spectrum, rhs = (-1)^ind det(T) tau of the glued spectrum.
GluingResult gluing_check(const SpectrumSlice& cut, const SpectrumSlice& glued, const Mat& T, int ind_A_plus,
                          double tol = 1e-3);

struct IntegralityResult {
  double value = 0.0;
  double nearest_int_distance = 0.0;
  double delta_xi = 0.0;
  double integral = 0.0;
};

// xi(end) - xi(start) - \int rate, with the rate sampled on an increasing grid (Simpson if odd count).
IntegralityResult integrality_check(double xi_start, double xi_end, const std::vector<double>& grid,
                                    const std::vector<double>& rate);

}  // namespace etalab
