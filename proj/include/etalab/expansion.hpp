#pragma once

#include "etalab/kernel.hpp"

#include <map>
#include <utility>
#include <vector>

namespace etalab {

// One term a t^alpha log^k t. Exponents are half-integers, stored as 2 alpha.
struct ExpansionTerm {
  int two_alpha = 0;
  int k = 0;
  cplx coeff;

  double alpha() const { return 0.5 * two_alpha; }
};

struct ExpansionSeries {
  std::vector<ExpansionTerm> terms;  // sorted by (two_alpha, k), no duplicates
  double remainder_order = 0.0;

  // Adds to an existing (alpha, k) slot or inserts a new one.
  void add(int two_alpha, int k, cplx c);
  cplx coeff(int two_alpha, int k = 0) const;
  cplx evaluate(double t) const;
  bool has_logs(double tol = 0.0) const;
};

// sum over mu in spec|A| \ {0} of c(mu) mu^{-w}
cplx spectral_zeta(const BoundaryGeometry& g, cplx w);

// tr[B e^{-tA^2}] = sum_j (-1)^j / j! tr[B A^{2j}] t^j, terms with 2 alpha < J.
ExpansionSeries heat_series(const Mat& A, const Mat& B, int J);

// Small-t expansion of the limit trace terms (l = 0: I + II + III, l = 1: eta density terms).
// The J slots 2 alpha = -1, 0, ..., J - 2 are kept.
ExpansionSeries trace_expansion_predict(const ApsDeformation& d, double theta, int l, int J,
                                        const Cutoff& phi = {});

// Principal parts of eta(s) = Gamma((s+1)/2)^{-1} \int_0^\infty t^{(s-1)/2} f(t) dt.
struct MeromorphicEta {
  // pole s -> Laurent coefficients; entry m-1 is the coefficient of (s - s0)^{-m}
  std::map<int, std::vector<cplx>> principal;
  // pole s -> principal part of Gamma((s+1)/2) eta(s), same layout
  std::map<int, std::vector<cplx>> gamma_principal;

  // Coefficient of (s - s0)^{-order}, zero when absent.
  cplx res(int s0, int order = 1) const;
  // Sum of residues of t^{-(s+1)/2} Gamma((s+1)/2) eta(s) / 2, i.e. the small-t trace.
  cplx reconstruct(double t) const;
};

MeromorphicEta eta_from_expansion(const ExpansionSeries& series);

// Taylor coefficients of 1/Gamma((s+1)/2) about s0, by a Cauchy integral.
std::vector<cplx> reciprocal_gamma_taylor(double s0, int count);

struct FitResult {
  ExpansionSeries series;
  std::vector<double> std_errors;
  double residual_rms = 0.0;
  double remainder_order = 0.0;  // slope of log|residual| against log t
  double condition = 0.0;
};

// Least squares fit of samples (t, value) on a template of (2 alpha, k) slots.
FitResult fit_expansion(const std::vector<std::pair<double, double>>& samples,
                        const std::vector<std::pair<int, int>>& templ);

// {-1/2 + j/2 : 0 <= j < count}, no logs.
std::vector<std::pair<int, int>> half_integer_template(int count);

// Res_1 eta(D_theta; 0) assembled from the predicted l = 1 expansion.
double residue_at_zero(const ApsDeformation& d, double theta);

// III(t) as a vertical-line Mellin integral, before and after shifting the contour left.
struct ContourCheck {
  double direct = 0.0;         // -(a/2) sum c F_a(sqrt(t) mu)
  double line = 0.0;           // integral along Re w = c
  double shifted = 0.0;        // integral along Re w = c_shift plus enclosed residues
  double residue_sum = 0.0;    // enclosed residues alone
  double c = 0.0, c_shift = 0.0;
};
ContourCheck contour_check_III(const SommerfeldKernel& k, double t, double c = 1.5, int poles = 4);

}  // namespace etalab
