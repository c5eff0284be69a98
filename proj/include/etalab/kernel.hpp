#pragma once

#include "etalab/geometry.hpp"

#include <string>
#include <vector>

namespace etalab {

// Smooth bump: 1 on [0, r0], exp(1 - 1/(1 - s^2)) with s = (x - r0)/(r1 - r0) on (r0, r1), 0 beyond.
struct Cutoff {
  double r0 = 0.25;
  double r1 = 0.75;

  double operator()(double x) const;
  double derivative(double x) const;
  double integral() const;  // \int_0^\infty phi
  void check() const;
};

// Heat kernel of the half-line model with boundary projection P(theta).
// The z-integral of the third term is done in closed form per eigenvalue mu of |A|:
//   \int_0^\infty e^{-(s+z)^2/4t} e^{-a mu z} dz = sqrt(pi t) e^{-s^2/4t} erfcx((s + 2 a mu t) / (2 sqrt t)).
struct SommerfeldKernel {
  struct Block {
    double mu = 0.0;
    Mat Q;        // spectral projection of |A| onto mu
    double c = 0.0;  // dim ker(|A| - mu)
  };
  ApsDeformation deformation;
  double theta = 0.0;
  double a = 0.0;
  Mat P;
  Mat I_minus_P;
  Mat A2;
  std::vector<Block> blocks;  // mu > 0 only
  Mat Q0;                     // projection onto ker A
};

SommerfeldKernel make_kernel(const ApsDeformation& d, double theta);

// e^{-t A^2}
Mat heat_matrix(const SommerfeldKernel& k, double t);

struct KernelPieces {
  Mat free_part;   // (4 pi t)^{-1/2} e^{-(x-y)^2/4t} e^{-tA^2}
  Mat image_part;  // (4 pi t)^{-1/2} (I - 2P) e^{-(x+y)^2/4t} e^{-tA^2}
  Mat third_part;  // (pi t)^{-1/2} (I - P) \int_0^\infty ... dz
};
KernelPieces kernel_pieces(const SommerfeldKernel& k, double t, double x, double y);
Mat kernel_at(const SommerfeldKernel& k, double t, double x, double y);

// Scalar z-integral for one eigenvalue, s = x + y.
double z_integral(double a, double mu, double t, double s);

struct ApplyResult {
  std::vector<Vec> values;
  bool resolution_warning = false;
  std::string note;
};

// (Q_t u)(x_i) = sum_j w_j K_t(x_i, y_j) u(y_j) on a quadrature grid.
ApplyResult apply_kernel(const SommerfeldKernel& k, double t, const Grid& grid, const std::vector<Vec>& u,
                         int threads = 1);

// (d_t - d_x^2 + A^2) K_t(x, y), Richardson-extrapolated central differences.
Mat heat_equation_residual(const SommerfeldKernel& k, double t, double x, double y);

struct BoundaryDecay {
  std::vector<double> xs;
  std::vector<double> projected;  // ||P K_t(x, y)||
  std::vector<double> adjoint;    // ||gamma (d_x + A~)(I - P) K_t(x, y)||
  double projected_order = 0.0;   // fitted exponent p in ||.|| ~ x^p
  double adjoint_order = 0.0;
};
BoundaryDecay boundary_decay(const SommerfeldKernel& k, double t, double y,
                             const std::vector<double>& xs = {1e-2, 1e-3, 1e-4});

struct HeatTraceTerms {
  double I = 0.0;
  double II = 0.0;
  double III_strict = 0.0;  // \int phi tr K_3(x, x) dx
  double III_limit = 0.0;   // -(a/2) sum c(mu) F_a(sqrt(t) mu)
  double total_strict = 0.0;
  double total_limit = 0.0;
};
HeatTraceTerms heat_trace_terms(const SommerfeldKernel& k, double t, const Cutoff& phi = {});

struct EtaDensityTerms {
  double I = 0.0;  // vanishes identically
  double II_strict = 0.0;
  double II_limit = 0.0;  // -1/2 tr[gamma A P e^{-tA^2}]
  double III_strict = 0.0;
  double III_limit = 0.0;  // a sum d(mu) F_a(sqrt(t) mu)
  double total_strict = 0.0;
  double total_limit = 0.0;
  // preludes: tr[gamma e^{-tA^2}], tr[gamma P e^{-tA^2}]
  double tr_gamma_heat = 0.0;
  double tr_gamma_P_heat = 0.0;
};
EtaDensityTerms eta_density_terms(const SommerfeldKernel& k, double t, const Cutoff& phi = {});

struct VariationTerms {
  cplx I, II, III;
  cplx It, IIt_strict, IIt_limit, IIIt_strict, IIIt_limit;
  cplx total_strict, total_limit;
};
VariationTerms variation_trace_terms(const ApsDeformation& d, double theta, double t, const Cutoff& phi = {});

}  // namespace etalab
