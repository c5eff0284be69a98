#pragma once

#include "etalab/numeric.hpp"

#include <optional>

namespace etalab {

// Complementary error function (stdlib backbone).
double erfc_eval(double z);

// Scaled erfc: exp(y^2) erfc(y).
double erfcx(double y);

enum class FaMethod { closed_form, quadrature };

// F_a(x) = x \int_0^\infty erfc(z) exp(-2axz - x^2) dz for a in (-1, 1], x > 0.
double f_a_eval(double a, double x, FaMethod method = FaMethod::closed_form);

struct MellinFValue {
  double a = 0.0;
  cplx w;
  cplx value;
  std::optional<int> nearest_pole;
};

// Mellin transform of F_a, continued meromorphically in w.
MellinFValue mellin_f(double a, cplx w);

// Residue of the Mellin transform of F_a at w = -k.
double mellin_f_residue(double a, int k);

// Hurwitz zeta by Euler-Maclaurin; s != 1, q > 0.
cplx hurwitz_zeta(cplx s, double q);

// Gamma function for complex argument (Lanczos, g = 7).
cplx gamma_complex(cplx w);
cplx lgamma_complex(cplx w);

// Riemann zeta at even positive integers 2j.
double zeta_even(int j);

}  // namespace etalab
