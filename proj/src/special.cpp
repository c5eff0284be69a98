#include "etalab/special.hpp"

#include <algorithm>
#include <array>

namespace etalab {

namespace {

const char* kModule = "special-fn";

bool is_real_int(cplx w, int& k, double tol) {
  double r = std::round(w.real());
  if (r > 0.5) return false;
  k = static_cast<int>(-r);
  return std::abs(w - cplx(r, 0.0)) <= tol;
}

// exp(z) - 1 without cancellation for small |z|.
cplx cexpm1(cplx z) {
  double x = z.real(), y = z.imag();
  double em1 = std::expm1(x);
  double s = std::sin(0.5 * y);
  double cm1 = -2.0 * s * s;
  return {em1 * std::cos(y) + cm1, std::exp(x) * std::sin(y)};
}

// log cosh v for real v, stable for large |v|.
double log_cosh(double v) {
  v = std::abs(v);
  return v + std::log1p(std::exp(-2.0 * v)) - std::log(2.0);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double erfc_eval(double z) { return std::erfc(z); }

double erfcx(double y) {
  if (y < 0.0) {
    if (y < -26.6) return std::numeric_limits<double>::infinity();
    return 2.0 * std::exp(y * y) - erfcx(-y);
  }
  if (y < 4.0) return std::exp(y * y) * std::erfc(y);
  // continued fraction, evaluated bottom-up
  const int depth = 20 + static_cast<int>(400.0 / (y * y));
  double f = y;
  for (int k = depth; k >= 1; --k) f = y + (0.5 * k) / f;
  return 1.0 / (sqrt_pi * f);
}

double f_a_eval(double a, double x, FaMethod method) {
  if (!(x > 0.0)) throw Error(ErrorKind::domain, kModule, "F_a requires x > 0");
  if (!(a > -1.0 && a <= 1.0)) throw Error(ErrorKind::domain, kModule, "F_a requires a in (-1, 1]");
  if (method == FaMethod::quadrature) {
    auto g = [&](double z) {
      double s = z + a * x;
      return erfcx(z) * std::exp(-s * s - (1.0 - a * a) * x * x);
    };
    double peak = std::max(0.0, -a * x);
    double top = peak + 30.0;
    double v = 0.0;
    if (peak > 0.0) v += integrate(g, 0.0, peak, 0.0, 1e-15).value;
    v += integrate(g, peak, top, 0.0, 1e-15).value;
    return x * v;
  }
  const double y = a * x;
  if (std::abs(y) < 0.5) {
    // (1 - erfcx(y)) / (2a) = x sum_{k>=1} (-1)^{k+1} y^{k-1} / (2 Gamma(k/2 + 1))
    double sum = 0.0, p = 1.0;
    for (int k = 1; k < 60; ++k) {
      double term = p / (2.0 * std::tgamma(0.5 * k + 1.0));
      sum += (k % 2 == 1) ? term : -term;
      p *= y;
      if (std::abs(p) < 1e-18 * std::abs(sum)) break;
    }
    return std::exp(-x * x) * x * sum;
  }
  if (y > 0.0) return std::exp(-x * x) * (1.0 - erfcx(y)) / (2.0 * a);
  return (std::exp(-x * x) - std::exp(-(1.0 - a * a) * x * x) * std::erfc(y)) / (2.0 * a);
}

double zeta_even(int j) {
  switch (j) {
    case 1: return pi * pi / 6.0;
    case 2: return std::pow(pi, 4) / 90.0;
    case 3: return std::pow(pi, 6) / 945.0;
    case 4: return std::pow(pi, 8) / 9450.0;
    default: break;
  }
  const int K = 100;
  const double s = 2.0 * j;
  double sum = 0.0;
  for (int k = K - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  // Euler-Maclaurin tail from K
  sum += std::pow(static_cast<double>(K), 1.0 - s) / (s - 1.0) + 0.5 * std::pow(static_cast<double>(K), -s) +
         s / 12.0 * std::pow(static_cast<double>(K), -s - 1.0);
  return sum;
}

cplx hurwitz_zeta(cplx s, double q) {
  if (!(q > 0.0)) throw Error(ErrorKind::domain, kModule, "hurwitz_zeta requires q > 0");
  if (s == cplx(1.0, 0.0)) throw PoleError(kModule, "hurwitz_zeta pole at s = 1", 1, 1.0);
  const double need = 2.0 * std::abs(s) + 30.0;
  const int N = q >= need ? 0 : static_cast<int>(std::ceil(need - q));
  cplx sum = 0.0;
  for (int k = N - 1; k >= 0; --k) sum += std::exp(-s * std::log(k + q));
  const double a = N + q;
  const double la = std::log(a);
  const cplx apow = std::exp(-s * la);  // a^{-s}
  sum += apow * a / (s - 1.0) + 0.5 * apow;
  cplx rising = s;                      // s (s+1) ... (s+2j-2)
  cplx power = apow / a;                // a^{-s-2j+1}
  double scale = 1.0 / (4.0 * pi * pi);  // (2 pi)^{-2j}
  for (int j = 1; j <= 40; ++j) {
    double b = 2.0 * zeta_even(j) * std::pow(scale, j);  // |B_{2j}| / (2j)!
    if (j % 2 == 0) b = -b;
    cplx term = b * rising * power;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    power /= a * a;
  }
  return sum;
}

namespace {

const std::array<double, 9> lanczos = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                       771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                       -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lgamma_right(cplx z) {
  // valid for Re z >= 0.5
  z -= 1.0;
  cplx x = lanczos[0];
  for (int i = 1; i < 9; ++i) x += lanczos[i] / (z + static_cast<double>(i));
  cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx lgamma_complex(cplx w) {
  int k;
  if (is_real_int(w, k, 0.0))
    throw PoleError(kModule, "gamma pole at -" + std::to_string(k), -k, (k % 2 ? -1.0 : 1.0) / factorial(k));
  if (w.real() >= 0.5) return lgamma_right(w);
  return std::log(pi) - std::log(std::sin(pi * w)) - lgamma_right(1.0 - w);
}

cplx gamma_complex(cplx w) {
  int k;
  if (is_real_int(w, k, 0.0))
    throw PoleError(kModule, "gamma pole at -" + std::to_string(k), -k, (k % 2 ? -1.0 : 1.0) / factorial(k));
  if (w.real() >= 0.5) return std::exp(lgamma_right(w));
  return pi / (std::sin(pi * w) * std::exp(lgamma_right(1.0 - w)));
}

MellinFValue mellin_f(double a, cplx w) {
  if (!(a > -1.0 && a <= 1.0)) throw Error(ErrorKind::domain, kModule, "mellin_f requires a in (-1, 1]");
  MellinFValue out;
  out.a = a;
  out.w = w;
  int k;
  {
    double r = std::round(w.real());
    if (r <= 0.0) out.nearest_pole = static_cast<int>(-r);
  }
  if (is_real_int(w, k, 1e-8)) {
    bool genuine = (a != 0.0) || (k % 2 == 1);
    if (genuine)
      throw PoleError(kModule, "mellin_f evaluated within 1e-8 of pole -" + std::to_string(k), -k,
                      mellin_f_residue(a, k));
  }
  if (a == 0.0) {
    out.value = gamma_complex(0.5 * (w + 1.0)) / (2.0 * sqrt_pi);
    return out;
  }
  if (a == 1.0) {
    out.value = 0.25 * (gamma_complex(0.5 * w) - 2.0 / (w * sqrt_pi) * gamma_complex(0.5 * (w + 1.0)));
    return out;
  }
  // t = tanh v turns the incomplete integral into \int_0^V cosh(v)^{-w} dv, V = atanh a,
  // and (1 - a^2)^{-w/2} = cosh(V)^w.
  const double V = std::atanh(a);
  const double lcV = log_cosh(V);
  auto integrand = [&](double v) { return std::exp(w * (lcV - log_cosh(v))); };
  cplx incomplete = integrate_c(integrand, 0.0, V, 0.0, 1e-15, 8000).value;
  cplx first = -cexpm1(w * lcV) * gamma_complex(0.5 * w);
  cplx second = 2.0 / sqrt_pi * incomplete * gamma_complex(0.5 * (w + 1.0));
  out.value = (first + second) / (4.0 * a);
  return out;
}

double mellin_f_residue(double a, int k) {
  if (!(a > -1.0 && a <= 1.0)) throw Error(ErrorKind::domain, kModule, "residue requires a in (-1, 1]");
  if (k < 0) throw Error(ErrorKind::domain, kModule, "residue index must be nonnegative");
  const int l = k / 2;
  const double sign = (l % 2) ? -1.0 : 1.0;
  if (k % 2 == 0) {
    if (l == 0 || a == 0.0) return 0.0;
    // (1 - (1 - a^2)^l) / (2a)
    double m = (a == 1.0) ? 1.0 : -std::expm1(l * std::log1p(-a * a));
    return sign / factorial(l) * m / (2.0 * a);
  }
  if (a == 0.0) return sign / (sqrt_pi * factorial(l));
  if (a == 1.0) return sign / (factorial(l) * sqrt_pi * (2 * l + 1));
  // (1 - a^2)^{l+1/2} \int_0^a (1 - t^2)^{-l-3/2} dt = \int_0^V (cosh v / cosh V)^{2l+1} dv
  const double V = std::atanh(a);
  const double lcV = log_cosh(V);
  auto g = [&](double v) { return std::exp((2 * l + 1) * (log_cosh(v) - lcV)); };
  double r = integrate(g, 0.0, V, 0.0, 1e-15).value;
  return sign / (factorial(l) * sqrt_pi * a) * r;
}

}  // namespace etalab
