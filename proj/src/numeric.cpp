#include "etalab/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <queue>
#include <thread>

namespace etalab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::structural: return "structural";
    case ErrorKind::validation: return "validation";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::domain: return "domain";
    case ErrorKind::pole: return "pole";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::range: return "range";
    case ErrorKind::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& what)
    : std::runtime_error("[" + module + "] " + to_string(kind) + " error: " + what),
      kind_(kind),
      module_(std::move(module)) {}

PoleError::PoleError(std::string module, const std::string& what, int pole, double residue)
    : Error(ErrorKind::pole, std::move(module), what), pole_(pole), residue_(residue) {}

Mat column_basis(const Mat& m, double tol) {
  if (m.cols() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double scale = s.size() ? std::max(s(0), 1.0) : 1.0;
  Index r = 0;
  while (r < s.size() && s(r) > tol * scale) ++r;
  return svd.matrixU().leftCols(r);
}

Mat null_basis(const Mat& m, double tol) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double scale = s.size() ? std::max(s(0), 1.0) : 1.0;
  Index r = 0;
  while (r < s.size() && s(r) > tol * scale) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

namespace {

// Kronrod 15-point extension of the 7-point Gauss rule.
const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename T, typename F>
Segment<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T fc = f(c);
  T resk = fc * wgk[7];
  T resg = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    T f1 = f(c - dx), f2 = f(c + dx);
    resk += (f1 + f2) * wgk[j];
    if (j % 2 == 1) resg += (f1 + f2) * wg[j / 2];
  }
  Segment<T> s{a, b, resk * h, std::abs(resk - resg) * std::abs(h)};
  return s;
}

template <typename T, typename F>
QuadResult<T> adaptive(const F& f, double a, double b, double abs_tol, double rel_tol, int max_intervals) {
  if (a == b) return {T(0), 0.0, 0};
  std::priority_queue<Segment<T>> heap;
  // a few initial panels help with peaked integrands
  const int init = 4;
  T total = T(0);
  double err = 0.0;
  for (int i = 0; i < init; ++i) {
    double lo = a + (b - a) * i / init, hi = a + (b - a) * (i + 1) / init;
    auto s = gk15<T>(f, lo, hi);
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  int count = init;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
    auto worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    auto l = gk15<T>(f, worst.a, mid);
    auto r = gk15<T>(f, mid, worst.b);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // re-sum to limit drift from incremental updates
  T sum = T(0);
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  return {sum, esum, count};
}

}  // namespace

QuadResult<double> integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                             double rel_tol, int max_intervals) {
  return adaptive<double>(f, a, b, abs_tol, rel_tol, max_intervals);
}

QuadResult<cplx> integrate_c(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                             double rel_tol, int max_intervals) {
  return adaptive<cplx>(f, a, b, abs_tol, rel_tol, max_intervals);
}

QuadResult<double> integrate_inf(const std::function<double(double)>& f, double a, double abs_tol,
                                 double rel_tol, int max_intervals) {
  auto g = [&](double u) {
    double v = 1.0 - u;
    return f(a + u / v) / (v * v);
  };
  return adaptive<double>(g, 0.0, 1.0, abs_tol, rel_tol, max_intervals);
}

QuadResult<cplx> integrate_inf_c(const std::function<cplx(double)>& f, double a, double abs_tol,
                                 double rel_tol, int max_intervals) {
  auto g = [&](double u) {
    double v = 1.0 - u;
    return f(a + u / v) / (v * v);
  };
  return adaptive<cplx>(g, 0.0, 1.0, abs_tol, rel_tol, max_intervals);
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
}

Grid gauss_panels(double a, double b, int panels, int order) {
  std::vector<double> xn, wn;
  gauss_legendre(order, xn, wn);
  Grid g;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double c = a + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      g.x.push_back(c + 0.5 * h * xn[i]);
      g.w.push_back(0.5 * h * wn[i]);
    }
  }
  for (size_t i = 1; i < g.x.size(); ++i) g.max_spacing = std::max(g.max_spacing, g.x[i] - g.x[i - 1]);
  return g;
}

double richardson_to_zero(const std::vector<double>& s, const std::vector<double>& f) {
  double v = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    double l = 1.0;
    for (size_t j = 0; j < s.size(); ++j)
      if (j != i) l *= (0.0 - s[j]) / (s[i] - s[j]);
    v += l * f[i];
  }
  return v;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex m;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!failure) failure = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace etalab
