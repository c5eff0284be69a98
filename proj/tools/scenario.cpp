#include "scenario.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace etalab::cli {

namespace {

const char* kModule = "cli";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::string& header) : out_(path) {
    if (!out_) throw Error(ErrorKind::configuration, kModule, "cannot write " + path.string());
    out_ << header << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) out_ << ',';
      first = false;
      out_ << g17(v);
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo * std::pow(hi / lo, count == 1 ? 0.0 : double(i) / (count - 1));
  return v;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * (count == 1 ? 0.0 : double(i) / (count - 1));
  return v;
}

void require_cut_circle(const ScenarioConfig& cfg, const char* command) {
  if (cfg.model.type != "cut-circle")
    throw Error(ErrorKind::configuration, kModule, std::string("/model/type: ") + command + " needs the cut-circle model");
  if (cfg.family.kind != "cutting")
    throw Error(ErrorKind::configuration, kModule,
                std::string("/family/kind: ") + command + " solves the cut circle with the cutting family only");
}

// Residue by the trapezoid rule on a circle around w = -k.
double residue_contour(double a, int k) {
  const int N = 64;
  const double r = 0.3;
  cplx sum = 0.0;
  for (int j = 0; j < N; ++j) {
    cplx e = std::polar(1.0, 2.0 * pi * j / N);
    sum += mellin_f(a, cplx(-k, 0.0) + r * e).value * r * e;
  }
  return (sum / double(N)).real();
}

cplx mellin_direct(double a, cplx w) {
  std::function<cplx(double)> f = [&](double x) { return std::pow(x, w - 1.0) * f_a_eval(a, x); };
  return integrate_c(f, 0.0, 1.0, 1e-15, 1e-13).value + integrate_inf_c(f, 1.0, 1e-15, 1e-13).value;
}

// ---- commands

int cmd_sf(const ScenarioConfig& cfg, json& res, const std::filesystem::path& dir) {
  const auto& s = cfg.sf;
  double fa_max = 0.0, mellin_max = 0.0, res_max = 0.0;
  {
    Csv csv(dir / "sf_fa.csv", "a,x_or_w_re,w_im,value_re,value_im");
    for (double a : s.a)
      for (double x : logspace(s.x_min, s.x_max, s.x_count)) {
        double cf = f_a_eval(a, x, FaMethod::closed_form);
        double q = f_a_eval(a, x, FaMethod::quadrature);
        if (q != 0.0) fa_max = std::max(fa_max, std::abs(cf - q) / std::abs(q));
        csv.row({a, x, 0.0, cf, 0.0});
      }
  }
  {
    Csv csv(dir / "sf_mellin.csv", "a,x_or_w_re,w_im,value_re,value_im");
    for (double a : s.a)
      for (double wr : s.w_re)
        for (double wi : s.w_im) {
          cplx w(wr, wi);
          cplx v = mellin_f(a, w).value;
          if (wr > 0.0) mellin_max = std::max(mellin_max, std::abs(v - mellin_direct(a, w)));
          csv.row({a, wr, wi, v.real(), v.imag()});
        }
  }
  json table = json::array();
  for (double a : s.a)
    for (int k = 0; k < s.residues; ++k) {
      double closed = mellin_f_residue(a, k);
      double contour = residue_contour(a, k);
      double rel = std::abs(closed - contour) / std::max(std::abs(closed), 1e-300);
      if (closed == 0.0) rel = std::abs(contour);
      res_max = std::max(res_max, rel);
      table.push_back({{"a", a}, {"k", k}, {"closed_form", closed}, {"contour", contour}, {"rel_error", rel}});
    }
  res["residues"] = table;
  res["fa_closed_vs_quadrature_max_rel"] = fa_max;
  res["mellin_duality_max_abs"] = mellin_max;
  res["residue_max_rel"] = res_max;
  res["tolerance"] = s.tol;
  bool ok = fa_max < s.tol && mellin_max < s.tol && res_max < s.tol;
  return ok ? exit_pass : exit_fail;
}

int cmd_kernel_check(const ScenarioConfig& cfg, json& res, const std::filesystem::path& dir) {
  const auto& s = cfg.kernel_check;
  ApsDeformation d = make_deformation(cfg);
  const Index n = d.geometry.n();
  json per = json::array();
  double pde = 0, sym = 0, semi = 0, ii = 0, it = 0, bproj = 0, badj = 0;
  double pord = std::numeric_limits<double>::infinity(), aord = pord;
  bool warn = false;
  std::unique_ptr<Csv> csv;
  if (s.csv) csv = std::make_unique<Csv>(dir / "kernel_slices.csv", "theta,x,y,norm,trace_re,trace_im");

  Grid grid = gauss_panels(0.0, s.grid_length, s.grid_panels, s.grid_order);
  std::vector<Vec> u(grid.x.size());
  for (size_t i = 0; i < grid.x.size(); ++i) {
    double y = grid.x[i];
    Vec v(n);
    for (Index j = 0; j < n; ++j) v(j) = cplx(1.0 + 0.1 * j, 0.05 * j) * std::exp(-4.0 * (y - 1.0 - 0.1 * j) * (y - 1.0 - 0.1 * j));
    u[i] = v;
  }

  for (double th : s.theta) {
    SommerfeldKernel k = make_kernel(d, th);
    double p = 0, sy = 0;
    for (const auto& [x, y] : s.points) {
      p = std::max(p, opnorm(heat_equation_residual(k, s.t, x, y)));
      sy = std::max(sy, opnorm(Mat(kernel_at(k, s.t, x, y) - kernel_at(k, s.t, y, x).adjoint())));
    }
    // Q_s Q_t u against Q_{s+t} u
    ApplyResult a1 = apply_kernel(k, s.t, grid, u, cfg.threads);
    ApplyResult a2 = apply_kernel(k, s.semigroup_s, grid, a1.values, cfg.threads);
    ApplyResult a3 = apply_kernel(k, s.t + s.semigroup_s, grid, u, cfg.threads);
    warn = warn || a1.resolution_warning || a2.resolution_warning || a3.resolution_warning;
    double num = 0, den = 0;
    for (size_t i = 0; i < grid.x.size(); ++i) {
      num = std::max(num, (a2.values[i] - a3.values[i]).norm());
      den = std::max(den, a3.values[i].norm());
    }
    double sg = num / std::max(den, 1e-300);
    BoundaryDecay bd = boundary_decay(k, s.t, s.y_boundary, s.x_boundary);
    double vII = 0, vIt = 0;
    for (double t : {1.0, 0.1, 0.01}) {
      vII = std::max(vII, std::abs(heat_trace_terms(k, t).II));
      vIt = std::max(vIt, std::abs(variation_trace_terms(d, th, t).It));
    }
    pde = std::max(pde, p);
    sym = std::max(sym, sy);
    semi = std::max(semi, sg);
    ii = std::max(ii, vII);
    it = std::max(it, vIt);
    bproj = std::max(bproj, bd.projected.back());
    badj = std::max(badj, bd.adjoint.back());
    pord = std::min(pord, bd.projected_order);
    aord = std::min(aord, bd.adjoint_order);
    per.push_back({{"theta", th},
                   {"pde_residual", p},
                   {"symmetry", sy},
                   {"semigroup", sg},
                   {"boundary_x", bd.xs},
                   {"boundary_projected", bd.projected},
                   {"boundary_adjoint", bd.adjoint},
                   {"projected_order", bd.projected_order},
                   {"adjoint_order", bd.adjoint_order},
                   {"II", vII},
                   {"I_tilde", vIt}});
    if (csv)
      for (double x : linspace(0.05, 3.0, 60)) {
        Mat K = kernel_at(k, s.t, x, s.y_boundary);
        cplx tr = K.trace();
        csv->row({th, x, s.y_boundary, opnorm(K), tr.real(), tr.imag()});
      }
  }
  res["identities"] = {{"pde_residual", pde},
                       {"symmetry", sym},
                       {"semigroup", semi},
                       {"boundary_projected_at_min_x", bproj},
                       {"boundary_adjoint_at_min_x", badj},
                       {"boundary_projected_order", pord},
                       {"boundary_adjoint_order", aord},
                       {"II", ii},
                       {"I_tilde", it}};
  res["tolerances"] = {{"pde_residual", s.tol_pde},
                       {"symmetry", s.tol_symmetry},
                       {"semigroup", s.tol_semigroup},
                       {"min_decay_order", s.min_decay_order},
                       {"vanishing", s.tol_vanishing}};
  res["per_theta"] = per;
  res["resolution_warning"] = warn;
  bool ok = pde < s.tol_pde && sym < s.tol_symmetry && semi < s.tol_semigroup && pord >= s.min_decay_order &&
            aord >= s.min_decay_order && ii < s.tol_vanishing && it < s.tol_vanishing;
  return ok ? exit_pass : exit_fail;
}

int cmd_trace(const ScenarioConfig& cfg, json& res, const std::filesystem::path& dir) {
  const auto& s = cfg.trace;
  ApsDeformation d = make_deformation(cfg);
  Cutoff phi{s.r0, s.r1};
  phi.check();
  SommerfeldKernel k = make_kernel(d, s.theta);
  ExpansionSeries pred = trace_expansion_predict(d, s.theta, s.l, s.terms, phi);
  std::vector<std::pair<double, double>> samples;
  for (double t : logspace(s.t_min, s.t_max, s.samples)) {
    double v = s.l == 0 ? heat_trace_terms(k, t, phi).total_limit : eta_density_terms(k, t, phi).total_limit;
    samples.emplace_back(t, v);
  }
  FitResult fit = fit_expansion(samples, half_integer_template(s.terms));

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  {
    Csv csv(dir / "trace.csv", "t,measured,predicted,residual");
    for (const auto& [t, v] : samples) {
      double p = pred.evaluate(t).real();
      csv.row({t, v, p, v - p});
      double r = std::abs(v - p);
      if (r > 0.0) {
        double lx = std::log(t), ly = std::log(r);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
      }
    }
  }
  double slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : std::numeric_limits<double>::infinity();

  json table = json::array();
  double worst = 0.0;
  int shown = 0;
  for (size_t i = 0; i < fit.series.terms.size(); ++i) {
    const auto& term = fit.series.terms[i];
    double p = pred.coeff(term.two_alpha, term.k).real();
    double f = term.coeff.real();
    double err = std::abs(f - p) / std::max(std::abs(p), 1.0);
    if (shown < s.compare) worst = std::max(worst, err);
    ++shown;
    table.push_back({{"alpha", term.alpha()},
                     {"log_power", term.k},
                     {"fitted", f},
                     {"std_error", fit.std_errors[i]},
                     {"predicted", p},
                     {"rel_error", err}});
  }
  res["coefficients"] = table;
  res["max_rel_error_leading"] = worst;
  res["compared"] = s.compare;
  res["condition"] = fit.condition;
  res["fit_residual_rms"] = fit.residual_rms;
  res["remainder_order_predicted"] = pred.remainder_order;
  res["remainder_order_measured"] = slope;
  res["tolerance"] = s.tol;
  bool ok = worst < s.tol && std::abs(slope - pred.remainder_order) < 0.1;
  return ok ? exit_pass : exit_fail;
}

json eta_json(const EtaResult& e) {
  return {{"eta0", e.eta0},
          {"xi", e.xi},
          {"eta_bar", e.eta_bar},
          {"tau", complex_json(e.tau)},
          {"error", e.error_estimate},
          {"richardson", e.richardson},
          {"dim_ker", e.dim_ker},
          {"tail_residual", e.tail_residual}};
}

json solve_json(const SolveReport& r) {
  return {{"found", r.found}, {"weyl_estimate", r.weyl_estimate}, {"completeness_warning", r.completeness_warning}, {"note", r.note}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::configuration, kModule, "cannot write " + path.string());
  out << dump(j) << '\n';
}

int cmd_eta(const ScenarioConfig& cfg, json& res, const std::filesystem::path& dir) {
  SpectrumSlice slice;
  if (cfg.eta.spectrum) {
    slice = load_slice(*cfg.eta.spectrum, "/eta/spectrum");
  } else {
    require_cut_circle(cfg, "eta");
    SolveOptions opt{cfg.solver_tol, cfg.threads};
    SolveReport r = cut_spectrum(make_model(cfg, cfg.eta.theta), cfg.eta.Lambda, opt);
    res["solver"] = solve_json(r);
    slice = r.slice;
    write_json(dir / "spectrum.json", slice_to_json(slice));
  }
  res.update(eta_json(eta_regularized(slice)));
  return exit_pass;
}

int cmd_glue(const ScenarioConfig& cfg, json& res, const std::filesystem::path& dir) {
  require_cut_circle(cfg, "glue");
  SolveOptions opt{cfg.solver_tol, cfg.threads};
  CutCircleModel cut = make_model(cfg, 0.0);
  SpectrumSlice cs, gs;
  if (cfg.glue.cut_spectrum) {
    cs = load_slice(*cfg.glue.cut_spectrum, "/glue/cut_spectrum");
  } else {
    SolveReport r = cut_spectrum(cut, cfg.glue.Lambda, opt);
    res["cut_solver"] = solve_json(r);
    cs = r.slice;
    write_json(dir / "cut_spectrum.json", slice_to_json(cs));
  }
  if (cfg.glue.glued_spectrum) {
    gs = load_slice(*cfg.glue.glued_spectrum, "/glue/glued_spectrum");
  } else {
    // the glued circle: transmission at pi/4 with the distinguished reflection
    const Index k = cut.twist.rows();
    SolveReport r = cut_spectrum(make_model(cfg, pi / 4, -Mat::Identity(k, k)), cfg.glue.Lambda, opt);
    res["glued_solver"] = solve_json(r);
    gs = r.slice;
    write_json(dir / "glued_spectrum.json", slice_to_json(gs));
  }
  KernelSplit ks = kernel_split(cut.doubled);
  int ind = static_cast<int>(ks.K_plus.cols() - ks.K_minus.cols());
  GluingResult g = gluing_check(cs, gs, cut.twist, ind, cfg.glue.tol);
  res["lhs"] = complex_json(g.lhs);
  res["rhs"] = complex_json(g.rhs);
  res["gap"] = g.gap;
  res["error"] = g.error;
  res["verdict"] = g.verdict;
  res["separating"] = g.separating;
  res["ind_A_plus"] = ind;
  res["det_T"] = complex_json(cut.twist.size() ? cut.twist.determinant() : cplx(1.0));
  res["tolerance"] = cfg.glue.tol;
  return g.verdict == "pass" ? exit_pass : exit_fail;
}

int cmd_flow(const ScenarioConfig& cfg, json& res, const std::filesystem::path& dir) {
  require_cut_circle(cfg, "flow");
  const auto& s = cfg.flow;
  SolveOptions opt{cfg.solver_tol, cfg.threads};
  const bool twist = s.parameter == "twist";
  Mat T0 = make_model(cfg, s.theta).twist;
  if (twist && T0.rows() == 0)
    throw Error(ErrorKind::configuration, kModule, "/flow/parameter: a twist sweep needs a nontrivial ker A");
  if (!twist && (s.start <= -pi / 2 || s.end >= pi / 2))
    throw Error(ErrorKind::configuration, kModule, "/flow/start: theta must stay inside (-pi/2, pi/2)");
  auto twist_at = [&](double u) {
    Mat T = T0;
    T.col(0) *= std::exp(cplx(0.0, u));
    return T;
  };
  auto model = [&](double p) { return twist ? make_model(cfg, s.theta, twist_at(p)) : make_model(cfg, p); };
  std::vector<double> params = linspace(s.start, s.end, s.steps + 1);
  FlowResult fr = spectral_flow(model, params, s.window, opt);
  {
    Csv csv(dir / "flow.csv", twist ? "u,index,lambda" : "theta,index,lambda");
    for (size_t i = 0; i < params.size(); ++i)
      for (size_t j = 0; j < fr.curves[i].size(); ++j) csv.row({params[i], double(j), fr.curves[i][j]});
  }
  std::vector<double> rate;
  for (double p : params)
    rate.push_back(twist ? variation_kernel_twist(twist_at, p) : variation_rhs(model(p).family, p).d_eta_bar);
  EtaResult e0 = eta_regularized(cut_spectrum(model(params.front()), s.Lambda, opt).slice);
  EtaResult e1 = eta_regularized(cut_spectrum(model(params.back()), s.Lambda, opt).slice);
  IntegralityResult ir = integrality_check(e0.xi, e1.xi, params, rate);
  res["flow"] = fr.flow;
  res["xi_start"] = e0.xi;
  res["xi_end"] = e1.xi;
  res["rate_integral"] = ir.integral;
  res["integrality"] = ir.value;
  res["nearest_int_distance"] = ir.nearest_int_distance;
  bool ok = ir.nearest_int_distance < 1e-4 && std::lround(ir.value) == fr.flow;
  res["consistent"] = ok;
  return ok ? exit_pass : exit_fail;
}

}  // namespace

json slice_to_json(const SpectrumSlice& s) {
  json ev = json::array();
  for (const auto& l : s.levels) ev.push_back(json::array({l.lambda, l.mult}));
  json j = {{"eigenvalues", ev}, {"Lambda", s.Lambda}, {"complete", s.complete}};
  if (s.tail) {
    auto branch = [](const LatticeBranch& b) { return json{{"delta", b.delta}, {"start", b.start}, {"c", b.c}}; };
    j["tail"] = {{"h", s.tail->h},
                 {"classes", s.tail->classes},
                 {"plus", branch(s.tail->plus)},
                 {"minus", branch(s.tail->minus)},
                 {"fit_residual", s.tail->fit_residual}};
  } else {
    j["tail"] = nullptr;
  }
  return j;
}

SpectrumSlice slice_from_json(const json& j, const std::string& ptr) {
  auto bad = [&](const std::string& where, const std::string& msg) {
    throw Error(ErrorKind::configuration, kModule, ptr + where + ": " + msg);
  };
  try {
    if (!j.is_object()) bad("", "expected a spectrum object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "eigenvalues" && it.key() != "Lambda" && it.key() != "complete" && it.key() != "tail")
        bad("/" + it.key(), "unknown key");
    if (!j.contains("eigenvalues")) bad("/eigenvalues", "missing");
    if (!j.contains("Lambda")) bad("/Lambda", "missing");
    std::vector<SpectralLevel> levels;
    const json& ev = j.at("eigenvalues");
    for (size_t i = 0; i < ev.size(); ++i) {
      const json& e = ev[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number_integer())
        bad("/eigenvalues/" + std::to_string(i), "expected [lambda, multiplicity]");
      levels.push_back({e[0].get<double>(), e[1].get<int>()});
    }
    SpectrumSlice s;
    s.levels = std::move(levels);
    s.Lambda = j.at("Lambda").get<double>();
    s.complete = j.value("complete", false);
    if (j.contains("tail") && !j.at("tail").is_null()) {
      const json& t = j.at("tail");
      LatticeTail tail;
      tail.h = t.at("h").get<double>();
      tail.classes = t.at("classes").get<int>();
      tail.fit_residual = t.value("fit_residual", 0.0);
      auto branch = [&](const char* key) {
        LatticeBranch b;
        b.delta = t.at(key).at("delta").get<std::vector<double>>();
        b.start = t.at(key).at("start").get<std::vector<double>>();
        b.c = t.at(key).at("c").get<std::vector<double>>();
        if (static_cast<int>(b.delta.size()) != tail.classes || b.start.size() != b.delta.size() ||
            b.c.size() != b.delta.size())
          bad(std::string("/tail/") + key, "branch arrays must have one entry per class");
        return b;
      };
      tail.plus = branch("plus");
      tail.minus = branch("minus");
      s.tail = tail;
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::configuration, kModule, ptr + ": malformed spectrum dump (" + e.what() + ")");
  }
}

SpectrumSlice load_slice(const json& spec, const std::string& ptr) {
  if (spec.is_object()) return slice_from_json(spec, ptr);
  std::string path = spec.get<std::string>();
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::configuration, kModule, ptr + ": cannot read " + path);
  try {
    return slice_from_json(json::parse(in), ptr);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::configuration, kModule, ptr + ": malformed JSON in " + path);
  }
}

ApsDeformation make_deformation(const ScenarioConfig& cfg) {
  BoundaryGeometry g = make_geometry(cfg.geometry);
  const double tol = cfg.geometry.tolerance > 0.0 ? cfg.geometry.tolerance : -1.0;
  require_valid(g, tol);
  if (cfg.model.type == "cut-circle") {
    if (cfg.family.kind != "cutting")
      throw Error(ErrorKind::configuration, kModule, "/family/kind: the cut-circle model uses the cutting family");
    return make_model(cfg, 0.0).family;
  }
  if (cfg.family.kind == "cutting") return cutting_family(g);
  Mat G = to_mat(*cfg.family.generator);
  if (G.rows() != g.n()) throw Error(ErrorKind::configuration, kModule, "/family/generator: size does not match geometry");
  std::function<double(double)> a;
  if (!cfg.family.a_table.empty()) {
    auto table = cfg.family.a_table;
    a = [table](double th) {
      if (th <= table.front().first) return table.front().second;
      if (th >= table.back().first) return table.back().second;
      size_t i = 1;
      while (table[i].first < th) ++i;
      double w = (th - table[i - 1].first) / (table[i].first - table[i - 1].first);
      return (1.0 - w) * table[i - 1].second + w * table[i].second;
    };
  }
  return generic_family(g, [G](double th) { return Mat(th * G); }, a, [G](double) { return G; });
}

CutCircleModel make_model(const ScenarioConfig& cfg, double theta, const Mat& twist_override) {
  BoundaryGeometry g = make_geometry(cfg.geometry);
  Mat T = twist_override;
  if (T.size() == 0 && cfg.model.twist) T = to_mat(*cfg.model.twist);
  return make_cut_circle(g, cfg.model.L, theta, T);
}

int run_scenario(const ScenarioConfig& cfg, const std::string& command, std::ostream& log) {
  namespace fs = std::filesystem;
  json config = emit(cfg);
  // execution settings do not belong in the reproducible record
  config.erase("threads");
  config.erase("out");
  json report = {{"command", command}, {"version", version}, {"config", config}};
  json res = json::object();
  int code = exit_error;
  fs::path dir(cfg.out);
  try {
    fs::create_directories(dir);
    if (command == "sf") code = cmd_sf(cfg, res, dir);
    else if (command == "kernel-check") code = cmd_kernel_check(cfg, res, dir);
    else if (command == "trace") code = cmd_trace(cfg, res, dir);
    else if (command == "eta") code = cmd_eta(cfg, res, dir);
    else if (command == "glue") code = cmd_glue(cfg, res, dir);
    else if (command == "flow") code = cmd_flow(cfg, res, dir);
    else throw Error(ErrorKind::configuration, kModule, "unknown command " + command);
    report["status"] = code == exit_pass ? "pass" : "fail";
  } catch (const Error& e) {
    code = exit_error;
    report["status"] = "error";
    report["error"] = {{"kind", to_string(e.kind())}, {"module", e.module()}, {"message", e.what()}};
    log << "etalab " << command << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    code = exit_error;
    report["status"] = "error";
    report["error"] = {{"kind", "internal"}, {"module", "cli"}, {"message", e.what()}};
    log << "etalab " << command << ": " << e.what() << '\n';
  }
  report["result"] = res;
  report["exit_code"] = code;
  try {
    write_json(dir / (command + ".json"), report);
  } catch (const std::exception& e) {
    log << "etalab " << command << ": " << e.what() << '\n';
    return exit_error;
  }
  if (code == exit_pass) log << command << ": pass\n";
  if (code == exit_fail) log << command << ": fail, see " << (dir / (command + ".json")).string() << '\n';
  return code;
}

}  // namespace etalab::cli
