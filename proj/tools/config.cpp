#include "config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace etalab::cli {

namespace {

const char* kModule = "cli";

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) {
  throw Error(ErrorKind::configuration, kModule, (ptr.empty() ? std::string("/") : ptr) + ": " + msg);
}

cplx read_complex(const json& j, const std::string& ptr) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(ptr, "expected a number or a [re, im] pair");
}

CMatrix read_matrix(const json& j, const std::string& ptr) {
  if (!j.is_array()) fail(ptr, "expected an array of rows");
  CMatrix m;
  for (size_t r = 0; r < j.size(); ++r) {
    const std::string rp = ptr + "/" + std::to_string(r);
    if (!j[r].is_array()) fail(rp, "expected a row array");
    std::vector<cplx> row;
    for (size_t c = 0; c < j[r].size(); ++c) row.push_back(read_complex(j[r][c], rp + "/" + std::to_string(c)));
    if (!m.empty() && row.size() != m[0].size()) fail(rp, "ragged matrix");
    m.push_back(std::move(row));
  }
  if (!m.empty() && m.size() != m[0].size()) fail(ptr, "matrix must be square");
  return m;
}

json write_matrix(const CMatrix& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& v : row) r.push_back(json::array({v.real(), v.imag()}));
    out.push_back(r);
  }
  return out;
}

// Object reader that rejects keys outside the declared set.
class Obj {
 public:
  Obj(const json& j, std::string ptr, std::initializer_list<const char*> keys) : j_(j), ptr_(std::move(ptr)) {
    if (!j_.is_object()) fail(ptr_, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!allowed.count(it.key())) fail(ptr_ + "/" + it.key(), "unknown key");
  }

  bool has(const char* key) const { return j_.contains(key); }
  std::string at(const char* key) const { return ptr_ + "/" + key; }
  const json& get(const char* key) const { return j_.at(key); }

  double num(const char* key, double def) const {
    if (!has(key)) return def;
    if (!get(key).is_number()) fail(at(key), "expected a number");
    return get(key).get<double>();
  }
  double positive(const char* key, double def) const {
    double v = num(key, def);
    if (!(v > 0.0)) fail(at(key), "must be positive");
    return v;
  }
  int integer(const char* key, int def, int lo) const {
    if (!has(key)) return def;
    const json& v = get(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    int x = v.get<int>();
    if (x < lo) fail(at(key), "must be at least " + std::to_string(lo));
    return x;
  }
  bool boolean(const char* key, bool def) const {
    if (!has(key)) return def;
    if (!get(key).is_boolean()) fail(at(key), "expected true or false");
    return get(key).get<bool>();
  }
  std::string choice(const char* key, const std::string& def, std::initializer_list<const char*> options) const {
    if (!has(key)) return def;
    if (!get(key).is_string()) fail(at(key), "expected a string");
    std::string v = get(key).get<std::string>();
    for (const char* o : options)
      if (v == o) return v;
    std::string list;
    for (const char* o : options) list += std::string(list.empty() ? "" : ", ") + o;
    fail(at(key), "expected one of " + list);
  }
  std::string text(const char* key, const std::string& def) const {
    if (!has(key)) return def;
    if (!get(key).is_string()) fail(at(key), "expected a string");
    return get(key).get<std::string>();
  }
  std::vector<double> nums(const char* key, const std::vector<double>& def) const {
    if (!has(key)) return def;
    const json& v = get(key);
    if (!v.is_array() || v.empty()) fail(at(key), "expected a nonempty array of numbers");
    std::vector<double> out;
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  std::vector<std::pair<double, double>> pairs(const char* key, const std::vector<std::pair<double, double>>& def,
                                               bool allow_empty = false) const {
    if (!has(key)) return def;
    const json& v = get(key);
    if (!v.is_array() || (v.empty() && !allow_empty)) fail(at(key), "expected an array of [x, y] pairs");
    std::vector<std::pair<double, double>> out;
    for (size_t i = 0; i < v.size(); ++i) {
      const json& e = v[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        fail(at(key) + "/" + std::to_string(i), "expected an [x, y] pair");
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
  }
  std::optional<CMatrix> matrix(const char* key) const {
    if (!has(key) || get(key).is_null()) return std::nullopt;
    return read_matrix(get(key), at(key));
  }
  std::optional<json> spectrum(const char* key) const {
    if (!has(key) || get(key).is_null()) return std::nullopt;
    const json& v = get(key);
    if (!v.is_string() && !v.is_object()) fail(at(key), "expected a file path or an inline spectrum object");
    return v;
  }

 private:
  const json& j_;
  std::string ptr_;
};

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  return doc.contains(key) ? doc.at(key) : empty;
}

void check_size(const CMatrix& m, int n, const std::string& ptr) {
  if (static_cast<int>(m.size()) != n) fail(ptr, "expected a " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
}

}  // namespace

Mat to_mat(const CMatrix& m) {
  const Index n = static_cast<Index>(m.size());
  Mat out(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) out(r, c) = m[r][c];
  return out;
}

CMatrix from_mat(const Mat& m) {
  CMatrix out(m.rows(), std::vector<cplx>(m.cols()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

BoundaryGeometry make_geometry(const GeometrySpec& g) {
  if (g.n == 0) throw Error(ErrorKind::configuration, kModule, "/geometry: this command needs a geometry");
  BoundaryGeometry b;
  b.A = to_mat(g.A);
  b.gamma = to_mat(g.gamma);
  if (g.tau) b.tau = to_mat(*g.tau);
  if (g.sigma) b.sigma = to_mat(*g.sigma);
  return b;
}

ScenarioConfig parse_config(const json& doc) {
  ScenarioConfig c;
  Obj top(doc, "", {"geometry", "family", "model", "sf", "kernel_check", "trace", "eta", "glue", "flow", "threads",
                    "solver_tol", "out", "version"});
  c.threads = top.integer("threads", c.threads, 1);
  c.solver_tol = top.positive("solver_tol", c.solver_tol);
  c.out = top.text("out", c.out);

  {
    Obj g(section(doc, "geometry"), "/geometry", {"n", "A", "gamma", "tau", "sigma", "tolerance"});
    auto A = g.matrix("A");
    auto gamma = g.matrix("gamma");
    if (A || gamma || g.has("n")) {
      if (!A) fail("/geometry/A", "missing");
      if (!gamma) fail("/geometry/gamma", "missing");
      c.geometry.A = *A;
      c.geometry.gamma = *gamma;
      c.geometry.n = static_cast<int>(A->size());
      if (g.has("n") && g.integer("n", 0, 0) != c.geometry.n) fail("/geometry/n", "does not match the size of A");
      check_size(c.geometry.gamma, c.geometry.n, "/geometry/gamma");
      c.geometry.tau = g.matrix("tau");
      if (c.geometry.tau) check_size(*c.geometry.tau, c.geometry.n, "/geometry/tau");
      c.geometry.sigma = g.matrix("sigma");
      if (c.geometry.sigma) check_size(*c.geometry.sigma, c.geometry.n, "/geometry/sigma");
    }
    c.geometry.tolerance = g.num("tolerance", 0.0);
    if (c.geometry.tolerance < 0.0) fail("/geometry/tolerance", "must be nonnegative");
  }
  {
    Obj f(section(doc, "family"), "/family", {"kind", "generator", "a"});
    c.family.kind = f.choice("kind", c.family.kind, {"cutting", "generic"});
    c.family.generator = f.matrix("generator");
    c.family.a_table = f.pairs("a", {}, true);
    if (c.family.kind == "generic" && !c.family.generator) fail("/family/generator", "a generic family needs a generator");
    if (c.family.generator && c.family.kind == "cutting") fail("/family/generator", "only used by generic families");
    for (size_t i = 1; i < c.family.a_table.size(); ++i)
      if (!(c.family.a_table[i].first > c.family.a_table[i - 1].first))
        fail("/family/a/" + std::to_string(i), "theta knots must increase");
  }
  {
    Obj m(section(doc, "model"), "/model", {"type", "L", "twist"});
    c.model.type = m.choice("type", c.model.type, {"cut-circle", "half-line"});
    c.model.L = m.positive("L", c.model.L);
    c.model.twist = m.matrix("twist");
  }
  {
    Obj s(section(doc, "sf"), "/sf", {"a", "x_min", "x_max", "x_count", "w_re", "w_im", "residues", "tol"});
    c.sf.a = s.nums("a", c.sf.a);
    for (size_t i = 0; i < c.sf.a.size(); ++i)
      if (!(c.sf.a[i] > -1.0 && c.sf.a[i] <= 1.0)) fail("/sf/a/" + std::to_string(i), "a must lie in (-1, 1]");
    c.sf.x_min = s.positive("x_min", c.sf.x_min);
    c.sf.x_max = s.positive("x_max", c.sf.x_max);
    if (!(c.sf.x_max > c.sf.x_min)) fail("/sf/x_max", "must exceed x_min");
    c.sf.x_count = s.integer("x_count", c.sf.x_count, 2);
    c.sf.w_re = s.nums("w_re", c.sf.w_re);
    c.sf.w_im = s.nums("w_im", c.sf.w_im);
    c.sf.residues = s.integer("residues", c.sf.residues, 0);
    c.sf.tol = s.positive("tol", c.sf.tol);
  }
  {
    Obj k(section(doc, "kernel_check"), "/kernel_check",
          {"theta", "t", "points", "x_boundary", "y_boundary", "semigroup_s", "grid_length", "grid_panels", "grid_order",
           "tol_pde", "tol_symmetry", "tol_semigroup", "min_decay_order", "tol_vanishing", "csv"});
    auto& s = c.kernel_check;
    s.theta = k.nums("theta", s.theta);
    s.t = k.positive("t", s.t);
    s.points = k.pairs("points", s.points);
    s.x_boundary = k.nums("x_boundary", s.x_boundary);
    s.y_boundary = k.positive("y_boundary", s.y_boundary);
    s.semigroup_s = k.positive("semigroup_s", s.semigroup_s);
    s.grid_length = k.positive("grid_length", s.grid_length);
    s.grid_panels = k.integer("grid_panels", s.grid_panels, 1);
    s.grid_order = k.integer("grid_order", s.grid_order, 2);
    s.tol_pde = k.positive("tol_pde", s.tol_pde);
    s.tol_symmetry = k.positive("tol_symmetry", s.tol_symmetry);
    s.tol_semigroup = k.positive("tol_semigroup", s.tol_semigroup);
    s.min_decay_order = k.num("min_decay_order", s.min_decay_order);
    s.tol_vanishing = k.positive("tol_vanishing", s.tol_vanishing);
    s.csv = k.boolean("csv", s.csv);
  }
  {
    Obj t(section(doc, "trace"), "/trace", {"theta", "l", "t_min", "t_max", "samples", "terms", "compare", "r0", "r1", "tol"});
    auto& s = c.trace;
    s.theta = t.num("theta", s.theta);
    s.l = t.integer("l", s.l, 0);
    if (s.l > 1) fail("/trace/l", "must be 0 or 1");
    s.t_min = t.positive("t_min", s.t_min);
    s.t_max = t.positive("t_max", s.t_max);
    if (!(s.t_max > s.t_min)) fail("/trace/t_max", "must exceed t_min");
    s.samples = t.integer("samples", s.samples, 2);
    s.terms = t.integer("terms", s.terms, 1);
    s.compare = t.integer("compare", s.compare, 1);
    if (s.compare > s.terms) fail("/trace/compare", "cannot exceed terms");
    s.r0 = t.positive("r0", s.r0);
    s.r1 = t.positive("r1", s.r1);
    if (!(s.r0 < s.r1 && s.r1 < 1.0)) fail("/trace/r1", "need 0 < r0 < r1 < 1");
    s.tol = t.positive("tol", s.tol);
  }
  {
    Obj e(section(doc, "eta"), "/eta", {"theta", "Lambda", "spectrum"});
    c.eta.theta = e.num("theta", c.eta.theta);
    c.eta.Lambda = e.positive("Lambda", c.eta.Lambda);
    c.eta.spectrum = e.spectrum("spectrum");
  }
  {
    Obj g(section(doc, "glue"), "/glue", {"Lambda", "tol", "cut_spectrum", "glued_spectrum"});
    c.glue.Lambda = g.positive("Lambda", c.glue.Lambda);
    c.glue.tol = g.positive("tol", c.glue.tol);
    c.glue.cut_spectrum = g.spectrum("cut_spectrum");
    c.glue.glued_spectrum = g.spectrum("glued_spectrum");
  }
  {
    Obj f(section(doc, "flow"), "/flow", {"parameter", "theta", "start", "end", "steps", "window", "Lambda"});
    auto& s = c.flow;
    s.parameter = f.choice("parameter", s.parameter, {"twist", "theta"});
    s.theta = f.num("theta", s.theta);
    s.start = f.num("start", s.start);
    s.end = f.num("end", s.end);
    if (!(s.end > s.start)) fail("/flow/end", "must exceed start");
    s.steps = f.integer("steps", s.steps, 2);
    s.window = f.positive("window", s.window);
    s.Lambda = f.positive("Lambda", s.Lambda);
  }
  return c;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::configuration, kModule, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::configuration, kModule, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json emit(const ScenarioConfig& c) {
  json j;
  j["threads"] = c.threads;
  j["solver_tol"] = c.solver_tol;
  j["out"] = c.out;
  json g;
  g["n"] = c.geometry.n;
  g["A"] = write_matrix(c.geometry.A);
  g["gamma"] = write_matrix(c.geometry.gamma);
  g["tau"] = c.geometry.tau ? write_matrix(*c.geometry.tau) : json(nullptr);
  g["sigma"] = c.geometry.sigma ? write_matrix(*c.geometry.sigma) : json(nullptr);
  g["tolerance"] = c.geometry.tolerance;
  j["geometry"] = g;
  json f;
  f["kind"] = c.family.kind;
  f["generator"] = c.family.generator ? write_matrix(*c.family.generator) : json(nullptr);
  f["a"] = json::array();
  for (const auto& [th, a] : c.family.a_table) f["a"].push_back(json::array({th, a}));
  j["family"] = f;
  j["model"] = {{"type", c.model.type},
                {"L", c.model.L},
                {"twist", c.model.twist ? write_matrix(*c.model.twist) : json(nullptr)}};
  j["sf"] = {{"a", c.sf.a},           {"x_min", c.sf.x_min}, {"x_max", c.sf.x_max},       {"x_count", c.sf.x_count},
             {"w_re", c.sf.w_re},     {"w_im", c.sf.w_im},   {"residues", c.sf.residues}, {"tol", c.sf.tol}};
  const auto& k = c.kernel_check;
  json pts = json::array();
  for (const auto& [x, y] : k.points) pts.push_back(json::array({x, y}));
  j["kernel_check"] = {{"theta", k.theta},
                       {"t", k.t},
                       {"points", pts},
                       {"x_boundary", k.x_boundary},
                       {"y_boundary", k.y_boundary},
                       {"semigroup_s", k.semigroup_s},
                       {"grid_length", k.grid_length},
                       {"grid_panels", k.grid_panels},
                       {"grid_order", k.grid_order},
                       {"tol_pde", k.tol_pde},
                       {"tol_symmetry", k.tol_symmetry},
                       {"tol_semigroup", k.tol_semigroup},
                       {"min_decay_order", k.min_decay_order},
                       {"tol_vanishing", k.tol_vanishing},
                       {"csv", k.csv}};
  const auto& t = c.trace;
  j["trace"] = {{"theta", t.theta}, {"l", t.l},         {"t_min", t.t_min},     {"t_max", t.t_max},
                {"samples", t.samples}, {"terms", t.terms}, {"compare", t.compare}, {"r0", t.r0},
                {"r1", t.r1},       {"tol", t.tol}};
  j["eta"] = {{"theta", c.eta.theta}, {"Lambda", c.eta.Lambda}, {"spectrum", c.eta.spectrum ? *c.eta.spectrum : json(nullptr)}};
  j["glue"] = {{"Lambda", c.glue.Lambda},
               {"tol", c.glue.tol},
               {"cut_spectrum", c.glue.cut_spectrum ? *c.glue.cut_spectrum : json(nullptr)},
               {"glued_spectrum", c.glue.glued_spectrum ? *c.glue.glued_spectrum : json(nullptr)}};
  const auto& fl = c.flow;
  j["flow"] = {{"parameter", fl.parameter}, {"theta", fl.theta},   {"start", fl.start}, {"end", fl.end},
               {"steps", fl.steps},         {"window", fl.window}, {"Lambda", fl.Lambda}};
  return j;
}

namespace {

void dump_into(const json& j, int indent, int depth, std::string& out) {
  auto pad = [&](int d) {
    if (indent >= 0) {
      out += '\n';
      out.append(static_cast<size_t>(indent * d), ' ');
    }
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += json(it.key()).dump();
        out += indent >= 0 ? ": " : ":";
        dump_into(it.value(), indent, depth + 1, out);
      }
      pad(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // short numeric rows stay on one line
      bool flat = j.size() <= 4 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat && indent >= 0 ? ", " : ",";
        if (!flat) pad(depth + 1);
        dump_into(j[i], flat ? -1 : indent, depth + 1, out);
      }
      if (!flat) pad(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string s(buf);
      // keep it a float on re-read
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  return out;
}

}  // namespace etalab::cli
