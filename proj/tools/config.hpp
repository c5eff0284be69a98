#pragma once

#include "etalab/etalab.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace etalab::cli {

inline constexpr const char* version = "0.1.0";

using json = nlohmann::json;
using CMatrix = std::vector<std::vector<cplx>>;

struct GeometrySpec {
  int n = 0;
  CMatrix A, gamma;
  std::optional<CMatrix> tau, sigma;
  double tolerance = 0.0;  // 0 means 1e-10 (||A|| + 1)
  bool operator==(const GeometrySpec&) const = default;
};

struct FamilySpec {
  std::string kind = "cutting";        // cutting | generic
  std::optional<CMatrix> generator;    // generic: T(theta) = theta G
  std::vector<std::pair<double, double>> a_table;  // generic: (theta, a) knots, empty means fitted
  bool operator==(const FamilySpec&) const = default;
};

struct ModelSpec {
  std::string type = "cut-circle";  // cut-circle | half-line
  double L = 2.0;
  std::optional<CMatrix> twist;     // on K+ of the doubled geometry, default -I
  bool operator==(const ModelSpec&) const = default;
};

struct SfSpec {
  std::vector<double> a{0.0, 0.3, 0.6, 1.0};
  double x_min = 1e-3, x_max = 10.0;
  int x_count = 50;
  std::vector<double> w_re{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  std::vector<double> w_im{0.0, 1.0, 2.0};
  int residues = 7;
  double tol = 1e-8;
  bool operator==(const SfSpec&) const = default;
};

struct KernelCheckSpec {
  std::vector<double> theta{0.0, 0.3, pi / 4};
  double t = 0.1;
  std::vector<std::pair<double, double>> points{{0.3, 0.5}, {0.7, 0.2}, {1.0, 1.0}, {0.05, 0.4}};
  std::vector<double> x_boundary{1e-2, 1e-3, 1e-4};
  double y_boundary = 0.5;
  double semigroup_s = 0.05;
  double grid_length = 6.0;
  int grid_panels = 60;
  int grid_order = 10;
  double tol_pde = 1e-4;
  double tol_symmetry = 1e-10;
  double tol_semigroup = 1e-5;
  double min_decay_order = 0.9;
  double tol_vanishing = 1e-12;
  bool csv = true;
  bool operator==(const KernelCheckSpec&) const = default;
};

struct TraceSpec {
  double theta = 0.0;
  int l = 0;
  double t_min = 1e-3, t_max = 1e-1;
  int samples = 40;
  int terms = 8;
  int compare = 4;
  double r0 = 0.25, r1 = 0.75;
  double tol = 1e-3;
  bool operator==(const TraceSpec&) const = default;
};

struct EtaSpec {
  double theta = 0.0;
  double Lambda = 1e3;
  std::optional<json> spectrum;  // SpectrumSlice dump, inline or a file path
  bool operator==(const EtaSpec&) const = default;
};

struct GlueSpec {
  double Lambda = 1e4;
  double tol = 1e-3;
  std::optional<json> cut_spectrum, glued_spectrum;
  bool operator==(const GlueSpec&) const = default;
};

struct FlowSpec {
  std::string parameter = "twist";  // twist | theta
  double theta = 0.0;               // fixed theta for twist sweeps
  double start = 0.0, end = 2 * pi;
  int steps = 64;
  double window = 6.0;
  double Lambda = 1e3;              // for the eta endpoints and rate
  bool operator==(const FlowSpec&) const = default;
};

struct ScenarioConfig {
  GeometrySpec geometry;
  FamilySpec family;
  ModelSpec model;
  SfSpec sf;
  KernelCheckSpec kernel_check;
  TraceSpec trace;
  EtaSpec eta;
  GlueSpec glue;
  FlowSpec flow;
  int threads = 1;
  double solver_tol = 1e-11;
  std::string out = ".";
  bool operator==(const ScenarioConfig&) const = default;
};

// Schema violations throw a configuration error naming the JSON pointer path.
ScenarioConfig parse_config(const json& doc);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// Fully-defaulted document; parse_config(emit(c)) == c.
json emit(const ScenarioConfig& c);

Mat to_mat(const CMatrix& m);
CMatrix from_mat(const Mat& m);
BoundaryGeometry make_geometry(const GeometrySpec& g);

// JSON text with every double printed to 17 significant digits.
std::string dump(const json& j, int indent = 2);

}  // namespace etalab::cli
