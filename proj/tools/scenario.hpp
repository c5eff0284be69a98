#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string>

namespace etalab::cli {

enum ExitCode { exit_pass = 0, exit_fail = 1, exit_error = 2 };

// Runs one of sf, kernel-check, trace, eta, glue, flow. Writes <command>.json plus
// CSV data into cfg.out; diagnostics go to `log`.
int run_scenario(const ScenarioConfig& cfg, const std::string& command, std::ostream& log);

// SpectrumSlice <-> {"eigenvalues": [[lambda, mult], ...], "Lambda": ..., "complete": ..., "tail": {...} | null}
json slice_to_json(const SpectrumSlice& s);
SpectrumSlice slice_from_json(const json& j, const std::string& ptr);
// A string is read as a path to a dump, an object is taken inline.
SpectrumSlice load_slice(const json& spec, const std::string& ptr);

// Deformation used by the kernel and trace commands.
ApsDeformation make_deformation(const ScenarioConfig& cfg);
// Cut-circle model at theta with the configured twist.
CutCircleModel make_model(const ScenarioConfig& cfg, double theta, const Mat& twist_override = Mat());

}  // namespace etalab::cli
