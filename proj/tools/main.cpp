#include "scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <utility>

int main(int argc, char** argv) {
  using namespace etalab::cli;
  CLI::App app{"etalab: spectral invariants of APS-type boundary problems"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  int threads = 0;
  double tol = 0.0;
  const std::pair<const char*, const char*> commands[] = {
      {"sf", "F_a, its Mellin transform and residues against quadrature"},
      {"kernel-check", "heat kernel identities on the half-line model"},
      {"trace", "fit the small-t heat or eta-density trace against the predicted expansion"},
      {"eta", "regularized eta invariant of the cut circle or of a spectrum dump"},
      {"glue", "gluing law between the cut and the glued circle"},
      {"flow", "spectral flow and integrality along a twist or theta sweep"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides /out)");
    sub->add_option("--threads", threads, "worker threads (overrides /threads)")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "verdict tolerance of the command")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : exit_error;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ScenarioConfig cfg;
  try {
    cfg = parse_config_file(config_path);
  } catch (const etalab::Error& e) {
    std::cerr << "etalab " << command << ": " << e.what() << '\n';
    return exit_error;
  }
  if (!out_dir.empty()) cfg.out = out_dir;
  if (threads > 0) cfg.threads = threads;
  if (tol > 0.0) {
    if (command == "sf") cfg.sf.tol = tol;
    else if (command == "kernel-check") cfg.kernel_check.tol_pde = tol;
    else if (command == "trace") cfg.trace.tol = tol;
    else if (command == "glue") cfg.glue.tol = tol;
    else cfg.solver_tol = tol;
  }
  return run_scenario(cfg, command, std::cerr);
}
