#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pipeline.hpp"

namespace {

struct CommonFlags {
  std::string scenario_path;
  std::string out_dir = ".";
  int dirs = -1;
  std::string radii;
  double s = -1;
  double amin = -1;
  double angular_tol = -1;
  std::string engine;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_scenario = true) {
  auto* opt = cmd->add_option("--scenario", f.scenario_path, "scenario JSON file");
  if (needs_scenario) opt->required();
  cmd->add_option("--out", f.out_dir, "output directory (default .)");
  cmd->add_option("--dirs", f.dirs, "direction-grid size");
  cmd->add_option("--radii", f.radii, "decay-fit radii r1:r2:k");
  cmd->add_option("--s", f.s, "Gelfand-Shilov index (> 1/2)");
  cmd->add_option("--amin", f.amin, "singularity threshold on the fitted rate");
  cmd->add_option("--angular-tol", f.angular_tol, "inclusion tolerance, degrees");
  cmd->add_option("--engine", f.engine, "auto|gaussian|splitstep|metaplectic");
}

phasefront::cli::Scenario load_with_overrides(const CommonFlags& f) {
  auto sc = phasefront::cli::Scenario::load(f.scenario_path);
  if (f.dirs > 0) sc.estimator.n_dirs = f.dirs;
  if (f.s > 0) sc.estimator.s = f.s;
  if (f.amin >= 0) sc.estimator.a_min = f.amin;
  if (f.angular_tol >= 0) sc.angular_tol_deg = f.angular_tol;
  if (!f.engine.empty()) sc.engine = f.engine;
  if (!f.radii.empty()) {
    std::stringstream ss(f.radii);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) throw std::invalid_argument("--radii expects r1:r2:k");
    sc.estimator.r_min = std::stod(parts[0]);
    sc.estimator.r_max = std::stod(parts[1]);
    sc.estimator.radii_count = std::stoi(parts[2]);
  }
  std::filesystem::create_directories(f.out_dir);
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-space singularity analysis for quadratic Schrodinger-type "
               "evolutions"};
  app.require_subcommand(1);

  CommonFlags predict_f, simulate_f, estimate_f, verify_f, seminorms_f;
  std::string phase_path, osc_out = ".";

  auto* predict = app.add_subcommand("predict", "exact propagated-cone predictions");
  add_common(predict, predict_f);
  auto* simulate = app.add_subcommand("simulate", "run a propagation engine");
  add_common(simulate, simulate_f);
  auto* estimate = app.add_subcommand("estimate", "estimate the singular cone of the "
                                                  "initial data");
  add_common(estimate, estimate_f);
  auto* verify = app.add_subcommand("verify", "propagate, estimate and check the "
                                              "predicted inclusion");
  add_common(verify, verify_f);
  auto* oscillatory =
      app.add_subcommand("oscillatory", "wave-front prediction for a quadratic phase");
  oscillatory->add_option("--phase", phase_path, "phase JSON file")->required();
  oscillatory->add_option("--out", osc_out, "output directory (default .)");
  auto* seminorms = app.add_subcommand("seminorms", "evaluate the seminorm families");
  add_common(seminorms, seminorms_f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (predict->parsed())
      return phasefront::cli::cmd_predict(load_with_overrides(predict_f), predict_f.out_dir);
    if (simulate->parsed())
      return phasefront::cli::cmd_simulate(load_with_overrides(simulate_f), simulate_f.out_dir);
    if (estimate->parsed())
      return phasefront::cli::cmd_estimate(load_with_overrides(estimate_f), estimate_f.out_dir);
    if (verify->parsed())
      return phasefront::cli::cmd_verify(load_with_overrides(verify_f), verify_f.out_dir);
    if (oscillatory->parsed()) {
      std::filesystem::create_directories(osc_out);
      return phasefront::cli::cmd_oscillatory(phase_path, osc_out);
    }
    if (seminorms->parsed())
      return phasefront::cli::cmd_seminorms(load_with_overrides(seminorms_f),
                                            seminorms_f.out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
