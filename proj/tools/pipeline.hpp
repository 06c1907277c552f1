#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phasefront/gaussian_state.hpp"
#include "phasefront/hamiltonian.hpp"
#include "phasefront/stft.hpp"
#include "phasefront/subspace.hpp"
#include "phasefront/wavefront.hpp"

namespace phasefront::cli {

struct EstimatorOptions {
  double s = 1.0;
  double a_min = 0.5;
  int n_dirs = 360;
  double r_min = 2.0, r_max = 8.0;
  int radii_count = 16;
};

struct GridOptions {
  int n = 4096;
  double half_width = 16.0;
};

/// Batch scenario: Hamiltonian, initial data, time list, engine and
/// estimator parameters. Parsed from the scenario JSON file; CLI flags
/// override individual fields.
struct Scenario {
  std::optional<QuadraticHamiltonian> Q;
  std::vector<double> times;
  nlohmann::json initial;  // kind-tagged
  std::string engine = "auto";
  GridOptions grid;
  EstimatorOptions estimator;
  double angular_tol_deg = 5.0;
  std::optional<ConeSet> initial_cone_override;
  nlohmann::json seminorms;  // optional block for the seminorms command
  long seed = 0;

  static Scenario load(const std::string& path);
};

/// Exact wave front set of a library initial datum (delta, plane wave,
/// chirp, gaussian chirp or explicit cone). Throws for sampled initials
/// without an explicit cone.
ConeSet initial_cone(const Scenario& sc);

/// Initial datum as a Gaussian-chirp state; deltas become Gaussians of
/// width sigma = 4 * grid step (noted in reports).
struct InitialState {
  GaussianChirpState state;
  bool delta_approximated = false;
  double sigma = 0.0;
};
InitialState initial_gaussian_state(const Scenario& sc);

bool initial_is_sampled(const Scenario& sc);
SampledField initial_sampled_field(const Scenario& sc);

int cmd_predict(const Scenario& sc, const std::string& out_dir);
int cmd_simulate(const Scenario& sc, const std::string& out_dir);
int cmd_estimate(const Scenario& sc, const std::string& out_dir);
int cmd_verify(const Scenario& sc, const std::string& out_dir);
int cmd_oscillatory(const std::string& phase_path, const std::string& out_dir);
int cmd_seminorms(const Scenario& sc, const std::string& out_dir);

}  // namespace phasefront::cli
