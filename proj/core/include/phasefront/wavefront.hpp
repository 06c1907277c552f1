#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "phasefront/stft.hpp"
#include "phasefront/subspace.hpp"
#include "phasefront/types.hpp"

namespace phasefront {

/// Decay fit of |V| along one phase-space ray.
struct DecayProfile {
  Vec direction;       // unit vector in R^{2d}
  double s = 1.0;
  double rate = 0.0;       // fitted exponent in |V| ~ e^{-rate * r^{1/s}}
  double intercept = 0.0;  // fitted log-amplitude
  double residual = 0.0;   // RMS of the fit
  double r_min = 0.0, r_max = 0.0;
  int usable = 0;      // radii with |V| above the floating-point floor
  bool reliable = true;  // false: fewer than 4 usable radii (counts as regular)
};

/// Least-squares fit of log|V(r theta)| = intercept - rate * r^{1/s} over the
/// usable radii. Values below 1e-300 truncate the range. Needs >= 8 radii.
DecayProfile directional_decay(const StftEvaluator& V, const Vec& theta,
                               const std::vector<double>& radii, double s);

struct WfEstimateParams {
  double s = 1.0;
  int n_dirs = 360;        // circle count for d=1; sphere count for d=2
  std::vector<double> radii;  // default: 16 log-spaced in [2, 8]
  double a_min = 0.5;      // direction singular iff fitted rate < a_min
};

std::vector<double> log_spaced_radii(double r_min, double r_max, int count);

/// Direction grids: the unit circle for a 2-dimensional phase space, a
/// super-Fibonacci spiral on S^3 for a 4-dimensional one.
std::vector<Vec> direction_grid(int phase_dim, int n_dirs);

struct WfEstimate {
  ConeSet singular;                    // empirical cone of flagged directions
  std::vector<DecayProfile> profiles;  // every direction, scored
  WfEstimateParams params;
};

/// Scans a direction grid, fits the decay exponent along each ray, and flags
/// directions with rate < a_min (and a reliable profile) as singular.
WfEstimate estimate_wf(const StftEvaluator& V, const WfEstimateParams& params);

/// Export all profiles as CSV (direction components, rate, residual, reliable).
void export_profiles_csv(const std::vector<DecayProfile>& profiles,
                         const std::string& path);

struct WfReport {
  ConeSet estimated;          // empirical
  ConeSet predicted;          // exact
  std::vector<double> margins_deg;  // per singular direction
  double max_margin_deg = 0.0;
  bool holds = false;
  double angular_tol_deg = 5.0;
  // Predicted basis directions with no estimated singular direction within
  // tolerance; informational only (the predictions are inclusions, not
  // equalities).
  std::vector<Vec> unmatched_predicted;
  nlohmann::json to_json() const;
};

/// Inclusion check: every estimated singular direction must lie within
/// angular_tol degrees of the union of predicted subspaces.
WfReport check_inclusion(const ConeSet& estimated, const ConeSet& predicted,
                         double angular_tol_deg = 5.0);

}  // namespace phasefront
