#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "phasefront/sampled_field.hpp"
#include "phasefront/stft.hpp"
#include "phasefront/types.hpp"

namespace phasefront {

/// One term c * exp(i(<x, Mx>/2 + <b, x>)), M complex symmetric, Im M >= 0.
struct GaussianChirpTerm {
  cplx amplitude = 1.0;
  CMat M;
  CVec b;
};

/// Finite sum of generalized Gaussians; the class of states the exact graph
/// engine propagates.
struct GaussianChirpState {
  int d = 0;
  std::vector<GaussianChirpTerm> terms;

  static GaussianChirpState single(cplx amplitude, CMat M, CVec b);
  /// Validates Im M >= -1e-10 per term; throws on violation.
  void validate() const;

  cplx evaluate(const Vec& x) const;
  SampledField sample(double half_width, int n) const;

  /// Closed-form L^2 norm; requires Im M strictly positive for every term.
  double l2_norm() const;

  /// Exact |V_phi| evaluator (sum of per-term closed forms).
  StftEvaluator stft_evaluator() const;
  cplx stft(const Vec& x, const Vec& xi) const;

  nlohmann::json to_json() const;
  static GaussianChirpState from_json(const nlohmann::json& j);
};

}  // namespace phasefront
