#pragma once

#include <functional>
#include <vector>

#include "phasefront/sampled_field.hpp"
#include "phasefront/stft.hpp"
#include "phasefront/types.hpp"

namespace phasefront {

/// Result of a sup-type seminorm evaluated on a finite window [-R, R]^dim.
struct SupSeminorm {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
  Vec argmax;
  bool boundary = false;    // argmax on the window boundary: sup unreliable
  bool divergent = false;   // supremand still growing at the boundary
  Vec witness_direction;    // argmax / |argmax| when boundary/divergent
};

/// sup over a dense grid in [-R, R]^dim of e^{A |x|^{1/s}} |f(x)|.
/// Requires A > 0, s > 1/2 (the spaces are trivial at s <= 1/2).
SupSeminorm seminorm_sup(const std::function<double(const Vec&)>& f_abs, int dim,
                         double A, double s, double R, int pts_per_axis = 801);

/// Same supremand over phase space z in R^{2d}, |V_phi u(z)| from the
/// given evaluator.
SupSeminorm seminorm_stft(const StftEvaluator& V, double A, double s, double R,
                          int pts_per_axis = 401);

struct DerivativeSeminorm {
  double value = 0.0;
  std::vector<int> argmax_beta;  // maximizing multi-index
  Vec argmax_x;
  bool truncation_suspect = false;  // |argmax_beta| == beta_max
};

/// Truncated sup over |beta| <= beta_max and the grid of
///   A^{|beta|} e^{A |x|^{1/s}} |D^beta f(x)| / (beta!)^s,
/// derivatives by spectral differentiation. Requires the field to be
/// band-limited on its grid (spectral tail below 1e-10).
DerivativeSeminorm seminorm_derivatives(const SampledField& f, double A, double s,
                                        int beta_max);

}  // namespace phasefront
