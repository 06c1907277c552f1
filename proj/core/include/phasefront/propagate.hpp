#pragma once

#include <string>
#include <vector>

#include "phasefront/gaussian_state.hpp"
#include "phasefront/hamiltonian.hpp"
#include "phasefront/sampled_field.hpp"
#include "phasefront/subspace.hpp"
#include "phasefront/symplectic.hpp"
#include "phasefront/types.hpp"

namespace phasefront {

struct GaussianPropagation {
  GaussianChirpState state;
  double t = 0.0;
  int checkpoints = 0;       // time subdivisions actually used
  double max_condition = 0;  // worst cond(A + B M) seen
  int branch_events = 0;     // steps whose det(A + B M) had negative real part
};

/// Exact propagation of a Gaussian-chirp state: per checkpoint step the
/// centered matrix evolves by the graph action of exp(-2 i dt F), the
/// amplitude by det(A + B M)^{-1/2} with the branch tracked continuously,
/// and the linear coefficient by the matched first-order system
///   b' = 2i (Q_xxi + M Q_xixi) b,
///   (log c)' = -<b, Q_xixi b> + i tr(Q_xixi M + Q_xxi).
/// Steps whose graph denominator exceeds condition 1e12 are refined; if
/// refinement bottoms out the step fails (caustic crossing).
GaussianPropagation propagate_gaussian(const GaussianChirpState& u0,
                                       const HamiltonMap& h, double t,
                                       int n_checkpoints = 0);

struct SplitStepPropagation {
  SampledField field;
  double t = 0.0;
  int steps = 0;
  std::vector<double> l2_history;  // norm after each step (index 0 = initial)
};

/// Strang splitting for cross-term-free Q: half-step multiplier
/// exp(-(dt/2) <x, Q_xx x>), full Fourier-multiplier step
/// exp(-dt <xi, Q_xixi xi>), half-step multiplier. Rejects Q with cross
/// terms and under-resolved grids (spectral tail > 1e-8 at the end).
SplitStepPropagation propagate_splitstep(const SampledField& f,
                                         const QuadraticHamiltonian& q, double t,
                                         int n_steps);

/// d = 1 metaplectic transform of a sampled field by a real symplectic chi,
/// via the chirp / scaled-Fourier / chirp factorization (|B| > 1e-8) or the
/// chirp * dilation path (B = 0). The operator is defined up to a unimodular
/// constant; output is rescaled to the input's L^2 norm.
SampledField propagate_metaplectic_1d(const SampledField& f, const Mat& chi);

/// Real points of the propagator's twisted-graph Lagrangian:
/// { (x, y, xi, -eta) : (y,eta) in Ker Im e^{-2itF}, (x,xi) = Re(e^{-2itF})(y,eta) },
/// as an exact cone in R^{4d}.
ConeSet kernel_lagrangian(const HamiltonMap& h, double t, double tol = kDefaultRankTol);

}  // namespace phasefront
