#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "phasefront/sampled_field.hpp"
#include "phasefront/types.hpp"

namespace phasefront {

/// The fixed analysis window phi(x) = pi^{-d/4} e^{-|x|^2/2} (unit L^2 norm).
struct GaussianWindow {
  int d = 1;
  double value(const Vec& x) const;
};

// -- Library distributions with exact short-time Fourier transforms ---------

struct Delta {           // delta at x0
  Vec center;
};
struct PlaneWave {       // e^{i<x, xi0>}
  Vec freq;
};
struct Chirp {           // e^{i<Bx, x>/2}, B real symmetric
  Mat B;
};
struct GaussianChirp {   // c * exp(i(<x, Mx>/2 + <b, x>)), Im M >= 0
  CMat M;
  CVec b;
  cplx amplitude = 1.0;
};
using LibraryDistribution = std::variant<Delta, PlaneWave, Chirp, GaussianChirp>;

int distribution_dim(const LibraryDistribution& u);

/// Exact V_phi u(x, xi) with the Gaussian window. The Gaussian-chirp branch
/// evaluates the complex Gaussian integral with the principal determinant
/// branch (valid since Re(I - iM) > 0); chirps and plane waves route
/// through it. Throws if Im M has an eigenvalue < -1e-10.
cplx stft_closed_form(const LibraryDistribution& u, const Vec& x, const Vec& xi);
cplx stft_closed_form(const LibraryDistribution& u, const Vec& z);  // z = (x, xi)

/// |V| evaluator over phase space R^{2d}; what the wave-front estimator consumes.
struct StftEvaluator {
  int phase_dim = 2;  // 2d
  std::function<double(const Vec&)> magnitude;
};

StftEvaluator closed_form_evaluator(const LibraryDistribution& u);

/// Frequency-axis slice selection for the sampled transform: the natural FFT
/// frequencies pi k / L, |k| <= n/2, optionally strided.
struct XiGrid {
  int stride = 1;   // keep every stride-th window position / frequency
};

/// |V_phi f| sampled on (x-grid) x (xi-grid); keeps complex values as well.
class StftMap {
 public:
  StftMap(int d, double half_width, int n, int stride);

  int d() const { return d_; }
  int points_per_axis() const { return count_; }
  double position(int i) const { return -half_width_ + step_ * stride_ * i; }
  double frequency(int k) const { return xi_step_ * (k * stride_ - count_half_); }

  cplx& value(int ix, int ik) { return values_[idx(ix, ik)]; }
  const cplx& value(int ix, int ik) const { return values_[idx(ix, ik)]; }
  // d = 2 overloads: position/frequency multi-indices flattened row-major
  cplx& value4(int ix, int iy, int ik, int il);
  const cplx& value4(int ix, int iy, int ik, int il) const;

  /// Bilinear interpolation of |V| at z = (x, xi); zero outside the grid.
  double magnitude_at(const Vec& z) const;
  StftEvaluator evaluator() const;

  double max_reliable_radius() const { return half_width_ / 2.0; }

  /// CSV rows (x[,y], xi[,eta], |V|).
  void export_csv(const std::string& path) const;

  /// Discrete (2pi)^{-d} * sum |V|^2 dz, for the inversion-formula check.
  double parseval_integral() const;

 private:
  std::size_t idx(int ix, int ik) const;
  int d_;
  double half_width_;
  int n_;
  int stride_;
  int count_;        // points per (strided) axis
  int count_half_;
  double step_;      // position grid step (unstrided)
  double xi_step_;   // pi / L
  std::vector<cplx> values_;
};

/// Discrete STFT of a sampled field against the Gaussian window, trapezoidal
/// quadrature (weight = grid step^d), Fourier normalization
/// F f(xi) = \int f(y) e^{-i<y,xi>} dy.
/// Requires the window to fit the grid: e^{-L^2/2} <= 1e-12.
StftMap stft_sampled(const SampledField& f, const GaussianWindow& w,
                     const XiGrid& grid = {});

/// Samples a library distribution onto a grid (deltas are not samplable;
/// throws for them).
SampledField sample_distribution(const LibraryDistribution& u, double half_width, int n);

}  // namespace phasefront
