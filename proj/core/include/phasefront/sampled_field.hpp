#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "phasefront/types.hpp"

namespace phasefront {

/// Complex field sampled on the uniform grid [-L, L)^d, n points per axis
/// (n a power of two), row-major in d = 2.
struct SampledField {
  int d = 1;
  double half_width = 0.0;  // L
  int n = 0;                // points per axis
  std::vector<cplx> values;

  double step() const { return 2.0 * half_width / n; }
  std::size_t size() const { return values.size(); }

  double coord(int i) const { return -half_width + step() * i; }
  cplx& at(int i) { return values[i]; }
  cplx& at(int i, int j) { return values[static_cast<std::size_t>(i) * n + j]; }
  const cplx& at(int i) const { return values[i]; }
  const cplx& at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }

  /// sqrt( step^d * sum |v|^2 )
  double l2_norm() const;

  static SampledField zeros(int d, double half_width, int n);
  static SampledField sample(int d, double half_width, int n,
                             const std::function<cplx(const Vec&)>& f);

  /// Largest |fhat| over the outer quarter of the frequency range, relative
  /// to the overall largest |fhat|. Small values mean the grid resolves f.
  double spectral_tail() const;

  /// Continuous-normalization Fourier transform (F f(xi) = \int f e^{-i<x,xi>}),
  /// returned as a field on the natural frequency grid.
  SampledField fourier_transform() const;

  /// JSON header {d, L, n} plus CSV rows "x[,y],re,im".
  void save(const std::string& json_path, const std::string& csv_path) const;
  static SampledField load(const std::string& json_path, const std::string& csv_path);
};

}  // namespace phasefront
