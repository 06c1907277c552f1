#include "phasefront/seminorms.hpp"

#include <cmath>
#include <stdexcept>

#include "phasefront/fft.hpp"

namespace phasefront {

namespace {

void check_params(double A, double s, double R) {
  if (A <= 0) throw std::invalid_argument("seminorm: A must be positive");
  if (s <= 0.5) throw std::invalid_argument("seminorm: requires s > 1/2");
  if (R <= 0) throw std::invalid_argument("seminorm: R must be positive");
}

/// Grid sup of exp(A |x|^{1/s} + log f_abs(x)) over [-R, R]^dim, in log space
/// so that divergent supremands do not overflow.
SupSeminorm grid_sup(const std::function<double(const Vec&)>& f_abs, int dim,
                     double A, double s, double R, int pts) {
  SupSeminorm out;
  out.argmax = Vec::Zero(dim);
  const double h = 2.0 * R / (pts - 1);
  double best = -std::numeric_limits<double>::infinity();
  Vec x(dim);
  std::vector<int> index(dim, 0);
  const long total = static_cast<long>(std::pow(static_cast<double>(pts), dim));
  for (long flat = 0; flat < total; ++flat) {
    long rest = flat;
    for (int a = 0; a < dim; ++a) {
      index[a] = static_cast<int>(rest % pts);
      rest /= pts;
      x(a) = -R + h * index[a];
    }
    const double mag = f_abs(x);
    if (mag <= 0.0 || !std::isfinite(mag)) continue;
    const double lg = A * std::pow(x.norm(), 1.0 / s) + std::log(mag);
    if (lg > best) {
      best = lg;
      out.argmax = x;
    }
  }
  out.log_value = best;
  out.value = std::exp(best);
  const double edge = R - 1.5 * h;
  out.boundary = out.argmax.cwiseAbs().maxCoeff() >= edge;
  if (out.boundary) {
    out.divergent = true;  // still growing at the window edge
    const double norm = out.argmax.norm();
    out.witness_direction = norm > 0 ? Vec(out.argmax / norm) : Vec::Zero(dim);
  }
  return out;
}

}  // namespace

SupSeminorm seminorm_sup(const std::function<double(const Vec&)>& f_abs, int dim,
                         double A, double s, double R, int pts_per_axis) {
  check_params(A, s, R);
  if (dim < 1 || dim > 2) throw std::invalid_argument("seminorm_sup: dim must be 1 or 2");
  return grid_sup(f_abs, dim, A, s, R, pts_per_axis);
}

SupSeminorm seminorm_stft(const StftEvaluator& V, double A, double s, double R,
                          int pts_per_axis) {
  check_params(A, s, R);
  if (V.phase_dim != 2 && V.phase_dim != 4)
    throw std::invalid_argument("seminorm_stft: phase dim must be 2 or 4");
  // d = 2 phase space is 4-dimensional; use a coarser default there.
  const int pts = V.phase_dim == 2 ? pts_per_axis : std::min(pts_per_axis, 41);
  return grid_sup(V.magnitude, V.phase_dim, A, s, R, pts);
}

DerivativeSeminorm seminorm_derivatives(const SampledField& f, double A, double s,
                                        int beta_max) {
  check_params(A, s, 1.0);
  if (beta_max < 0) throw std::invalid_argument("seminorm_derivatives: beta_max >= 0");
  if (f.spectral_tail() > 1e-10)
    throw std::invalid_argument(
        "seminorm_derivatives: field is not band-limited on its grid");

  DerivativeSeminorm out;
  out.argmax_x = Vec::Zero(f.d);
  const int n = f.n;
  const auto xi = fft::frequencies(n, f.half_width);

  // lgamma-based log factorial
  auto logfact = [](int k) { return std::lgamma(static_cast<double>(k) + 1.0); };

  double best = -std::numeric_limits<double>::infinity();

  // Zero sub-noise spectrum bins: the xi^beta multiplier would otherwise
  // amplify the FFT roundoff floor past the genuine high-order derivatives.
  auto denoise = [](std::vector<cplx>& hat) {
    double peak = 0.0;
    for (const auto& v : hat) peak = std::max(peak, std::abs(v));
    const double floor = 1e-13 * peak;
    for (auto& v : hat)
      if (std::abs(v) < floor) v = 0.0;
  };

  if (f.d == 1) {
    std::vector<cplx> hat = f.values;
    fft::forward(hat);
    denoise(hat);
    std::vector<cplx> work(n);
    for (int beta = 0; beta <= beta_max; ++beta) {
      for (int k = 0; k < n; ++k)
        work[k] = hat[k] * std::pow(cplx(xi[k], 0.0), beta);
      fft::inverse(work);
      const double log_coef = beta * std::log(A) - s * logfact(beta);
      for (int i = 0; i < n; ++i) {
        const double mag = std::abs(work[i]);
        if (mag <= 0.0) continue;
        const double x = f.coord(i);
        const double lg =
            log_coef + A * std::pow(std::abs(x), 1.0 / s) + std::log(mag);
        if (lg > best) {
          best = lg;
          out.argmax_beta = {beta};
          out.argmax_x = Vec::Constant(1, x);
        }
      }
    }
    out.value = std::exp(best);
    out.truncation_suspect =
        !out.argmax_beta.empty() && out.argmax_beta[0] == beta_max;
    return out;
  }

  // d = 2: sweep multi-indices (b0, b1), |beta| <= beta_max.
  std::vector<cplx> hat = f.values;
  fft::forward2(hat, n, n);
  denoise(hat);
  std::vector<cplx> work(hat.size());
  for (int b0 = 0; b0 <= beta_max; ++b0)
    for (int b1 = 0; b0 + b1 <= beta_max; ++b1) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          work[static_cast<std::size_t>(i) * n + j] =
              hat[static_cast<std::size_t>(i) * n + j] *
              std::pow(cplx(xi[i], 0.0), b0) * std::pow(cplx(xi[j], 0.0), b1);
      fft::inverse2(work, n, n);
      const double log_coef =
          (b0 + b1) * std::log(A) - s * (logfact(b0) + logfact(b1));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double mag = std::abs(work[static_cast<std::size_t>(i) * n + j]);
          if (mag <= 0.0) continue;
          Vec x(2);
          x << f.coord(i), f.coord(j);
          const double lg =
              log_coef + A * std::pow(x.norm(), 1.0 / s) + std::log(mag);
          if (lg > best) {
            best = lg;
            out.argmax_beta = {b0, b1};
            out.argmax_x = x;
          }
        }
    }
  out.value = std::exp(best);
  int order = 0;
  for (int b : out.argmax_beta) order += b;
  out.truncation_suspect = order == beta_max;
  return out;
}

}  // namespace phasefront
