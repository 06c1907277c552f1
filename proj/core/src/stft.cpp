#include "phasefront/stft.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "phasefront/fft.hpp"

namespace phasefront {

namespace {

constexpr double kWindowFloor = 1e-12;  // e^{-L^2/2} must be below this

cplx det_inv_sqrt(const CMat& A) {
  // Re(A + A^H)/2 >= I for A = I - iM with Im M >= 0, so every eigenvalue
  // stays in the right half-plane and the principal branch is the analytic
  // continuation from A = I.
  Eigen::ComplexEigenSolver<CMat> es(A);
  cplx out(1.0, 0.0);
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    out *= 1.0 / std::sqrt(es.eigenvalues()(i));
  return out;
}

cplx gaussian_chirp_stft(const GaussianChirp& u, const Vec& x, const Vec& xi) {
  const int d = static_cast<int>(u.M.rows());
  Eigen::SelfAdjointEigenSolver<Mat> im_check(0.5 * (u.M.imag() + u.M.imag().transpose()));
  if (im_check.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("stft_closed_form: Im M has a negative eigenvalue");

  const CMat A = CMat::Identity(d, d) - cplx(0, 1) * u.M;
  const CVec w = x.cast<cplx>() + cplx(0, 1) * (u.b - xi.cast<cplx>());
  const CVec Aw = A.partialPivLu().solve(w);
  const cplx quad = 0.5 * (w.transpose() * Aw)(0);  // bilinear <w, A^{-1} w>/2
  const double prefactor = std::pow(M_PI, -0.25 * d) * std::pow(2.0 * M_PI, 0.5 * d);
  return u.amplitude * prefactor * det_inv_sqrt(A) *
         std::exp(quad - 0.5 * x.squaredNorm());
}

}  // namespace

double GaussianWindow::value(const Vec& x) const {
  return std::pow(M_PI, -0.25 * d) * std::exp(-0.5 * x.squaredNorm());
}

int distribution_dim(const LibraryDistribution& u) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Delta>) return static_cast<int>(v.center.size());
        else if constexpr (std::is_same_v<T, PlaneWave>) return static_cast<int>(v.freq.size());
        else if constexpr (std::is_same_v<T, Chirp>) return static_cast<int>(v.B.rows());
        else return static_cast<int>(v.M.rows());
      },
      u);
}

cplx stft_closed_form(const LibraryDistribution& u, const Vec& x, const Vec& xi) {
  const int d = distribution_dim(u);
  if (x.size() != d || xi.size() != d)
    throw std::invalid_argument("stft_closed_form: point dimension mismatch");
  return std::visit(
      [&](const auto& v) -> cplx {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Delta>) {
          GaussianWindow w{d};
          return w.value(v.center - x) *
                 std::polar(1.0, -v.center.dot(xi));
        } else if constexpr (std::is_same_v<T, PlaneWave>) {
          GaussianChirp g{CMat::Zero(d, d), v.freq.template cast<cplx>(), 1.0};
          return gaussian_chirp_stft(g, x, xi);
        } else if constexpr (std::is_same_v<T, Chirp>) {
          if ((v.B - v.B.transpose()).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("Chirp: B must be symmetric");
          GaussianChirp g{v.B.template cast<cplx>(), CVec::Zero(d), 1.0};
          return gaussian_chirp_stft(g, x, xi);
        } else {
          return gaussian_chirp_stft(v, x, xi);
        }
      },
      u);
}

cplx stft_closed_form(const LibraryDistribution& u, const Vec& z) {
  const int d = distribution_dim(u);
  if (z.size() != 2 * d) throw std::invalid_argument("stft_closed_form: z must be in R^2d");
  return stft_closed_form(u, z.head(d), z.tail(d));
}

StftEvaluator closed_form_evaluator(const LibraryDistribution& u) {
  const int d = distribution_dim(u);
  return StftEvaluator{2 * d,
                       [u](const Vec& z) { return std::abs(stft_closed_form(u, z)); }};
}

StftMap::StftMap(int d, double half_width, int n, int stride)
    : d_(d), half_width_(half_width), n_(n), stride_(stride) {
  if (stride < 1 || n % stride != 0)
    throw std::invalid_argument("StftMap: stride must divide n");
  count_ = n / stride;
  count_half_ = n / 2;
  step_ = 2.0 * half_width / n;
  xi_step_ = M_PI / half_width;
  const std::size_t per_axis = static_cast<std::size_t>(count_);
  values_.assign(d == 1 ? per_axis * per_axis
                        : per_axis * per_axis * per_axis * per_axis,
                 cplx(0, 0));
}

std::size_t StftMap::idx(int ix, int ik) const {
  return static_cast<std::size_t>(ix) * count_ + ik;
}

cplx& StftMap::value4(int ix, int iy, int ik, int il) {
  const std::size_t c = count_;
  return values_[((static_cast<std::size_t>(ix) * c + iy) * c + ik) * c + il];
}
const cplx& StftMap::value4(int ix, int iy, int ik, int il) const {
  const std::size_t c = count_;
  return values_[((static_cast<std::size_t>(ix) * c + iy) * c + ik) * c + il];
}

double StftMap::magnitude_at(const Vec& z) const {
  const double pos_step = step_ * stride_;
  const double xi_step = xi_step_ * stride_;
  const double pos_origin = -half_width_;
  const double xi_origin = -xi_step_ * count_half_;

  auto locate = [](double v, double origin, double h, int count, double& frac) -> int {
    const double u = (v - origin) / h;
    const int i = static_cast<int>(std::floor(u));
    frac = u - i;
    if (i < 0 || i >= count - 1) return -1;
    return i;
  };

  if (d_ == 1) {
    double fx, fk;
    const int ix = locate(z(0), pos_origin, pos_step, count_, fx);
    const int ik = locate(z(1), xi_origin, xi_step, count_, fk);
    if (ix < 0 || ik < 0) return 0.0;
    auto m = [&](int a, int b) { return std::abs(value(a, b)); };
    return (1 - fx) * ((1 - fk) * m(ix, ik) + fk * m(ix, ik + 1)) +
           fx * ((1 - fk) * m(ix + 1, ik) + fk * m(ix + 1, ik + 1));
  }

  double fr[4];
  int base[4];
  for (int a = 0; a < 4; ++a) {
    const bool is_pos = a < 2;
    base[a] = locate(z(a), is_pos ? pos_origin : xi_origin,
                     is_pos ? pos_step : xi_step, count_, fr[a]);
    if (base[a] < 0) return 0.0;
  }
  double acc = 0.0;
  for (int corner = 0; corner < 16; ++corner) {
    double weight = 1.0;
    int at[4];
    for (int a = 0; a < 4; ++a) {
      const int bit = (corner >> a) & 1;
      weight *= bit ? fr[a] : (1.0 - fr[a]);
      at[a] = base[a] + bit;
    }
    acc += weight * std::abs(value4(at[0], at[1], at[2], at[3]));
  }
  return acc;
}

StftEvaluator StftMap::evaluator() const {
  return StftEvaluator{2 * d_, [this](const Vec& z) { return magnitude_at(z); }};
}

void StftMap::export_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  if (d_ == 1) {
    out << "x,xi,abs_v\n";
    for (int ix = 0; ix < count_; ++ix)
      for (int ik = 0; ik < count_; ++ik)
        out << position(ix) << "," << frequency(ik) << "," << std::abs(value(ix, ik))
            << "\n";
  } else {
    out << "x,y,xi,eta,abs_v\n";
    for (int ix = 0; ix < count_; ++ix)
      for (int iy = 0; iy < count_; ++iy)
        for (int ik = 0; ik < count_; ++ik)
          for (int il = 0; il < count_; ++il)
            out << position(ix) << "," << position(iy) << "," << frequency(ik) << ","
                << frequency(il) << "," << std::abs(value4(ix, iy, ik, il)) << "\n";
  }
}

double StftMap::parseval_integral() const {
  double acc = 0.0;
  for (const auto& v : values_) acc += std::norm(v);
  const double dz = std::pow(step_ * stride_, d_) * std::pow(xi_step_ * stride_, d_);
  return acc * dz / std::pow(2.0 * M_PI, d_);
}

StftMap stft_sampled(const SampledField& f, const GaussianWindow& w, const XiGrid& grid) {
  if (w.d != f.d) throw std::invalid_argument("stft_sampled: window dimension mismatch");
  if (std::exp(-0.5 * f.half_width * f.half_width) > kWindowFloor)
    throw std::invalid_argument(
        "stft_sampled: window wider than the grid (needs e^{-L^2/2} <= 1e-12)");

  const int n = f.n;
  const double L = f.half_width;
  const double dx = f.step();
  StftMap map(f.d, L, n, grid.stride);
  const int count = map.points_per_axis();
  const auto xi = fft::frequencies(n, L);

  if (f.d == 1) {
    std::vector<cplx> g(n);
    const double wnorm = std::pow(M_PI, -0.25);
    for (int ix = 0; ix < count; ++ix) {
      const double x0 = map.position(ix);
      for (int j = 0; j < n; ++j) {
        const double y = f.coord(j);
        g[j] = f.at(j) * (wnorm * std::exp(-0.5 * (y - x0) * (y - x0)));
      }
      fft::forward(g);
      for (int ik = 0; ik < count; ++ik) {
        const int kp = ik * grid.stride - n / 2;
        const int bin = (kp + n) % n;
        map.value(ix, ik) = dx * std::polar(1.0, L * xi[bin]) * g[bin];
      }
    }
    return map;
  }

  std::vector<cplx> g(static_cast<std::size_t>(n) * n);
  const double wnorm = std::pow(M_PI, -0.5);
  for (int ix = 0; ix < count; ++ix)
    for (int iy = 0; iy < count; ++iy) {
      const double x0 = map.position(ix), y0 = map.position(iy);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double u = f.coord(i) - x0, v = f.coord(j) - y0;
          g[static_cast<std::size_t>(i) * n + j] =
              f.at(i, j) * (wnorm * std::exp(-0.5 * (u * u + v * v)));
        }
      fft::forward2(g, n, n);
      for (int ik = 0; ik < count; ++ik)
        for (int il = 0; il < count; ++il) {
          const int kpi = ik * grid.stride - n / 2;
          const int kpj = il * grid.stride - n / 2;
          const int bi = (kpi + n) % n, bj = (kpj + n) % n;
          map.value4(ix, iy, ik, il) = dx * dx *
                                       std::polar(1.0, L * (xi[bi] + xi[bj])) *
                                       g[static_cast<std::size_t>(bi) * n + bj];
        }
    }
  return map;
}

SampledField sample_distribution(const LibraryDistribution& u, double half_width, int n) {
  const int d = distribution_dim(u);
  return std::visit(
      [&](const auto& v) -> SampledField {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Delta>) {
          throw std::invalid_argument("sample_distribution: delta is not samplable");
        } else if constexpr (std::is_same_v<T, PlaneWave>) {
          return SampledField::sample(d, half_width, n, [&](const Vec& x) {
            return std::polar(1.0, x.dot(v.freq));
          });
        } else if constexpr (std::is_same_v<T, Chirp>) {
          return SampledField::sample(d, half_width, n, [&](const Vec& x) {
            return std::polar(1.0, 0.5 * x.dot(v.B * x));
          });
        } else {
          return SampledField::sample(d, half_width, n, [&](const Vec& x) {
            const CVec xc = x.cast<cplx>();
            const cplx quad = (xc.transpose() * v.M * xc)(0);
            const cplx lin = (v.b.transpose() * xc)(0);  // bilinear <b, x>
            return v.amplitude * std::exp(cplx(0, 1) * (0.5 * quad + lin));
          });
        }
      },
      u);
}

}  // namespace phasefront
