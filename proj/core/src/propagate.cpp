#include "phasefront/propagate.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "phasefront/expm.hpp"
#include "phasefront/fft.hpp"

namespace phasefront {

namespace {

constexpr double kCondLimit = 1e12;
constexpr int kMinCheckpointsPerUnitTime = 32;

struct Blocks {
  CMat A, B, C, D;
};

Blocks split_blocks(const CMat& T, int d) {
  return {T.topLeftCorner(d, d), T.topRightCorner(d, d), T.bottomLeftCorner(d, d),
          T.bottomRightCorner(d, d)};
}

double condition_number(const CMat& G) {
  Eigen::JacobiSVD<CMat> svd(G);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(sv.size() - 1);
}

cplx det_inv_sqrt_principal(const CMat& G, int& branch_events) {
  Eigen::ComplexEigenSolver<CMat> es(G);
  cplx det(1.0, 0.0);
  for (int i = 0; i < es.eigenvalues().size(); ++i) det *= es.eigenvalues()(i);
  // a step determinant left the right half-plane: branch-cut proximity
  if (det.real() < 0) ++branch_events;
  return 1.0 / std::sqrt(det);
}

// One attempt at the full propagation with a fixed subdivision; returns
// false if a step's graph denominator is too ill-conditioned.
bool run_graph_action(const GaussianChirpState& u0, const HamiltonMap& h, double t,
                      int n, GaussianPropagation& out) {
  const int d = h.d;
  const double dt = t / n;
  const CMat Qxxi = h.Q.topRightCorner(d, d);
  const CMat Qxixi = h.Q.bottomRightCorner(d, d);

  // Step propagators reused across all steps; quarter points feed the
  // Simpson rule for the <b, Q_xixi b> phase integral.
  const CMat T1 = expm(CMat(cplx(0, -2.0 * dt) * h.F));
  const CMat Tq = expm(CMat(cplx(0, -0.5 * dt) * h.F));
  const CMat Th = Tq * Tq;
  const CMat T3q = Th * Tq;
  const Blocks full = split_blocks(T1, d);
  const Blocks quarter = split_blocks(Tq, d);
  const Blocks half = split_blocks(Th, d);
  const Blocks threeq = split_blocks(T3q, d);

  GaussianChirpState state = u0;
  out.max_condition = 1.0;
  out.branch_events = 0;

  for (auto& term : state.terms) {
    CMat M = term.M;
    CVec b = term.b;
    cplx c = term.amplitude;
    for (int k = 0; k < n; ++k) {
      const CMat G = full.A + full.B * M;
      const double cond = condition_number(G);
      out.max_condition = std::max(out.max_condition, cond);
      if (cond > kCondLimit) return false;

      const bool has_b = b.cwiseAbs().maxCoeff() > 0;
      if (has_b) {
        auto bg_at = [&](const Blocks& blk) -> cplx {
          const CMat Gtau = blk.A + blk.B * M;
          const CVec btau = Gtau.transpose().partialPivLu().solve(b);
          return (btau.transpose() * Qxixi * btau)(0);
        };
        const cplx g0 = (b.transpose() * Qxixi * b)(0);
        const cplx g1 = bg_at(quarter);
        const cplx g2 = bg_at(half);
        const cplx g3 = bg_at(threeq);
        const CVec b_end = G.transpose().partialPivLu().solve(b);
        const cplx g4 = (b_end.transpose() * Qxixi * b_end)(0);
        const cplx integral = (dt / 12.0) * (g0 + 4.0 * g1 + 2.0 * g2 + 4.0 * g3 + g4);
        c *= std::exp(-integral);
        b = b_end;
      }

      // det(G_step) -> 1 as dt -> 0, so per-step principal roots compose to
      // the continuously tracked branch of det(A + B M0)^{-1/2}.
      c *= det_inv_sqrt_principal(G, out.branch_events);
      const CMat Mn = (full.C + full.D * M) * G.inverse();
      M = 0.5 * (Mn + Mn.transpose());
    }
    term.M = M;
    term.b = b;
    term.amplitude = c;
  }
  state.validate();
  out.state = std::move(state);
  out.t = t;
  out.checkpoints = n;
  return true;
}

}  // namespace

GaussianPropagation propagate_gaussian(const GaussianChirpState& u0,
                                       const HamiltonMap& h, double t,
                                       int n_checkpoints) {
  if (u0.d != h.d) throw std::invalid_argument("propagate_gaussian: dimension mismatch");
  if (t < 0) throw std::invalid_argument("propagate_gaussian: t must be nonnegative");
  u0.validate();

  GaussianPropagation out;
  if (t == 0.0) {
    out.state = u0;
    return out;
  }
  int n = std::max({n_checkpoints, 1,
                    static_cast<int>(std::ceil(kMinCheckpointsPerUnitTime * t))});
  for (int attempt = 0; attempt < 7; ++attempt, n *= 2) {
    if (run_graph_action(u0, h, t, n, out)) return out;
  }
  throw std::runtime_error(
      "propagate_gaussian: graph denominator stays ill-conditioned after "
      "refinement (caustic crossing), cond > 1e12");
}

SplitStepPropagation propagate_splitstep(const SampledField& f,
                                         const QuadraticHamiltonian& q, double t,
                                         int n_steps) {
  if (q.d != f.d) throw std::invalid_argument("propagate_splitstep: dimension mismatch");
  if (t < 0) throw std::invalid_argument("propagate_splitstep: t must be nonnegative");
  if (n_steps < 1) throw std::invalid_argument("propagate_splitstep: n_steps >= 1");
  if (q.Qxxi().cwiseAbs().maxCoeff() > 1e-14 || q.Qxix().cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument(
        "propagate_splitstep: cross-term Hamiltonians are not supported by the "
        "splitting engine; use the gaussian engine");

  SplitStepPropagation out;
  out.field = f;
  out.t = t;
  out.steps = n_steps;
  out.l2_history.push_back(f.l2_norm());
  if (t == 0.0) return out;

  const int n = f.n;
  const double dt = t / n_steps;
  const CMat Qxx = q.Qxx();
  const CMat Qxixi = q.Qxixi();
  const auto xi = fft::frequencies(n, f.half_width);

  if (f.d == 1) {
    std::vector<cplx> vmul(n), wmul(n);
    for (int i = 0; i < n; ++i) {
      const double x = f.coord(i);
      vmul[i] = std::exp(-0.5 * dt * Qxx(0, 0) * x * x);
      wmul[i] = std::exp(-dt * Qxixi(0, 0) * xi[i] * xi[i]);
    }
    auto& v = out.field.values;
    for (int s = 0; s < n_steps; ++s) {
      for (int i = 0; i < n; ++i) v[i] *= vmul[i];
      fft::forward(v);
      for (int i = 0; i < n; ++i) v[i] *= wmul[i];
      fft::inverse(v);
      for (int i = 0; i < n; ++i) v[i] *= vmul[i];
      out.l2_history.push_back(out.field.l2_norm());
    }
  } else {
    const std::size_t total = static_cast<std::size_t>(n) * n;
    std::vector<cplx> vmul(total), wmul(total);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec x(2);
        x << f.coord(i), f.coord(j);
        const cplx qx = (x.transpose().cast<cplx>() * Qxx * x.cast<cplx>())(0);
        Vec k(2);
        k << xi[i], xi[j];
        const cplx qk = (k.transpose().cast<cplx>() * Qxixi * k.cast<cplx>())(0);
        vmul[static_cast<std::size_t>(i) * n + j] = std::exp(-0.5 * dt * qx);
        wmul[static_cast<std::size_t>(i) * n + j] = std::exp(-dt * qk);
      }
    auto& v = out.field.values;
    for (int s = 0; s < n_steps; ++s) {
      for (std::size_t i = 0; i < total; ++i) v[i] *= vmul[i];
      fft::forward2(v, n, n);
      for (std::size_t i = 0; i < total; ++i) v[i] *= wmul[i];
      fft::inverse2(v, n, n);
      for (std::size_t i = 0; i < total; ++i) v[i] *= vmul[i];
      out.l2_history.push_back(out.field.l2_norm());
    }
  }

  if (out.field.spectral_tail() > 1e-8)
    throw std::runtime_error(
        "propagate_splitstep: propagated state is under-resolved on this grid "
        "(spectral tail above 1e-8)");
  return out;
}

SampledField propagate_metaplectic_1d(const SampledField& f, const Mat& chi) {
  if (f.d != 1) throw std::invalid_argument("propagate_metaplectic_1d: d must be 1");
  if (chi.rows() != 2 || chi.cols() != 2)
    throw std::invalid_argument("propagate_metaplectic_1d: chi must be 2x2");
  const double det = chi(0, 0) * chi(1, 1) - chi(0, 1) * chi(1, 0);
  if (std::abs(det - 1.0) > 1e-10)
    throw std::invalid_argument("propagate_metaplectic_1d: chi must have det 1");

  const double a = chi(0, 0), b = chi(0, 1), c = chi(1, 0), dd = chi(1, 1);
  const int n = f.n;
  const double L = f.half_width;
  const double dx = f.step();
  const double in_norm = f.l2_norm();
  SampledField out = SampledField::zeros(1, L, n);

  bool use_fourier_path = std::abs(b) > 1e-8;
  if (!use_fourier_path && b != 0.0)
    std::cerr << "propagate_metaplectic_1d: |B| below 1e-8, falling back to the "
                 "B=0 decomposition\n";

  if (use_fourier_path) {
    // chi = [[1,0],[d/b,1]] * [[0,b],[-1/b,0]] * [[1,0],[a/b,1]]:
    // chirp, scaled Fourier via a Bluestein chirp-convolution, chirp.
    const double w = dx * dx / (2.0 * b);
    const int nfft = 2 * n;
    std::vector<cplx> p(nfft, cplx(0, 0)), qk(nfft, cplx(0, 0));
    for (int j = 0; j < n; ++j) {
      const double y = f.coord(j);
      const cplx h = f.at(j) * std::polar(1.0, 0.5 * (a / b) * y * y);
      p[j] = h * std::polar(1.0, L * dx * j / b) * std::polar(1.0, -w * j * j);
    }
    for (int k = -(n - 1); k <= n - 1; ++k)
      qk[(k + nfft) % nfft] = std::polar(1.0, w * k * k);
    fft::forward(p);
    fft::forward(qk);
    for (int i = 0; i < nfft; ++i) p[i] *= qk[i];
    fft::inverse(p);

    const double amp = dx / std::sqrt(2.0 * M_PI * std::abs(b));
    for (int m = 0; m < n; ++m) {
      const double x = f.coord(m);
      const cplx outer = std::polar(1.0, 0.5 * (dd / b) * x * x) *
                         std::polar(1.0, -L * L / b) *
                         std::polar(1.0, L * dx * m / b) *
                         std::polar(1.0, -w * m * m);
      out.at(m) = amp * outer * p[m];
    }
  } else {
    // chi = [[1,0],[c/a,1]] * [[a,0],[0,1/a]]: dilation then chirp. The
    // dilated samples f(x/a) come from trigonometric interpolation.
    std::vector<cplx> hat = f.values;
    fft::forward(hat);
    const auto freqs = fft::frequencies(n, L);
    const double inv_n = 1.0 / n;
    for (int m = 0; m < n; ++m) {
      const double x = f.coord(m);
      const double xs = x / a;
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += hat[k] * std::polar(inv_n, freqs[k] * (xs + L));
      out.at(m) = std::polar(1.0 / std::sqrt(std::abs(a)), 0.5 * (c / a) * x * x) * acc;
    }
  }

  const double out_norm = out.l2_norm();
  if (out_norm > 0) {
    const double scale = in_norm / out_norm;
    for (auto& v : out.values) v *= scale;
  }
  return out;
}

ConeSet kernel_lagrangian(const HamiltonMap& h, double t, double tol) {
  const int d = h.d;
  const PropagatorMatrix prop = propagator_matrix(h, t);
  const SubspaceBasis ker = kernel_imag(prop, tol);
  if (ker.dim() == 0) return ConeSet::empty_exact(4 * d);
  const Mat re_t = prop.T.real();
  Mat span(4 * d, ker.dim());
  for (int j = 0; j < ker.dim(); ++j) {
    const Vec v = ker.basis().col(j);  // (y, eta)
    const Vec tv = re_t * v;           // (x, xi)
    Vec row(4 * d);
    row.segment(0, d) = tv.head(d);
    row.segment(d, d) = v.head(d);
    row.segment(2 * d, d) = tv.tail(d);
    row.segment(3 * d, d) = -v.tail(d);
    span.col(j) = row;
  }
  return ConeSet::exact(4 * d, {SubspaceBasis::from_span(span, tol)});
}

}  // namespace phasefront
