#include "phasefront/oscillatory.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "phasefront/hamiltonian.hpp"

namespace phasefront {

QuadraticPhase QuadraticPhase::create(int d, int N, CMat P) {
  if (d < 0 || N < 0 || d + N <= 0)
    throw std::invalid_argument("QuadraticPhase: need d, N >= 0 with d + N > 0");
  if (P.rows() != d + N || P.cols() != d + N)
    throw std::invalid_argument("QuadraticPhase: P must be (d+N) x (d+N)");
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("QuadraticPhase: P must be symmetric");
  QuadraticPhase p;
  p.d = d;
  p.N = N;
  p.P = std::move(P);
  return p;
}

QuadraticPhase QuadraticPhase::from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const int N = j.at("N").get<int>();
  const int n = d + N;
  CMat P(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      P(a, b) = cplx(j.at("P_re").at(a).at(b).get<double>(),
                     j.at("P_im").at(a).at(b).get<double>());
  return create(d, N, std::move(P));
}

nlohmann::json QuadraticPhase::to_json() const {
  const int n = d + N;
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int a = 0; a < n; ++a) {
    nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
    for (int b = 0; b < n; ++b) {
      rr.push_back(P(a, b).real());
      ri.push_back(P(a, b).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return nlohmann::json{{"d", d}, {"N", N}, {"P_re", re}, {"P_im", im}};
}

PhaseDiagnostics validate_phase(const QuadraticPhase& p, double tol) {
  PhaseDiagnostics diag;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (p.P.imag() + p.P.imag().transpose()));
  diag.min_eig_im = es.eigenvalues().minCoeff();
  diag.im_psd = diag.min_eig_im >= -1e-10;

  if (p.N == 0) {
    diag.theta_rows_full = true;
    diag.min_sv_theta = std::numeric_limits<double>::infinity();
    return diag;
  }
  CMat rows(p.N, p.d + p.N);
  rows << p.Pthetax(), p.Pthetatheta();
  Eigen::JacobiSVD<CMat> svd(rows);
  diag.min_sv_theta = svd.singularValues()(p.N - 1);
  diag.theta_rows_full =
      diag.min_sv_theta > tol * std::max(svd.singularValues()(0), 1e-300);
  return diag;
}

namespace {

/// Real unit pivot v maximizing |v^t C v| over the eigenvectors of Re C and
/// Im C. For complex symmetric C this is at least ||C||_2 / 2 > 0.
Vec real_pivot(const CMat& C, cplx& gamma) {
  const int n = static_cast<int>(C.rows());
  std::vector<Vec> candidates;
  Eigen::SelfAdjointEigenSolver<Mat> er(0.5 * (C.real() + C.real().transpose()));
  Eigen::SelfAdjointEigenSolver<Mat> ei(0.5 * (C.imag() + C.imag().transpose()));
  for (int i = 0; i < n; ++i) {
    candidates.push_back(er.eigenvectors().col(i));
    candidates.push_back(ei.eigenvectors().col(i));
  }
  double best = -1.0;
  Vec pick = candidates.front();
  for (const auto& v : candidates) {
    const cplx g = (v.transpose().cast<cplx>() * C * v.cast<cplx>())(0);
    if (std::abs(g) > best) {
      best = std::abs(g);
      pick = v;
      gamma = g;
    }
  }
  return pick;
}

/// Orthonormal basis of R^n with v as its last column.
Mat complete_basis_with_last(const Vec& v) {
  const int n = static_cast<int>(v.size());
  Eigen::HouseholderQR<Mat> qr(v);
  Mat Q = qr.householderQ();
  // first column of Q is +-v; move it last and fix the sign
  const double sign = Q.col(0).dot(v) >= 0 ? 1.0 : -1.0;
  Mat out(n, n);
  out.leftCols(n - 1) = Q.rightCols(n - 1);
  out.col(n - 1) = sign * Q.col(0);
  return out;
}

}  // namespace

CanonicalPhase reduce_canonical(const QuadraticPhase& p_in, double tol) {
  const PhaseDiagnostics diag = validate_phase(p_in, tol);
  if (!diag.valid())
    throw std::invalid_argument("reduce_canonical: phase violates condition (1) or (2)");

  const int d = p_in.d;
  int N = p_in.N;
  CMat P = p_in.P;
  cplx scale(1.0, 0.0);
  const double pnorm = std::max(P.cwiseAbs().maxCoeff(), 1e-300);

  int passes = 0;
  const int max_passes = d + p_in.N + 1;
  while (N > 0) {
    CMat C = P.bottomRightCorner(N, N);
    if (C.cwiseAbs().maxCoeff() <= tol * pnorm) {
      P.bottomRightCorner(N, N).setZero();
      break;
    }
    if (++passes > max_passes)
      throw std::runtime_error(
          "reduce_canonical: could not exhaust the theta-quadratic block; "
          "condition (2) likely fails within tolerance");

    cplx gamma;
    const Vec v = real_pivot(C, gamma);
    // theta = T theta~, pivot direction last
    const Mat T = complete_basis_with_last(v);
    Mat S = Mat::Identity(d + N, d + N);
    S.bottomRightCorner(N, N) = T;
    P = S.transpose().cast<cplx>() * P * S.cast<cplx>();

    // p = p~(x, w) + 2 tau <r, (x,w)> + gamma tau^2; integrate tau out.
    const int m = d + N - 1;
    const CVec r = P.col(m).head(m);
    CMat reduced = P.topLeftCorner(m, m);
    reduced -= (r * r.transpose()) / gamma;
    // Fresnel factor \int e^{i gamma tau^2} d tau, principal branch.
    scale *= std::sqrt(M_PI / (cplx(0, -1) * gamma));
    P = 0.5 * (reduced + reduced.transpose());
    --N;
  }

  CanonicalPhase out;
  out.d = d;
  out.N = N;
  out.scale = scale;

  CMat R = P.topLeftCorner(d, d);
  if (N > 0) {
    const CMat Lc = 2.0 * P.topRightCorner(d, N);
    if (Lc.imag().cwiseAbs().maxCoeff() > std::sqrt(tol) * pnorm)
      throw std::runtime_error(
          "reduce_canonical: reduced linear coupling is not real; positivity "
          "was lost during reduction");
    out.L = Lc.real();
    Eigen::JacobiSVD<Mat> svd(out.L);
    if (svd.singularValues()(N - 1) <= tol * std::max(svd.singularValues()(0), 1e-300))
      throw std::runtime_error("reduce_canonical: reduced L is rank-deficient");
    // rho is determined on Ker L^t only; project both parts of R off Ran L.
    const Mat proj =
        Mat::Identity(d, d) - out.L * (out.L.transpose() * out.L).inverse() * out.L.transpose();
    R = proj.cast<cplx>() * R * proj.cast<cplx>();
  } else {
    out.L = Mat(d, 0);
  }
  out.R = 0.5 * (R + R.transpose());

  Eigen::SelfAdjointEigenSolver<Mat> ri(0.5 * (out.R.imag() + out.R.imag().transpose()));
  if (ri.eigenvalues().minCoeff() < -1e-8)
    throw std::runtime_error("reduce_canonical: reduced Im rho lost positivity");
  return out;
}

CMat lagrangian_of_phase(const QuadraticPhase& p, double tol) {
  const PhaseDiagnostics diag = validate_phase(p, tol);
  if (!diag.valid())
    throw std::invalid_argument("lagrangian_of_phase: invalid phase");
  const int d = p.d, N = p.N;

  CMat kernel;  // (d+N) x d basis of { p_theta' = 0 }
  if (N == 0) {
    kernel = CMat::Identity(d, d);
  } else {
    CMat rows(N, d + N);
    rows << p.Pthetax(), p.Pthetatheta();
    kernel = complex_nullspace(rows, tol);
    if (kernel.cols() != d)
      throw std::runtime_error("lagrangian_of_phase: theta-critical set has wrong dimension");
  }

  CMat span(2 * d, kernel.cols());
  for (int j = 0; j < kernel.cols(); ++j) {
    const CVec x = kernel.col(j).head(d);
    const CVec th = kernel.col(j).tail(N);
    span.col(j).head(d) = x;
    span.col(j).tail(d) = 2.0 * (p.Pxx() * x + p.Pxtheta() * th);
  }

  // Orthonormalize over C and check dim = d.
  Eigen::JacobiSVD<CMat> svd(span, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = sv(0) * tol;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  if (rank != d)
    throw std::runtime_error("lagrangian_of_phase: Lagrangian dimension != d");
  CMat basis = svd.matrixU().leftCols(d);

  // Positivity of i sigma(conj X, X) on the basis Gram matrix.
  const CMat J = symplectic_form_matrix(d).cast<cplx>();
  const CMat G = cplx(0, 1) * (basis.adjoint() * J.transpose() * basis);
  if ((G - G.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::runtime_error("lagrangian_of_phase: positivity Gram matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (G + G.adjoint()));
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw std::runtime_error("lagrangian_of_phase: Lagrangian is not positive");
  return basis;
}

SubspaceBasis real_points_of_complex_subspace(const CMat& basis, double tol) {
  const int n = static_cast<int>(basis.rows());
  const CMat proj_out = CMat::Identity(n, n) - basis * basis.adjoint();
  Mat constraints(2 * n, n);
  constraints.topRows(n) = proj_out.real();
  constraints.bottomRows(n) = proj_out.imag();
  return nullspace(constraints, tol);
}

ConeSet real_lagrangian_intersection(const CanonicalPhase& c, double tol) {
  const int d = c.d, N = c.N;
  // x ranges over Ker L^t with R_i x = 0; the fiber contributes Ran L.
  Mat constraints(N + d, d);
  if (N > 0) constraints.topRows(N) = c.L.transpose();
  constraints.bottomRows(d) = c.Ri();
  const SubspaceBasis xs = nullspace(constraints, tol);

  Mat span(2 * d, xs.dim() + N);
  for (int j = 0; j < xs.dim(); ++j) {
    const Vec x = xs.basis().col(j);
    span.col(j).head(d) = x;
    span.col(j).tail(d) = 2.0 * c.Rr() * x;
  }
  for (int j = 0; j < N; ++j) {
    span.col(xs.dim() + j).head(d).setZero();
    span.col(xs.dim() + j).tail(d) = c.L.col(j);
  }
  const SubspaceBasis sub = SubspaceBasis::from_span(span, tol);
  if (sub.dim() == 0) return ConeSet::empty_exact(2 * d);
  return ConeSet::exact(2 * d, {sub});
}

ConeSet predict_wf_oscillatory(const QuadraticPhase& p, double tol) {
  const ConeSet canonical = real_lagrangian_intersection(reduce_canonical(p, tol), tol);
  const SubspaceBasis direct =
      real_points_of_complex_subspace(lagrangian_of_phase(p, tol), tol);
  const ConeSet direct_cone =
      direct.dim() == 0 ? ConeSet::empty_exact(2 * p.d)
                        : ConeSet::exact(2 * p.d, {direct});

  const SubspaceBasis a = canonical.empty() ? SubspaceBasis::zero(2 * p.d)
                                            : canonical.subspaces().front();
  const SubspaceBasis b = direct_cone.empty() ? SubspaceBasis::zero(2 * p.d)
                                              : direct_cone.subspaces().front();
  if (subspace_gap(a, b) > 1e-8)
    throw std::logic_error(
        "predict_wf_oscillatory: canonical and direct Lagrangian routes disagree");
  return canonical;
}

ConeSet wf_pullback_surjective(const ConeSet& cone, const Mat& A, double tol) {
  if (!cone.is_exact())
    throw std::invalid_argument("wf_pullback_surjective: exact cone required");
  const int d_src = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (cone.ambient() != 2 * d_src)
    throw std::invalid_argument("wf_pullback_surjective: cone ambient != 2*rows(A)");
  Eigen::JacobiSVD<Mat> svd(A);
  if (d_src == 0 || n < d_src ||
      svd.singularValues()(d_src - 1) <= tol * std::max(svd.singularValues()(0), 1e-300))
    throw std::invalid_argument("wf_pullback_surjective: A must be surjective");

  std::vector<SubspaceBasis> out;
  // { (x, A^t xi) : (A x, xi) in W }, solved per member subspace.
  Mat embed(2 * d_src, n + d_src);
  embed.setZero();
  embed.topLeftCorner(d_src, n) = A;
  embed.bottomRightCorner(d_src, d_src) = Mat::Identity(d_src, d_src);

  Mat push(2 * n, n + d_src);
  push.setZero();
  push.topLeftCorner(n, n) = Mat::Identity(n, n);
  push.bottomRightCorner(n, d_src) = A.transpose();

  for (const auto& w : cone.subspaces()) {
    const Mat constraints = w.complement_projector() * embed;
    const SubspaceBasis sol = nullspace(constraints, tol);
    if (sol.dim() == 0) continue;
    const SubspaceBasis mapped = map_subspace(push, sol, tol);
    if (mapped.dim() > 0) out.push_back(mapped);
  }

  // (Ker A \ 0) x {0}
  const SubspaceBasis ker = nullspace(A, tol);
  if (ker.dim() > 0) {
    Mat span = Mat::Zero(2 * n, ker.dim());
    span.topRows(n) = ker.basis();
    out.push_back(SubspaceBasis::from_span(span, tol));
  }
  return ConeSet::exact(2 * n, std::move(out));
}

ConeSet wf_tensor(const ConeSet& cone_u, const ConeSet& cone_v) {
  if (!cone_u.is_exact() || !cone_v.is_exact())
    throw std::invalid_argument("wf_tensor: exact cones required");
  const int m = cone_u.ambient() / 2;
  const int n = cone_v.ambient() / 2;
  const int amb = 2 * (m + n);

  auto embed_u = [&](const SubspaceBasis& s) {
    Mat span = Mat::Zero(amb, s.dim());
    span.topRows(m) = s.basis().topRows(m);
    span.middleRows(m + n, m) = s.basis().bottomRows(m);
    return span;
  };
  auto embed_v = [&](const SubspaceBasis& s) {
    Mat span = Mat::Zero(amb, s.dim());
    span.middleRows(m, n) = s.basis().topRows(n);
    span.bottomRows(n) = s.basis().bottomRows(n);
    return span;
  };

  std::vector<SubspaceBasis> out;
  const auto& us = cone_u.subspaces();
  const auto& vs = cone_v.subspaces();
  // pairs (U_i, V_j), (U_i, {0}), ({0}, V_j); ({0}, {0}) excluded
  for (const auto& u : us)
    for (const auto& v : vs) {
      Mat span(amb, u.dim() + v.dim());
      span.leftCols(u.dim()) = embed_u(u);
      span.rightCols(v.dim()) = embed_v(v);
      out.push_back(SubspaceBasis::from_span(span));
    }
  for (const auto& u : us) out.push_back(SubspaceBasis::from_span(embed_u(u)));
  for (const auto& v : vs) out.push_back(SubspaceBasis::from_span(embed_v(v)));
  return ConeSet::exact(amb, std::move(out));
}

}  // namespace phasefront
