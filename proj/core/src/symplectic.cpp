#include "phasefront/symplectic.hpp"

#include <cmath>
#include <stdexcept>

#include "phasefront/expm.hpp"

namespace phasefront {

SubspaceBasis singular_space(const HamiltonMap& h, double tol) {
  if (tol <= 0) throw std::invalid_argument("singular_space: tol must be positive");
  const int n = 2 * h.d;
  const Mat re_f = h.F.real();
  const Mat im_f = h.F.imag();
  Mat stacked(n * n, n);
  Mat power = Mat::Identity(n, n);  // (Im F)^j
  for (int j = 0; j < n; ++j) {
    stacked.middleRows(j * n, n) = re_f * power;
    power = im_f * power;
  }
  return nullspace(stacked, tol);
}

PropagatorMatrix propagator_matrix(const HamiltonMap& h, double t) {
  if (t < 0) throw std::invalid_argument("propagator_matrix: t must be nonnegative");
  PropagatorMatrix p;
  p.d = h.d;
  p.t = t;
  if (t == 0.0) {
    p.T = CMat::Identity(2 * h.d, 2 * h.d);
  } else {
    p.T = expm(CMat(cplx(0, -2.0 * t) * h.F));
  }
  return p;
}

PositivityReport check_positive_symplectic(const CMat& T, double tol) {
  const int n = static_cast<int>(T.rows());
  if (T.cols() != n || n % 2 != 0)
    throw std::invalid_argument("check_positive_symplectic: T must be square 2d x 2d");
  const int d = n / 2;
  const Mat J = symplectic_form_matrix(d);

  PositivityReport rep;
  rep.symplectic_defect = (T.transpose() * J * T - J).cwiseAbs().maxCoeff();
  rep.is_symplectic = rep.symplectic_defect <= tol;

  // sigma(X, Y) = <J X, Y> = X^t J^t Y, extended bilinearly to C^2d.
  // i( sigma(conj(TX), TX) - sigma(conj X, X) ) = X^H G X with
  // G = i (T^H J^t T - J^t).
  const CMat Jc = J.cast<cplx>();
  const CMat G = cplx(0, 1) * (T.adjoint() * Jc.transpose() * T - Jc.transpose());
  rep.hermitian_defect = (G - G.adjoint()).cwiseAbs().maxCoeff();
  rep.gram_hermitian = rep.hermitian_defect <= tol * std::max(1.0, G.cwiseAbs().maxCoeff());
  if (!rep.gram_hermitian) {
    rep.is_positive = false;
    rep.min_eig = std::nan("");
    return rep;
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (G + G.adjoint()));
  rep.min_eig = es.eigenvalues().minCoeff();
  rep.is_positive = rep.min_eig >= -tol;
  return rep;
}

SubspaceBasis kernel_imag(const PropagatorMatrix& p, double tol) {
  const Mat im_t = p.T.imag();
  if (im_t.cwiseAbs().maxCoeff() == 0.0) return SubspaceBasis::full(2 * p.d);
  return nullspace(im_t, tol);
}

PropagatedCones predict_wf_propagated(const HamiltonMap& h, double t,
                                      const ConeSet& cone, double tol) {
  if (!cone.is_exact())
    throw std::invalid_argument("predict_wf_propagated: exact cone required");
  if (cone.ambient() != 2 * h.d)
    throw std::invalid_argument("predict_wf_propagated: cone ambient != 2d");
  if (t <= 0) throw std::invalid_argument("predict_wf_propagated: t must be positive");

  const SubspaceBasis S = singular_space(h, tol);
  const Mat flow = expm(Mat(2.0 * t * h.F.imag()));

  const PropagatorMatrix prop = propagator_matrix(h, t);
  const SubspaceBasis ker_im = kernel_imag(prop, tol);
  const Mat re_t = prop.T.real();

  std::vector<SubspaceBasis> sharp, coarse;
  for (const auto& w : cone.subspaces()) {
    const SubspaceBasis ws = intersect(w, S, tol);
    if (ws.dim() > 0) {
      const SubspaceBasis moved = map_subspace(flow, ws, tol);
      const SubspaceBasis clipped = intersect(moved, S, tol);
      if (clipped.dim() > 0) sharp.push_back(clipped);
    }
    // On Ker Im T the complex propagator takes real values, so mapping
    // through Re T is the honest image in R^2d.
    const SubspaceBasis wk = intersect(w, ker_im, tol);
    if (wk.dim() > 0) {
      const SubspaceBasis moved = map_subspace(re_t, wk, tol);
      if (moved.dim() > 0) coarse.push_back(moved);
    }
  }
  PropagatedCones out{ConeSet::exact(2 * h.d, std::move(sharp)),
                      ConeSet::exact(2 * h.d, std::move(coarse))};
  return out;
}

ConeSet compose_relation(const ConeSet& relation, const ConeSet& cone, double tol) {
  if (!relation.is_exact() || !cone.is_exact())
    throw std::invalid_argument("compose_relation: exact cones required");
  if (relation.ambient() != 2 * cone.ambient())
    throw std::invalid_argument("compose_relation: relation ambient must be twice the cone's");
  const int n2 = cone.ambient();   // 2d
  const int d = n2 / 2;
  const int n4 = relation.ambient();

  // Solve, per (relation, cone) subspace pair, for z = (x, y, xi, eta) with
  // (x, y, xi, -eta) in the relation subspace and (y, eta) in the cone
  // subspace; project the solutions onto (x, xi).
  Mat flip = Mat::Identity(n4, n4);
  flip.bottomRightCorner(d, d) = -Mat::Identity(d, d);

  Mat pick_in(n2, n4);   // z -> (y, eta)
  pick_in.setZero();
  pick_in.block(0, d, d, d) = Mat::Identity(d, d);
  pick_in.block(d, 3 * d, d, d) = Mat::Identity(d, d);

  Mat pick_out(n2, n4);  // z -> (x, xi)
  pick_out.setZero();
  pick_out.block(0, 0, d, d) = Mat::Identity(d, d);
  pick_out.block(d, 2 * d, d, d) = Mat::Identity(d, d);

  std::vector<SubspaceBasis> out;
  for (const auto& rel : relation.subspaces()) {
    for (const auto& w : cone.subspaces()) {
      Mat constraints(n4 + n2, n4);
      constraints.topRows(n4) = rel.complement_projector() * flip;
      constraints.bottomRows(n2) = w.complement_projector() * pick_in;
      const SubspaceBasis sol = nullspace(constraints, tol);
      if (sol.dim() == 0) continue;
      const SubspaceBasis proj = map_subspace(pick_out, sol, tol);
      if (proj.dim() > 0) out.push_back(proj);
    }
  }
  return ConeSet::exact(n2, std::move(out));
}

ConeSet twisted_graph_relation(const Mat& T, double tol) {
  const int n2 = static_cast<int>(T.rows());
  if (T.cols() != n2 || n2 % 2 != 0)
    throw std::invalid_argument("twisted_graph_relation: T must be square 2d x 2d");
  const int d = n2 / 2;
  Mat span(2 * n2, n2);
  for (int j = 0; j < n2; ++j) {
    const Vec z = Vec::Unit(n2, j);
    const Vec tz = T * z;
    Vec row(2 * n2);
    row.segment(0, d) = tz.head(d);        // x
    row.segment(d, d) = z.head(d);         // y
    row.segment(2 * d, d) = tz.tail(d);    // xi
    row.segment(3 * d, d) = -z.tail(d);    // -eta
    span.col(j) = row;
  }
  return ConeSet::exact(2 * n2, {SubspaceBasis::from_span(span, tol)});
}

}  // namespace phasefront
