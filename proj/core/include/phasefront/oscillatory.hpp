#pragma once

#include <nlohmann/json_fwd.hpp>

#include "phasefront/subspace.hpp"
#include "phasefront/types.hpp"

namespace phasefront {

/// Quadratic phase p(x, theta) = <(x,theta), P (x,theta)> of an oscillatory
/// integral u(x) = \int_{R^N} e^{i p(x,theta)} d theta. Valid phases have
/// Im P >= 0 and the theta-rows (P_theta_x  P_theta_theta) of full rank N.
struct QuadraticPhase {
  int d = 0;
  int N = 0;
  CMat P;  // (d+N) x (d+N), complex symmetric

  static QuadraticPhase create(int d, int N, CMat P);
  static QuadraticPhase from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  CMat Pxx() const { return P.topLeftCorner(d, d); }
  CMat Pxtheta() const { return P.topRightCorner(d, N); }
  CMat Pthetax() const { return P.bottomLeftCorner(N, d); }
  CMat Pthetatheta() const { return P.bottomRightCorner(N, N); }
};

struct PhaseDiagnostics {
  bool im_psd = false;          // condition (1)
  bool theta_rows_full = false; // condition (2)
  double min_eig_im = 0.0;      // margin for (1)
  double min_sv_theta = 0.0;    // margin for (2)
  bool valid() const { return im_psd && theta_rows_full; }
};

/// Pure diagnostic; never throws on condition failures.
PhaseDiagnostics validate_phase(const QuadraticPhase& p, double tol = kDefaultRankTol);

/// Reduced phase rho(x) + <L theta, x> with rho(x) = <R x, x>, R = R_r + i R_i
/// normalized so both Re R and Im R have ranges orthogonal to Ran L.
struct CanonicalPhase {
  int d = 0;
  int N = 0;       // remaining theta dimensions
  CMat R;          // d x d complex symmetric
  Mat L;           // d x N real, injective (empty when N = 0)
  cplx scale = 1.0;  // accumulated Gaussian factors; bookkeeping only

  Mat Rr() const { return R.real(); }
  Mat Ri() const { return R.imag(); }
};

/// Eliminates theta-directions on which P_theta_theta is nondegenerate, one
/// per pass, by completing the square against a real pivot direction and
/// integrating it out; then projects rho off Ran L. Throws if the phase is
/// invalid or the iteration cannot exhaust P_theta_theta.
CanonicalPhase reduce_canonical(const QuadraticPhase& p, double tol = kDefaultRankTol);

/// Complex Lagrangian lambda = { (x, p_x'(x,theta)) : p_theta'(x,theta) = 0 }
/// as an orthonormal 2d x d basis over C. Asserts dim = d and positivity
/// i sigma(conj X, X) >= 0 of the basis Gram matrix.
CMat lagrangian_of_phase(const QuadraticPhase& p, double tol = kDefaultRankTol);

/// Real points of a complex subspace: stacked Re/Im constraints, real nullspace.
SubspaceBasis real_points_of_complex_subspace(const CMat& orthonormal_basis,
                                              double tol = kDefaultRankTol);

/// Real points of the canonical Lagrangian:
///   { (x, 2 R_r x + L theta) : L^t x = 0, R_i x = 0, (x,theta) real }.
/// (On Ker L^t the normalized R_i-range is orthogonal to Ran L, so a real
/// fiber direction exists only where R_i x vanishes.)
ConeSet real_lagrangian_intersection(const CanonicalPhase& c,
                                     double tol = kDefaultRankTol);

/// Canonical-reduction route composed with the real intersection,
/// cross-checked against the direct Lagrangian route; throws logic_error if
/// the two disagree beyond principal angle 1e-8.
ConeSet predict_wf_oscillatory(const QuadraticPhase& p, double tol = kDefaultRankTol);

/// Wave front set of u(A x) for surjective A (d_src x n): the pullback
/// { (x, A^t xi) : (A x, xi) in cone } together with Ker A x {0}.
ConeSet wf_pullback_surjective(const ConeSet& cone, const Mat& A,
                               double tol = kDefaultRankTol);

/// Tensor-product bound: union over pairs (U_i or {0}) x (V_j or {0}),
/// interleaved into ((x', x''), (xi', xi'')) ordering, all-zero pair excluded.
ConeSet wf_tensor(const ConeSet& cone_u, const ConeSet& cone_v);

}  // namespace phasefront
