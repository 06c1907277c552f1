#pragma once

#include "phasefront/hamiltonian.hpp"
#include "phasefront/subspace.hpp"
#include "phasefront/types.hpp"

namespace phasefront {

/// T = exp(-2 i t F), the matrix implementing the propagator at time t.
struct PropagatorMatrix {
  int d = 0;
  double t = 0.0;
  CMat T;
};

/// Orthonormal basis of the singular space
///   S = ( intersect_{j=0}^{2d-1} Ker[Re F (Im F)^j] ) over R^2d,
/// kernels cut at tol * sigma_max of the stacked constraint matrix.
SubspaceBasis singular_space(const HamiltonMap& h, double tol = kDefaultRankTol);

/// exp(-2 i t F) for t >= 0.
PropagatorMatrix propagator_matrix(const HamiltonMap& h, double t);

struct PositivityReport {
  bool is_symplectic = false;
  bool is_positive = false;
  double min_eig = 0.0;          // smallest eigenvalue of the positivity form
  double symplectic_defect = 0.0;  // max |T^t J T - J|
  double hermitian_defect = 0.0;   // max |G - G^H|, should be ~0
  bool gram_hermitian = true;      // false signals an internal/index error
};

/// Tests T for complex symplecticity and for positivity of the Hermitian
/// form X -> i( sigma(conj(TX), TX) - sigma(conj X, X) ) on C^2d.
PositivityReport check_positive_symplectic(const CMat& T, double tol = 1e-8);

/// Real kernel of Im T, via SVD thresholding.
SubspaceBasis kernel_imag(const PropagatorMatrix& p, double tol = kDefaultRankTol);

struct PropagatedCones {
  ConeSet sharp;   // ( e^{2t Im F} (cone ∩ S) ) ∩ S
  ConeSet coarse;  // Re(e^{-2itF}) ( cone ∩ Ker Im e^{-2itF} )
};

/// Both propagated-cone predictions for an exact input cone at time t > 0.
/// Rejects empirical cones.
PropagatedCones predict_wf_propagated(const HamiltonMap& h, double t,
                                      const ConeSet& cone, double tol = kDefaultRankTol);

/// Composition of a kernel relation (ambient 4d, points stored as
/// (x, y, xi, -eta)) with a cone in R^2d:
///   { (x, xi) : exists (y, eta) in cone with (x, y, xi, -eta) in relation }.
ConeSet compose_relation(const ConeSet& relation, const ConeSet& cone,
                         double tol = kDefaultRankTol);

/// Twisted-graph relation of an invertible matrix T acting on R^2d:
/// { (T z, z with eta sign flipped) }. Used by tests and the relation engine.
ConeSet twisted_graph_relation(const Mat& T, double tol = kDefaultRankTol);

}  // namespace phasefront
