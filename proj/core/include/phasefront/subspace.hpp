#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "phasefront/types.hpp"

namespace phasefront {

/// Real linear subspace of R^n, carried as an orthonormal column basis.
/// k == 0 represents the zero subspace.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;

  static SubspaceBasis zero(int ambient);
  static SubspaceBasis full(int ambient);

  /// Orthonormalizes the columns of `vectors` (SVD, relative rank cut).
  static SubspaceBasis from_span(const Mat& vectors, double tol = kDefaultRankTol);

  /// Wraps a matrix that is already orthonormal; throws if it is not.
  static SubspaceBasis from_orthonormal(const Mat& basis, double tol = kDefaultRankTol);

  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const { return basis_; }

  Mat projector() const;             // B B^T
  Mat complement_projector() const;  // I - B B^T

  bool contains(const Vec& v, double tol = 1e-8) const;
  bool contains(const SubspaceBasis& other, double tol = 1e-8) const;

 private:
  SubspaceBasis(int ambient, Mat basis) : ambient_(ambient), basis_(std::move(basis)) {}
  int ambient_ = 0;
  Mat basis_;  // ambient_ x dim, orthonormal columns
};

/// Orthonormal basis of the nullspace of A, singular values cut at
/// rel_tol * sigma_max.
SubspaceBasis nullspace(const Mat& A, double rel_tol = kDefaultRankTol);
CMat complex_nullspace(const CMat& A, double rel_tol = kDefaultRankTol);

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b,
                        double tol = kDefaultRankTol);
SubspaceBasis map_subspace(const Mat& A, const SubspaceBasis& s,
                           double tol = kDefaultRankTol);

/// Principal angles (radians, ascending) between equal-dimension subspaces.
std::vector<double> principal_angles(const SubspaceBasis& a, const SubspaceBasis& b);

/// max principal angle when dims agree, pi/2 if they differ. Zero space vs
/// zero space compares equal (0).
double subspace_gap(const SubspaceBasis& a, const SubspaceBasis& b);

/// Angle (radians) between a unit vector and a subspace: asin |(I-P)v|.
double angle_to_subspace(const Vec& v, const SubspaceBasis& s);

/// One scored direction of an empirically estimated cone.
struct EmpiricalDirection {
  Vec direction;      // unit vector in R^ambient
  double rate = 0.0;  // fitted decay exponent
  double residual = 0.0;
  bool reliable = true;
};

/// Closed conic subset of R^ambient \ 0. Exact form: finite union of linear
/// subspaces. Empirical form: scored unit directions from a decay fit.
class ConeSet {
 public:
  enum class Kind { Exact, Empirical };

  static ConeSet exact(int ambient, std::vector<SubspaceBasis> subspaces,
                       double prune_tol = 1e-9);
  static ConeSet empty_exact(int ambient) { return exact(ambient, {}); }
  static ConeSet empirical(int ambient, std::vector<EmpiricalDirection> dirs);

  Kind kind() const { return kind_; }
  int ambient() const { return ambient_; }
  bool is_exact() const { return kind_ == Kind::Exact; }

  /// Empty means no subspace of positive dimension / no direction.
  bool empty() const;

  const std::vector<SubspaceBasis>& subspaces() const;
  const std::vector<EmpiricalDirection>& directions() const;

  /// Minimum angle (radians) from a unit direction to the union of the
  /// exact subspaces. pi/2 for an empty cone.
  double angle_to(const Vec& direction) const;

  nlohmann::json to_json() const;
  static ConeSet from_json(const nlohmann::json& j);

 private:
  Kind kind_ = Kind::Exact;
  int ambient_ = 0;
  std::vector<SubspaceBasis> subspaces_;
  std::vector<EmpiricalDirection> directions_;
};

nlohmann::json subspace_to_json(const SubspaceBasis& s);
SubspaceBasis subspace_from_json(const nlohmann::json& j);

}  // namespace phasefront
