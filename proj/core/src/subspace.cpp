#include "phasefront/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace phasefront {

SubspaceBasis SubspaceBasis::zero(int ambient) {
  if (ambient <= 0) throw std::invalid_argument("ambient dimension must be positive");
  return SubspaceBasis(ambient, Mat(ambient, 0));
}

SubspaceBasis SubspaceBasis::full(int ambient) {
  if (ambient <= 0) throw std::invalid_argument("ambient dimension must be positive");
  return SubspaceBasis(ambient, Mat::Identity(ambient, ambient));
}

SubspaceBasis SubspaceBasis::from_span(const Mat& vectors, double tol) {
  const int n = static_cast<int>(vectors.rows());
  if (n <= 0) throw std::invalid_argument("empty span matrix");
  if (vectors.cols() == 0) return zero(n);
  Eigen::JacobiSVD<Mat> svd(vectors, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = (sv.size() > 0 ? sv(0) : 0.0) * tol;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut && sv(i) > 0.0) ++rank;
  return SubspaceBasis(n, svd.matrixU().leftCols(rank));
}

SubspaceBasis SubspaceBasis::from_orthonormal(const Mat& basis, double tol) {
  const int n = static_cast<int>(basis.rows());
  const int k = static_cast<int>(basis.cols());
  if (k > 0) {
    const Mat gram = basis.transpose() * basis;
    if ((gram - Mat::Identity(k, k)).cwiseAbs().maxCoeff() > std::max(tol, 1e-10))
      throw std::invalid_argument("basis columns are not orthonormal");
  }
  return SubspaceBasis(n, basis);
}

Mat SubspaceBasis::projector() const { return basis_ * basis_.transpose(); }

Mat SubspaceBasis::complement_projector() const {
  return Mat::Identity(ambient_, ambient_) - projector();
}

bool SubspaceBasis::contains(const Vec& v, double tol) const {
  const double norm = v.norm();
  if (norm == 0.0) return true;
  return (v - basis_ * (basis_.transpose() * v)).norm() <= tol * norm;
}

bool SubspaceBasis::contains(const SubspaceBasis& other, double tol) const {
  if (other.dim() > dim()) return false;
  for (int j = 0; j < other.dim(); ++j)
    if (!contains(other.basis_.col(j), tol)) return false;
  return true;
}

SubspaceBasis nullspace(const Mat& A, double rel_tol) {
  const int cols = static_cast<int>(A.cols());
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = (sv.size() > 0 ? sv(0) : 0.0) * rel_tol;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut && sv(i) > 0.0) ++rank;
  return SubspaceBasis::from_orthonormal(svd.matrixV().rightCols(cols - rank));
}

CMat complex_nullspace(const CMat& A, double rel_tol) {
  const int cols = static_cast<int>(A.cols());
  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = (sv.size() > 0 ? sv(0) : 0.0) * rel_tol;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut && sv(i) > 0.0) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b, double tol) {
  if (a.ambient() != b.ambient())
    throw std::invalid_argument("subspace intersection: ambient mismatch");
  const int n = a.ambient();
  if (a.dim() == 0 || b.dim() == 0) return SubspaceBasis::zero(n);
  Mat stacked(2 * n, n);
  stacked.topRows(n) = a.complement_projector();
  stacked.bottomRows(n) = b.complement_projector();
  return nullspace(stacked, tol);
}

SubspaceBasis map_subspace(const Mat& A, const SubspaceBasis& s, double tol) {
  if (A.cols() != s.ambient())
    throw std::invalid_argument("map_subspace: dimension mismatch");
  return SubspaceBasis::from_span(A * s.basis(), tol);
}

std::vector<double> principal_angles(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient() != b.ambient())
    throw std::invalid_argument("principal_angles: ambient mismatch");
  const int k = std::min(a.dim(), b.dim());
  if (k == 0) return {};
  Eigen::JacobiSVD<Mat> svd(a.basis().transpose() * b.basis());
  std::vector<double> angles;
  angles.reserve(k);
  const auto& sv = svd.singularValues();
  // descending cosines -> ascending angles
  for (int i = 0; i < sv.size(); ++i)
    angles.push_back(std::acos(std::clamp(sv(i), -1.0, 1.0)));
  std::sort(angles.begin(), angles.end());
  return angles;
}

double subspace_gap(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.dim() != b.dim()) return M_PI / 2.0;
  if (a.dim() == 0) return 0.0;
  // sin-based residual form: accurate near zero angle, where the acos of a
  // near-unit cosine loses half the significant digits
  const Mat res_b = b.basis() - a.basis() * (a.basis().transpose() * b.basis());
  const Mat res_a = a.basis() - b.basis() * (b.basis().transpose() * a.basis());
  Eigen::JacobiSVD<Mat> sb(res_b), sa(res_a);
  const double s = std::max(sb.singularValues()(0), sa.singularValues()(0));
  return std::asin(std::clamp(s, 0.0, 1.0));
}

double angle_to_subspace(const Vec& v, const SubspaceBasis& s) {
  const double norm = v.norm();
  if (norm == 0.0) return 0.0;
  if (s.dim() == 0) return M_PI / 2.0;
  const Vec u = v / norm;
  const double resid = (u - s.basis() * (s.basis().transpose() * u)).norm();
  return std::asin(std::clamp(resid, 0.0, 1.0));
}

ConeSet ConeSet::exact(int ambient, std::vector<SubspaceBasis> subspaces, double prune_tol) {
  ConeSet c;
  c.kind_ = Kind::Exact;
  c.ambient_ = ambient;
  // Drop zero-dimensional members, then prune subspaces contained in another
  // member (mutual principal-angle check via contains()).
  std::vector<SubspaceBasis> kept;
  for (auto& s : subspaces) {
    if (s.ambient() != ambient)
      throw std::invalid_argument("ConeSet: member subspace has wrong ambient dimension");
    if (s.dim() > 0) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(),
            [](const SubspaceBasis& x, const SubspaceBasis& y) { return x.dim() > y.dim(); });
  for (auto& s : kept) {
    bool contained = false;
    for (const auto& t : c.subspaces_)
      if (t.contains(s, prune_tol)) { contained = true; break; }
    if (!contained) c.subspaces_.push_back(std::move(s));
  }
  return c;
}

ConeSet ConeSet::empirical(int ambient, std::vector<EmpiricalDirection> dirs) {
  ConeSet c;
  c.kind_ = Kind::Empirical;
  c.ambient_ = ambient;
  for (const auto& d : dirs) {
    if (d.direction.size() != ambient)
      throw std::invalid_argument("ConeSet: direction has wrong ambient dimension");
    if (std::abs(d.direction.norm() - 1.0) > 1e-10)
      throw std::invalid_argument("ConeSet: empirical direction is not unit-norm");
  }
  c.directions_ = std::move(dirs);
  return c;
}

bool ConeSet::empty() const {
  return kind_ == Kind::Exact ? subspaces_.empty() : directions_.empty();
}

const std::vector<SubspaceBasis>& ConeSet::subspaces() const {
  if (kind_ != Kind::Exact) throw std::logic_error("ConeSet: not an exact cone");
  return subspaces_;
}

const std::vector<EmpiricalDirection>& ConeSet::directions() const {
  if (kind_ != Kind::Empirical) throw std::logic_error("ConeSet: not an empirical cone");
  return directions_;
}

double ConeSet::angle_to(const Vec& direction) const {
  if (kind_ != Kind::Exact) throw std::logic_error("ConeSet::angle_to needs an exact cone");
  double best = M_PI / 2.0;
  for (const auto& s : subspaces_)
    best = std::min(best, angle_to_subspace(direction, s));
  return best;
}

nlohmann::json subspace_to_json(const SubspaceBasis& s) {
  nlohmann::json vectors = nlohmann::json::array();
  for (int j = 0; j < s.dim(); ++j) {
    nlohmann::json v = nlohmann::json::array();
    for (int i = 0; i < s.ambient(); ++i) v.push_back(s.basis()(i, j));
    vectors.push_back(v);
  }
  return nlohmann::json{{"ambient", s.ambient()}, {"vectors", vectors}};
}

SubspaceBasis subspace_from_json(const nlohmann::json& j) {
  const int n = j.at("ambient").get<int>();
  const auto& vectors = j.at("vectors");
  Mat span(n, vectors.size());
  int col = 0;
  for (const auto& v : vectors) {
    if (static_cast<int>(v.size()) != n)
      throw std::invalid_argument("subspace JSON: vector length != ambient");
    for (int i = 0; i < n; ++i) span(i, col) = v.at(i).get<double>();
    ++col;
  }
  return SubspaceBasis::from_span(span);
}

nlohmann::json ConeSet::to_json() const {
  nlohmann::json j;
  j["ambient"] = ambient_;
  if (kind_ == Kind::Exact) {
    j["kind"] = "exact";
    nlohmann::json bases = nlohmann::json::array();
    for (const auto& s : subspaces_) {
      nlohmann::json basis = nlohmann::json::array();
      for (int c = 0; c < s.dim(); ++c) {
        nlohmann::json v = nlohmann::json::array();
        for (int r = 0; r < s.ambient(); ++r) v.push_back(s.basis()(r, c));
        basis.push_back(v);
      }
      bases.push_back(basis);
    }
    j["bases"] = bases;
  } else {
    j["kind"] = "empirical";
    nlohmann::json dirs = nlohmann::json::array();
    for (const auto& d : directions_) {
      nlohmann::json theta = nlohmann::json::array();
      for (int i = 0; i < d.direction.size(); ++i) theta.push_back(d.direction(i));
      dirs.push_back({{"theta", theta},
                      {"rate", d.rate},
                      {"residual", d.residual},
                      {"reliable", d.reliable}});
    }
    j["directions"] = dirs;
  }
  return j;
}

ConeSet ConeSet::from_json(const nlohmann::json& j) {
  const int ambient = j.at("ambient").get<int>();
  const std::string kind = j.value("kind", "exact");
  if (kind == "exact") {
    std::vector<SubspaceBasis> subs;
    for (const auto& basis : j.at("bases")) {
      Mat span(ambient, basis.size());
      int col = 0;
      for (const auto& v : basis) {
        for (int i = 0; i < ambient; ++i) span(i, col) = v.at(i).get<double>();
        ++col;
      }
      subs.push_back(SubspaceBasis::from_span(span));
    }
    return ConeSet::exact(ambient, std::move(subs));
  }
  std::vector<EmpiricalDirection> dirs;
  for (const auto& d : j.at("directions")) {
    EmpiricalDirection e;
    const auto& theta = d.at("theta");
    e.direction = Vec(theta.size());
    for (int i = 0; i < e.direction.size(); ++i) e.direction(i) = theta.at(i).get<double>();
    e.rate = d.at("rate").get<double>();
    e.residual = d.value("residual", 0.0);
    e.reliable = d.value("reliable", true);
    dirs.push_back(std::move(e));
  }
  return ConeSet::empirical(ambient, std::move(dirs));
}

}  // namespace phasefront
