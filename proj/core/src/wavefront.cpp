#include "phasefront/wavefront.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace phasefront {

namespace {
constexpr double kMagnitudeFloor = 1e-300;
}

DecayProfile directional_decay(const StftEvaluator& V, const Vec& theta,
                               const std::vector<double>& radii, double s) {
  if (radii.size() < 8)
    throw std::invalid_argument("directional_decay: need at least 8 radii");
  if (std::abs(theta.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("directional_decay: theta must be unit-norm");
  if (s <= 0.5) throw std::invalid_argument("directional_decay: requires s > 1/2");

  DecayProfile p;
  p.direction = theta;
  p.s = s;
  p.r_min = radii.front();
  p.r_max = radii.back();

  std::vector<double> u, y;  // u = r^{1/s}, y = log|V|
  for (double r : radii) {
    const double mag = V.magnitude(Vec(r * theta));
    if (mag <= kMagnitudeFloor || !std::isfinite(mag)) break;  // truncate range
    u.push_back(std::pow(r, 1.0 / s));
    y.push_back(std::log(mag));
  }
  p.usable = static_cast<int>(u.size());
  if (p.usable < 4) {
    // Underflow means decay faster than anything we can fit: strongly regular.
    p.reliable = false;
    p.rate = std::numeric_limits<double>::infinity();
    return p;
  }

  const int m = p.usable;
  double su = 0, sy = 0, suu = 0, suy = 0;
  for (int i = 0; i < m; ++i) {
    su += u[i];
    sy += y[i];
    suu += u[i] * u[i];
    suy += u[i] * y[i];
  }
  const double denom = m * suu - su * su;
  const double slope = (m * suy - su * sy) / denom;
  p.rate = -slope;
  p.intercept = (sy - slope * su) / m;
  double rss = 0;
  for (int i = 0; i < m; ++i) {
    const double fit = p.intercept + slope * u[i];
    rss += (y[i] - fit) * (y[i] - fit);
  }
  p.residual = std::sqrt(rss / m);
  return p;
}

std::vector<double> log_spaced_radii(double r_min, double r_max, int count) {
  if (!(r_min > 0 && r_max > r_min) || count < 2)
    throw std::invalid_argument("log_spaced_radii: bad range");
  std::vector<double> out(count);
  const double ratio = std::log(r_max / r_min);
  for (int i = 0; i < count; ++i)
    out[i] = r_min * std::exp(ratio * i / (count - 1));
  return out;
}

std::vector<Vec> direction_grid(int phase_dim, int n_dirs) {
  std::vector<Vec> dirs;
  dirs.reserve(n_dirs);
  if (phase_dim == 2) {
    for (int k = 0; k < n_dirs; ++k) {
      const double a = 2.0 * M_PI * k / n_dirs;
      Vec v(2);
      v << std::cos(a), std::sin(a);
      dirs.push_back(v);
    }
    return dirs;
  }
  if (phase_dim == 4) {
    // Super-Fibonacci spiral on S^3 (Alexa, CVPR 2022): near-uniform
    // low-discrepancy covering.
    const double phi = std::sqrt(2.0);
    const double psi = 1.533751168755204288118041;
    for (int i = 0; i < n_dirs; ++i) {
      const double sf = (i + 0.5) / n_dirs;
      const double r = std::sqrt(sf), rc = std::sqrt(1.0 - sf);
      const double alpha = 2.0 * M_PI * i / phi;
      const double beta = 2.0 * M_PI * i / psi;
      Vec v(4);
      v << r * std::sin(alpha), r * std::cos(alpha), rc * std::sin(beta),
          rc * std::cos(beta);
      dirs.push_back(v);
    }
    return dirs;
  }
  throw std::invalid_argument("direction_grid: phase dim must be 2 or 4");
}

WfEstimate estimate_wf(const StftEvaluator& V, const WfEstimateParams& params_in) {
  WfEstimateParams params = params_in;
  if (params.radii.empty()) params.radii = log_spaced_radii(2.0, 8.0, 16);
  const int min_dirs = V.phase_dim == 2 ? 90 : 500;
  if (params.n_dirs < min_dirs)
    throw std::invalid_argument("estimate_wf: direction grid too coarse");

  WfEstimate est;
  est.params = params;
  std::vector<EmpiricalDirection> singular;
  for (const Vec& theta : direction_grid(V.phase_dim, params.n_dirs)) {
    DecayProfile p = directional_decay(V, theta, params.radii, params.s);
    if (p.reliable && p.rate < params.a_min)
      singular.push_back({theta, p.rate, p.residual, true});
    est.profiles.push_back(std::move(p));
  }
  est.singular = ConeSet::empirical(V.phase_dim, std::move(singular));
  return est;
}

void export_profiles_csv(const std::vector<DecayProfile>& profiles,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  if (profiles.empty()) return;
  const int dim = static_cast<int>(profiles.front().direction.size());
  for (int i = 0; i < dim; ++i) out << "theta" << i << ",";
  out << "rate,residual,usable,reliable\n";
  for (const auto& p : profiles) {
    for (int i = 0; i < dim; ++i) out << p.direction(i) << ",";
    out << p.rate << "," << p.residual << "," << p.usable << ","
        << (p.reliable ? 1 : 0) << "\n";
  }
}

WfReport check_inclusion(const ConeSet& estimated, const ConeSet& predicted,
                         double angular_tol_deg) {
  if (estimated.ambient() != predicted.ambient())
    throw std::invalid_argument("check_inclusion: ambient mismatch");
  if (!predicted.is_exact())
    throw std::invalid_argument("check_inclusion: prediction must be exact");

  WfReport rep{estimated, predicted, {}, 0.0, true, angular_tol_deg, {}, };
  const double to_deg = 180.0 / M_PI;
  for (const auto& dir : estimated.directions()) {
    const double margin = predicted.angle_to(dir.direction) * to_deg;
    rep.margins_deg.push_back(margin);
    rep.max_margin_deg = std::max(rep.max_margin_deg, margin);
    if (margin > angular_tol_deg) rep.holds = false;
  }

  // Sharpness diagnostic: predicted basis directions missed by the estimate.
  for (const auto& sub : predicted.subspaces())
    for (int c = 0; c < sub.dim(); ++c)
      for (double sign : {1.0, -1.0}) {
        const Vec b = sign * sub.basis().col(c);
        double best = M_PI / 2.0;
        for (const auto& dir : estimated.directions()) {
          const double cosang = std::clamp(b.dot(dir.direction), -1.0, 1.0);
          best = std::min(best, std::acos(cosang));
        }
        if (best * to_deg > angular_tol_deg) rep.unmatched_predicted.push_back(b);
      }
  return rep;
}

nlohmann::json WfReport::to_json() const {
  nlohmann::json j;
  j["holds"] = holds;
  j["angular_tol_deg"] = angular_tol_deg;
  j["max_margin_deg"] = max_margin_deg;
  j["n_singular"] = margins_deg.size();
  j["margins_deg"] = margins_deg;
  j["estimated"] = estimated.to_json();
  j["predicted"] = predicted.to_json();
  nlohmann::json unmatched = nlohmann::json::array();
  for (const auto& v : unmatched_predicted) {
    nlohmann::json vv = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) vv.push_back(v(i));
    unmatched.push_back(vv);
  }
  j["unmatched_predicted"] = unmatched;
  return j;
}

}  // namespace phasefront
