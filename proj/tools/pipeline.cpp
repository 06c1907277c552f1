#include "pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "phasefront/oscillatory.hpp"
#include "phasefront/propagate.hpp"
#include "phasefront/seminorms.hpp"
#include "phasefront/symplectic.hpp"

namespace phasefront::cli {

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

Vec json_vec(const nlohmann::json& j) {
  Vec v(j.size());
  for (int i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

Mat json_mat(const nlohmann::json& j) {
  const int r = static_cast<int>(j.size());
  const int c = static_cast<int>(j.at(0).size());
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) m(i, k) = j.at(i).at(k).get<double>();
  return m;
}

std::vector<double> estimator_radii(const EstimatorOptions& est, double clamp_to) {
  const double r_max = std::min(est.r_max, clamp_to);
  return log_spaced_radii(est.r_min, r_max, est.radii_count);
}

WfEstimateParams estimator_params(const EstimatorOptions& est, double radius_clamp) {
  WfEstimateParams p;
  p.s = est.s;
  p.a_min = est.a_min;
  p.n_dirs = est.n_dirs;
  p.radii = estimator_radii(est, radius_clamp);
  return p;
}

}  // namespace

Scenario Scenario::load(const std::string& path) {
  const nlohmann::json j = read_json(path);
  Scenario sc;
  if (j.contains("Q")) sc.Q = QuadraticHamiltonian::from_json(j.at("Q"));
  if (j.contains("t")) {
    double prev = -1.0;
    for (const auto& t : j.at("t")) {
      const double tv = t.get<double>();
      if (tv < 0 || tv < prev)
        throw std::invalid_argument("scenario: time list must be nonnegative ascending");
      sc.times.push_back(tv);
      prev = tv;
    }
  }
  if (j.contains("initial")) sc.initial = j.at("initial");
  sc.engine = j.value("engine", "auto");
  if (sc.Q && sc.Q->d == 2) {  // d = 2 grid defaults
    sc.grid.n = 256;
    sc.grid.half_width = 10.0;
  }
  if (j.contains("grid")) {
    sc.grid.n = j.at("grid").value("n", sc.grid.n);
    sc.grid.half_width = j.at("grid").value("L", sc.grid.half_width);
  }
  if (j.contains("estimator")) {
    const auto& e = j.at("estimator");
    sc.estimator.s = e.value("s", sc.estimator.s);
    sc.estimator.a_min = e.value("a_min", sc.estimator.a_min);
    sc.estimator.n_dirs = e.value("n_dirs", sc.estimator.n_dirs);
    if (e.contains("radii")) {
      const auto& r = e.at("radii");
      sc.estimator.r_min = r.value("r_min", sc.estimator.r_min);
      sc.estimator.r_max = r.value("r_max", sc.estimator.r_max);
      sc.estimator.radii_count = r.value("count", sc.estimator.radii_count);
    }
  }
  if (sc.estimator.s <= 0.5)
    throw std::invalid_argument("scenario: estimator s must exceed 1/2");
  sc.angular_tol_deg = j.value("angular_tol_deg", sc.angular_tol_deg);
  if (j.contains("initial_cone"))
    sc.initial_cone_override = ConeSet::from_json(j.at("initial_cone"));
  if (j.contains("seminorms")) sc.seminorms = j.at("seminorms");
  sc.seed = j.value("seed", 0L);
  return sc;
}

bool initial_is_sampled(const Scenario& sc) {
  return sc.initial.value("kind", "") == "sampled";
}

SampledField initial_sampled_field(const Scenario& sc) {
  if (!initial_is_sampled(sc))
    throw std::invalid_argument("initial data is not a sampled field");
  return SampledField::load(sc.initial.at("json").get<std::string>(),
                            sc.initial.at("csv").get<std::string>());
}

ConeSet initial_cone(const Scenario& sc) {
  if (sc.initial_cone_override) return *sc.initial_cone_override;
  const std::string kind = sc.initial.value("kind", "");
  if (kind == "cone") return ConeSet::from_json(sc.initial);
  if (kind == "delta" || kind == "plane_wave") {
    const Vec v = json_vec(sc.initial.at(kind == "delta" ? "center" : "freq"));
    const int d = static_cast<int>(v.size());
    Mat span = Mat::Zero(2 * d, d);
    if (kind == "delta") span.bottomRows(d) = Mat::Identity(d, d);  // {0} x R^d
    else span.topRows(d) = Mat::Identity(d, d);                     // R^d x {0}
    return ConeSet::exact(2 * d, {SubspaceBasis::from_span(span)});
  }
  if (kind == "chirp") {
    const Mat B = json_mat(sc.initial.at("B"));
    const int d = static_cast<int>(B.rows());
    Mat span(2 * d, d);
    span.topRows(d) = Mat::Identity(d, d);
    span.bottomRows(d) = B;
    return ConeSet::exact(2 * d, {SubspaceBasis::from_span(span)});
  }
  if (kind == "gaussian_chirp") {
    const GaussianChirpState st = GaussianChirpState::from_json(sc.initial);
    // per term: { (x, Re M x) : Im M x = 0 }; phase-space shifts from b do
    // not move the wave front set
    std::vector<SubspaceBasis> subs;
    for (const auto& t : st.terms) {
      const SubspaceBasis ker = nullspace(t.M.imag());
      if (ker.dim() == 0) continue;
      Mat span(2 * st.d, ker.dim());
      span.topRows(st.d) = ker.basis();
      span.bottomRows(st.d) = t.M.real() * ker.basis();
      subs.push_back(SubspaceBasis::from_span(span));
    }
    return ConeSet::exact(2 * st.d, std::move(subs));
  }
  throw std::invalid_argument(
      "initial wave front set must be given exactly (library distribution or "
      "explicit cone); got kind='" + kind + "'");
}

InitialState initial_gaussian_state(const Scenario& sc) {
  const std::string kind = sc.initial.value("kind", "");
  InitialState out;
  if (kind == "delta") {
    const Vec x0 = json_vec(sc.initial.at("center"));
    const int d = static_cast<int>(x0.size());
    const double sigma = 4.0 * (2.0 * sc.grid.half_width / sc.grid.n);
    const double s2 = sigma * sigma;
    const CMat M = cplx(0, 1) / s2 * CMat::Identity(d, d);
    const CVec b = cplx(0, -1) / s2 * x0.cast<cplx>();
    const cplx amp = std::exp(-0.5 * x0.squaredNorm() / s2);
    out.state = GaussianChirpState::single(amp, M, b);
    out.delta_approximated = true;
    out.sigma = sigma;
    return out;
  }
  if (kind == "plane_wave") {
    const Vec xi0 = json_vec(sc.initial.at("freq"));
    const int d = static_cast<int>(xi0.size());
    out.state = GaussianChirpState::single(1.0, CMat::Zero(d, d), xi0.cast<cplx>());
    return out;
  }
  if (kind == "chirp") {
    const Mat B = json_mat(sc.initial.at("B"));
    const int d = static_cast<int>(B.rows());
    out.state = GaussianChirpState::single(1.0, B.cast<cplx>(), CVec::Zero(d));
    return out;
  }
  if (kind == "gaussian_chirp") {
    out.state = GaussianChirpState::from_json(sc.initial);
    return out;
  }
  throw std::invalid_argument("initial data of kind '" + kind +
                              "' has no Gaussian-chirp form");
}

int cmd_predict(const Scenario& sc, const std::string& out_dir) {
  if (!sc.Q) throw std::invalid_argument("predict: scenario needs a Hamiltonian Q");
  const HamiltonMap F = hamilton_map(*sc.Q);
  const ConeSet cone = initial_cone(sc);
  const SubspaceBasis S = singular_space(F);

  nlohmann::json report;
  report["d"] = sc.Q->d;
  report["seed"] = sc.seed;
  report["S"] = subspace_to_json(S);
  report["input_cone"] = cone.to_json();
  nlohmann::json per_t = nlohmann::json::array();
  for (double t : sc.times) {
    nlohmann::json entry;
    entry["t"] = t;
    if (t == 0.0) {
      // T = I: report the input unchanged
      entry["sharp"] = cone.to_json();
      entry["coarse"] = cone.to_json();
      entry["kernel_imag"] = subspace_to_json(SubspaceBasis::full(2 * sc.Q->d));
    } else {
      const PropagatedCones pred = predict_wf_propagated(F, t, cone);
      entry["kernel_imag"] = subspace_to_json(kernel_imag(propagator_matrix(F, t)));
      entry["sharp"] = pred.sharp.to_json();
      entry["coarse"] = pred.coarse.to_json();
    }
    per_t.push_back(entry);
  }
  report["per_t"] = per_t;
  write_json(report, join(out_dir, "predict.json"));
  std::cout << "predict: wrote " << join(out_dir, "predict.json") << "\n";
  return 0;
}

namespace {

struct PropagatedState {
  bool is_field = false;
  GaussianChirpState state;
  SampledField field;
  std::string engine;
  nlohmann::json diagnostics;
};

PropagatedState run_engine(const Scenario& sc, double t) {
  if (!sc.Q) throw std::invalid_argument("propagation needs a Hamiltonian Q");
  std::string engine = sc.engine;
  const bool sampled_in = initial_is_sampled(sc);
  if (engine == "auto") engine = sampled_in ? "splitstep" : "gaussian";

  PropagatedState out;
  out.engine = engine;
  if (engine == "gaussian") {
    if (sampled_in)
      throw std::invalid_argument(
          "engine 'gaussian' needs Gaussian-chirp initial data; use "
          "engine=splitstep for sampled fields");
    const InitialState init = initial_gaussian_state(sc);
    const GaussianPropagation prop = propagate_gaussian(init.state, hamilton_map(*sc.Q), t);
    out.state = prop.state;
    out.diagnostics = {{"checkpoints", prop.checkpoints},
                       {"max_condition", prop.max_condition},
                       {"branch_events", prop.branch_events},
                       {"delta_approximated", init.delta_approximated},
                       {"sigma", init.sigma}};
    return out;
  }
  if (engine == "splitstep") {
    SampledField f0 = sampled_in
                          ? initial_sampled_field(sc)
                          : initial_gaussian_state(sc).state.sample(sc.grid.half_width,
                                                                    sc.grid.n);
    const int steps = std::max(128, static_cast<int>(std::ceil(1024 * t)));
    const SplitStepPropagation prop = propagate_splitstep(f0, *sc.Q, t, steps);
    out.is_field = true;
    out.field = prop.field;
    out.diagnostics = {{"steps", prop.steps},
                       {"l2_initial", prop.l2_history.front()},
                       {"l2_final", prop.l2_history.back()}};
    return out;
  }
  if (engine == "metaplectic") {
    if (sc.Q->d != 1)
      throw std::invalid_argument("engine 'metaplectic' is d = 1 only");
    if (sc.Q->Q.real().cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument(
          "engine 'metaplectic' needs Re Q = 0 (real symplectic propagator)");
    SampledField f0 = sampled_in
                          ? initial_sampled_field(sc)
                          : initial_gaussian_state(sc).state.sample(sc.grid.half_width,
                                                                    sc.grid.n);
    const PropagatorMatrix prop = propagator_matrix(hamilton_map(*sc.Q), t);
    out.is_field = true;
    out.field = propagate_metaplectic_1d(f0, prop.T.real());
    nlohmann::json chi = nlohmann::json::array();
    chi.push_back({prop.T(0, 0).real(), prop.T(0, 1).real()});
    chi.push_back({prop.T(1, 0).real(), prop.T(1, 1).real()});
    out.diagnostics = {{"chi", chi}};
    return out;
  }
  throw std::invalid_argument("unknown engine '" + engine +
                              "' (expected auto|gaussian|splitstep|metaplectic)");
}

}  // namespace

int cmd_simulate(const Scenario& sc, const std::string& out_dir) {
  nlohmann::json report;
  report["seed"] = sc.seed;
  nlohmann::json per_t = nlohmann::json::array();
  int idx = 0;
  for (double t : sc.times) {
    const PropagatedState st = run_engine(sc, t);
    nlohmann::json entry{{"t", t}, {"engine", st.engine}, {"diagnostics", st.diagnostics}};
    if (st.is_field) {
      const std::string base = "field_t" + std::to_string(idx);
      st.field.save(join(out_dir, base + ".json"), join(out_dir, base + ".csv"));
      entry["field"] = base + ".json";
      entry["l2"] = st.field.l2_norm();
    } else {
      entry["state"] = st.state.to_json();
    }
    per_t.push_back(entry);
    ++idx;
  }
  report["per_t"] = per_t;
  write_json(report, join(out_dir, "simulate.json"));
  std::cout << "simulate: wrote " << join(out_dir, "simulate.json") << "\n";
  return 0;
}

namespace {

StftEvaluator evaluator_for(const PropagatedState& st, const Scenario& sc,
                            double& radius_clamp) {
  if (st.is_field) {
    radius_clamp = st.field.half_width / 2.0;
    const int stride = st.field.d == 1 ? 1 : 4;
    auto map = std::make_shared<StftMap>(
        stft_sampled(st.field, GaussianWindow{st.field.d}, XiGrid{stride}));
    return StftEvaluator{2 * st.field.d,
                         [map](const Vec& z) { return map->magnitude_at(z); }};
  }
  radius_clamp = sc.estimator.r_max;
  return st.state.stft_evaluator();
}

}  // namespace

int cmd_estimate(const Scenario& sc, const std::string& out_dir) {
  StftEvaluator V{0, nullptr};
  double radius_clamp = sc.estimator.r_max;
  if (initial_is_sampled(sc)) {
    const SampledField f = initial_sampled_field(sc);
    PropagatedState st;
    st.is_field = true;
    st.field = f;
    V = evaluator_for(st, sc, radius_clamp);
  } else {
    const std::string kind = sc.initial.value("kind", "");
    if (kind == "delta") {
      V = closed_form_evaluator(Delta{json_vec(sc.initial.at("center"))});
    } else if (kind == "plane_wave") {
      V = closed_form_evaluator(PlaneWave{json_vec(sc.initial.at("freq"))});
    } else if (kind == "chirp") {
      V = closed_form_evaluator(Chirp{json_mat(sc.initial.at("B"))});
    } else if (kind == "gaussian_chirp") {
      V = GaussianChirpState::from_json(sc.initial).stft_evaluator();
    } else {
      throw std::invalid_argument("estimate: unsupported initial kind '" + kind + "'");
    }
  }
  const WfEstimate est = estimate_wf(V, estimator_params(sc.estimator, radius_clamp));
  export_profiles_csv(est.profiles, join(out_dir, "profiles.csv"));
  nlohmann::json report;
  report["seed"] = sc.seed;
  report["singular"] = est.singular.to_json();
  report["n_singular"] = est.singular.directions().size();
  report["params"] = {{"s", est.params.s},
                      {"a_min", est.params.a_min},
                      {"n_dirs", est.params.n_dirs},
                      {"radii", est.params.radii}};
  write_json(report, join(out_dir, "estimate.json"));
  std::cout << "estimate: " << est.singular.directions().size()
            << " singular directions; wrote " << join(out_dir, "estimate.json") << "\n";
  return 0;
}

int cmd_verify(const Scenario& sc, const std::string& out_dir) {
  if (!sc.Q) throw std::invalid_argument("verify: scenario needs a Hamiltonian Q");
  const HamiltonMap F = hamilton_map(*sc.Q);
  const ConeSet cone0 = initial_cone(sc);

  nlohmann::json report;
  report["seed"] = sc.seed;
  nlohmann::json verdicts = nlohmann::json::array();
  bool all_hold = true;
  int idx = 0;
  for (double t : sc.times) {
    const PropagatedState st = run_engine(sc, t);
    double radius_clamp = sc.estimator.r_max;
    const StftEvaluator V = evaluator_for(st, sc, radius_clamp);
    const WfEstimate est = estimate_wf(V, estimator_params(sc.estimator, radius_clamp));
    const ConeSet sharp =
        t == 0.0 ? cone0 : predict_wf_propagated(F, t, cone0).sharp;
    const WfReport rep = check_inclusion(est.singular, sharp, sc.angular_tol_deg);
    const std::string profile_name = "profiles_t" + std::to_string(idx) + ".csv";
    export_profiles_csv(est.profiles, join(out_dir, profile_name));
    nlohmann::json entry = rep.to_json();
    entry["t"] = t;
    entry["engine"] = st.engine;
    entry["diagnostics"] = st.diagnostics;
    entry["params"] = {{"s", est.params.s},
                       {"a_min", est.params.a_min},
                       {"n_dirs", est.params.n_dirs},
                       {"radii", est.params.radii}};
    entry["profiles_csv"] = profile_name;
    verdicts.push_back(entry);
    all_hold = all_hold && rep.holds;
    ++idx;
  }
  report["verdicts"] = verdicts;
  report["holds"] = all_hold;
  write_json(report, join(out_dir, "verify.json"));
  std::cout << "verify: " << (all_hold ? "holds" : "INCLUSION VIOLATED") << "; wrote "
            << join(out_dir, "verify.json") << "\n";
  return all_hold ? 0 : 1;
}

int cmd_oscillatory(const std::string& phase_path, const std::string& out_dir) {
  const QuadraticPhase phase = QuadraticPhase::from_json(read_json(phase_path));
  const PhaseDiagnostics diag = validate_phase(phase);
  nlohmann::json report;
  report["d"] = phase.d;
  report["N"] = phase.N;
  report["condition1_im_psd"] = diag.im_psd;
  report["condition2_theta_rows"] = diag.theta_rows_full;
  report["min_eig_im"] = diag.min_eig_im;
  report["min_sv_theta"] = std::isfinite(diag.min_sv_theta) ? diag.min_sv_theta : -1.0;
  if (!diag.valid()) {
    write_json(report, join(out_dir, "oscillatory.json"));
    std::cerr << "oscillatory: phase violates validity conditions (margins in report)\n";
    return 2;
  }
  const ConeSet cone = predict_wf_oscillatory(phase);
  report["cone"] = cone.to_json();
  write_json(report, join(out_dir, "oscillatory.json"));
  std::cout << "oscillatory: wrote " << join(out_dir, "oscillatory.json") << "\n";
  return 0;
}

int cmd_seminorms(const Scenario& sc, const std::string& out_dir) {
  const nlohmann::json& cfg = sc.seminorms;
  std::vector<double> As = cfg.contains("A")
                               ? cfg.at("A").get<std::vector<double>>()
                               : std::vector<double>{0.5, 1.0, 2.0};
  const double s = cfg.value("s", 1.0);
  const double R = cfg.value("R", 10.0);
  const int beta_max = cfg.value("beta_max", 12);

  const std::string kind = sc.initial.value("kind", "");
  nlohmann::json report;
  report["s"] = s;
  report["R"] = R;
  nlohmann::json per_a = nlohmann::json::array();

  const bool is_delta = kind == "delta";
  std::optional<SampledField> field;
  std::optional<SampledField> field_hat;
  StftEvaluator V{0, nullptr};
  if (is_delta) {
    V = closed_form_evaluator(Delta{json_vec(sc.initial.at("center"))});
  } else if (initial_is_sampled(sc)) {
    field = initial_sampled_field(sc);
    field_hat = field->fourier_transform();
    PropagatedState st;
    st.is_field = true;
    st.field = *field;
    double clamp = R;
    V = evaluator_for(st, sc, clamp);
  } else {
    const InitialState init = initial_gaussian_state(sc);
    field = init.state.sample(sc.grid.half_width, sc.grid.n);
    field_hat = field->fourier_transform();
    V = init.state.stft_evaluator();
  }

  for (double A : As) {
    nlohmann::json entry;
    entry["A"] = A;
    if (field) {
      auto abs_eval = [&](const Vec& x) {
        const double idx = (x(0) + field->half_width) / field->step();
        const int i = static_cast<int>(std::lround(idx));
        if (i < 0 || i >= field->n) return 0.0;
        return std::abs(field->at(i));
      };
      const auto sup = seminorm_sup(abs_eval, 1, A, s, std::min(R, field->half_width),
                                    field->n + 1);
      entry["sup"] = {{"value", sup.value}, {"divergent", sup.divergent}};
      auto hat_eval = [&](const Vec& x) {
        const double idx = (x(0) + field_hat->half_width) / field_hat->step();
        const int i = static_cast<int>(std::lround(idx));
        if (i < 0 || i >= field_hat->n) return 0.0;
        return std::abs(field_hat->at(i));
      };
      const auto sup_hat = seminorm_sup(hat_eval, 1, A, s,
                                        std::min(R, field_hat->half_width),
                                        field_hat->n + 1);
      entry["sup_fourier"] = {{"value", sup_hat.value}, {"divergent", sup_hat.divergent}};
      const auto deriv = seminorm_derivatives(*field, A, s, beta_max);
      entry["derivative"] = {{"value", deriv.value},
                             {"argmax_beta", deriv.argmax_beta},
                             {"truncation_suspect", deriv.truncation_suspect}};
    }
    const auto stft_norm = seminorm_stft(V, A, s, R);
    nlohmann::json stft_entry{{"value", stft_norm.value},
                              {"divergent", stft_norm.divergent}};
    if (stft_norm.divergent) {
      nlohmann::json w = nlohmann::json::array();
      for (int i = 0; i < stft_norm.witness_direction.size(); ++i)
        w.push_back(stft_norm.witness_direction(i));
      stft_entry["witness_direction"] = w;
    }
    entry["stft"] = stft_entry;
    per_a.push_back(entry);
  }
  report["per_A"] = per_a;
  write_json(report, join(out_dir, "seminorms.json"));
  std::cout << "seminorms: wrote " << join(out_dir, "seminorms.json") << "\n";
  return 0;
}

}  // namespace phasefront::cli
