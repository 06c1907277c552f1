#include "phasefront/gaussian_state.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace phasefront {

GaussianChirpState GaussianChirpState::single(cplx amplitude, CMat M, CVec b) {
  GaussianChirpState s;
  s.d = static_cast<int>(M.rows());
  s.terms.push_back({amplitude, std::move(M), std::move(b)});
  s.validate();
  return s;
}

void GaussianChirpState::validate() const {
  for (const auto& t : terms) {
    if (t.M.rows() != d || t.M.cols() != d || t.b.size() != d)
      throw std::invalid_argument("GaussianChirpState: term dimension mismatch");
    if ((t.M - t.M.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("GaussianChirpState: M must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (t.M.imag() + t.M.imag().transpose()));
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw std::invalid_argument("GaussianChirpState: Im M has a negative eigenvalue");
  }
}

cplx GaussianChirpState::evaluate(const Vec& x) const {
  const CVec xc = x.cast<cplx>();
  cplx acc = 0.0;
  for (const auto& t : terms) {
    const cplx quad = (xc.transpose() * t.M * xc)(0);
    const cplx lin = (t.b.transpose() * xc)(0);
    acc += t.amplitude * std::exp(cplx(0, 1) * (0.5 * quad + lin));
  }
  return acc;
}

SampledField GaussianChirpState::sample(double half_width, int n) const {
  return SampledField::sample(d, half_width, n,
                              [this](const Vec& x) { return evaluate(x); });
}

double GaussianChirpState::l2_norm() const {
  // <u_k, u_l> pairs via the complex Gaussian integral; needs Im M > 0.
  cplx acc = 0.0;
  for (const auto& tk : terms)
    for (const auto& tl : terms) {
      const CMat A = cplx(0, -1) * (tl.M - tk.M.conjugate());
      Eigen::SelfAdjointEigenSolver<Mat> re_check(0.5 * (A.real() + A.real().transpose()));
      if (re_check.eigenvalues().minCoeff() <= 0)
        throw std::invalid_argument("l2_norm: needs Im M strictly positive");
      const CVec u = cplx(0, 1) * (tl.b - tk.b.conjugate());
      Eigen::ComplexEigenSolver<CMat> es(A);
      cplx det_inv_sqrt(1.0, 0.0);
      for (int i = 0; i < d; ++i) det_inv_sqrt *= 1.0 / std::sqrt(es.eigenvalues()(i));
      const CVec Au = A.partialPivLu().solve(u);
      const cplx quad = 0.5 * (u.transpose() * Au)(0);
      acc += std::conj(tk.amplitude) * tl.amplitude *
             std::pow(2.0 * M_PI, 0.5 * d) * det_inv_sqrt * std::exp(quad);
    }
  if (std::abs(acc.imag()) > 1e-8 * std::max(1.0, std::abs(acc.real())))
    throw std::runtime_error("l2_norm: non-real norm^2, inconsistent state");
  return std::sqrt(std::max(0.0, acc.real()));
}

cplx GaussianChirpState::stft(const Vec& x, const Vec& xi) const {
  cplx acc = 0.0;
  for (const auto& t : terms)
    acc += stft_closed_form(GaussianChirp{t.M, t.b, t.amplitude}, x, xi);
  return acc;
}

StftEvaluator GaussianChirpState::stft_evaluator() const {
  GaussianChirpState copy = *this;
  return StftEvaluator{2 * d, [copy](const Vec& z) {
                         return std::abs(copy.stft(z.head(copy.d), z.tail(copy.d)));
                       }};
}

nlohmann::json GaussianChirpState::to_json() const {
  nlohmann::json terms_json = nlohmann::json::array();
  for (const auto& t : terms) {
    nlohmann::json m_re = nlohmann::json::array(), m_im = nlohmann::json::array();
    for (int i = 0; i < d; ++i) {
      nlohmann::json r = nlohmann::json::array(), c = nlohmann::json::array();
      for (int j = 0; j < d; ++j) {
        r.push_back(t.M(i, j).real());
        c.push_back(t.M(i, j).imag());
      }
      m_re.push_back(r);
      m_im.push_back(c);
    }
    nlohmann::json b_re = nlohmann::json::array(), b_im = nlohmann::json::array();
    for (int i = 0; i < d; ++i) {
      b_re.push_back(t.b(i).real());
      b_im.push_back(t.b(i).imag());
    }
    terms_json.push_back({{"amplitude_re", t.amplitude.real()},
                          {"amplitude_im", t.amplitude.imag()},
                          {"M_re", m_re},
                          {"M_im", m_im},
                          {"b_re", b_re},
                          {"b_im", b_im}});
  }
  return nlohmann::json{{"d", d}, {"terms", terms_json}};
}

GaussianChirpState GaussianChirpState::from_json(const nlohmann::json& j) {
  GaussianChirpState s;
  s.d = j.at("d").get<int>();
  for (const auto& tj : j.at("terms")) {
    GaussianChirpTerm t;
    t.amplitude = cplx(tj.value("amplitude_re", 1.0), tj.value("amplitude_im", 0.0));
    t.M = CMat(s.d, s.d);
    t.b = CVec::Zero(s.d);
    const auto& m_re = tj.at("M_re");
    const auto& m_im = tj.at("M_im");
    for (int a = 0; a < s.d; ++a)
      for (int b2 = 0; b2 < s.d; ++b2)
        t.M(a, b2) = cplx(m_re.at(a).at(b2).get<double>(), m_im.at(a).at(b2).get<double>());
    if (tj.contains("b_re"))
      for (int a = 0; a < s.d; ++a)
        t.b(a) = cplx(tj.at("b_re").at(a).get<double>(),
                      tj.contains("b_im") ? tj.at("b_im").at(a).get<double>() : 0.0);
    s.terms.push_back(std::move(t));
  }
  s.validate();
  return s;
}

}  // namespace phasefront
