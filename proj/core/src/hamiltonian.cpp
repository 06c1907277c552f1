#include "phasefront/hamiltonian.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace phasefront {

Mat symplectic_form_matrix(int d) {
  Mat J = Mat::Zero(2 * d, 2 * d);
  J.topRightCorner(d, d) = Mat::Identity(d, d);
  J.bottomLeftCorner(d, d) = -Mat::Identity(d, d);
  return J;
}

QuadraticHamiltonian QuadraticHamiltonian::create(int d, CMat Q) {
  if (d <= 0) throw std::invalid_argument("QuadraticHamiltonian: d must be positive");
  if (Q.rows() != 2 * d || Q.cols() != 2 * d)
    throw std::invalid_argument("QuadraticHamiltonian: Q must be 2d x 2d");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("QuadraticHamiltonian: Q is not symmetric");
  const Mat re_sym = 0.5 * (Q.real() + Q.real().transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(re_sym);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("QuadraticHamiltonian: Re Q has a negative eigenvalue");
  QuadraticHamiltonian q;
  q.d = d;
  q.Q = std::move(Q);
  return q;
}

QuadraticHamiltonian QuadraticHamiltonian::from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const auto& re = j.at("Q_re");
  const auto& im = j.at("Q_im");
  const int n = 2 * d;
  if (static_cast<int>(re.size()) != n || static_cast<int>(im.size()) != n)
    throw std::invalid_argument("Hamiltonian JSON: Q_re/Q_im must have 2d rows");
  CMat Q(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      Q(i, k) = cplx(re.at(i).at(k).get<double>(), im.at(i).at(k).get<double>());
  return create(d, std::move(Q));
}

nlohmann::json QuadraticHamiltonian::to_json() const {
  const int n = 2 * d;
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::json row_re = nlohmann::json::array(), row_im = nlohmann::json::array();
    for (int k = 0; k < n; ++k) {
      row_re.push_back(Q(i, k).real());
      row_im.push_back(Q(i, k).imag());
    }
    re.push_back(row_re);
    im.push_back(row_im);
  }
  return nlohmann::json{{"d", d}, {"Q_re", re}, {"Q_im", im}};
}

QuadraticHamiltonian QuadraticHamiltonian::heat(int d) {
  CMat Q = CMat::Zero(2 * d, 2 * d);
  Q.bottomRightCorner(d, d) = CMat::Identity(d, d);
  return create(d, std::move(Q));
}

QuadraticHamiltonian QuadraticHamiltonian::free_particle(int d) {
  CMat Q = CMat::Zero(2 * d, 2 * d);
  Q.bottomRightCorner(d, d) = cplx(0, 1) * CMat::Identity(d, d);
  return create(d, std::move(Q));
}

QuadraticHamiltonian QuadraticHamiltonian::harmonic_oscillator(int d) {
  CMat Q = cplx(0, 1) * CMat::Identity(2 * d, 2 * d);
  return create(d, std::move(Q));
}

HamiltonMap hamilton_map(const QuadraticHamiltonian& q) {
  HamiltonMap h;
  h.d = q.d;
  h.Q = q.Q;
  h.F = symplectic_form_matrix(q.d) * q.Q;
  return h;
}

}  // namespace phasefront
