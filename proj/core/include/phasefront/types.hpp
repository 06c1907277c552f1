#pragma once

#include <complex>
#include <Eigen/Dense>

namespace phasefront {

using cplx = std::complex<double>;

using Mat  = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec  = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

inline constexpr double kDefaultRankTol = 1e-10;

}  // namespace phasefront
