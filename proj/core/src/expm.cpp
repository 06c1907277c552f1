#include "phasefront/expm.hpp"

#include <cmath>

namespace phasefront {
namespace {

// Degree-13 Pade coefficients (Higham, "The scaling and squaring method
// for the matrix exponential revisited").
constexpr double kPade13[14] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

CMat pade13(const CMat& A) {
  const int n = static_cast<int>(A.rows());
  const CMat I = CMat::Identity(n, n);
  const CMat A2 = A * A;
  const CMat A4 = A2 * A2;
  const CMat A6 = A2 * A4;
  const CMat U = A * (A6 * (kPade13[13] * A6 + kPade13[11] * A4 + kPade13[9] * A2) +
                      kPade13[7] * A6 + kPade13[5] * A4 + kPade13[3] * A2 + kPade13[1] * I);
  const CMat V = A6 * (kPade13[12] * A6 + kPade13[10] * A4 + kPade13[8] * A2) +
                 kPade13[6] * A6 + kPade13[4] * A4 + kPade13[2] * A2 + kPade13[0] * I;
  return (V - U).partialPivLu().solve(V + U);
}

}  // namespace

CMat expm(const CMat& A) {
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kTheta13)
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  CMat E = pade13(A / std::pow(2.0, squarings));
  for (int i = 0; i < squarings; ++i) E = E * E;
  return E;
}

Mat expm(const Mat& A) { return expm(CMat(A.cast<cplx>())).real(); }

}  // namespace phasefront
