#include "phasefront/fft.hpp"

#include <stdexcept>

#include <fftw3.h>

namespace phasefront::fft {
namespace {

void transform_1d(std::vector<cplx>& data, int sign) {
  const int n = static_cast<int>(data.size());
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

void transform_2d(std::vector<cplx>& data, int n0, int n1, int sign) {
  if (static_cast<int>(data.size()) != n0 * n1)
    throw std::invalid_argument("fft: data size != n0*n1");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft_2d(n0, n1, p, p, sign, FFTW_ESTIMATE);
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

}  // namespace

void forward(std::vector<cplx>& data) { transform_1d(data, FFTW_FORWARD); }

void inverse(std::vector<cplx>& data) {
  transform_1d(data, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

void forward2(std::vector<cplx>& data, int n0, int n1) {
  transform_2d(data, n0, n1, FFTW_FORWARD);
}

void inverse2(std::vector<cplx>& data, int n0, int n1) {
  transform_2d(data, n0, n1, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

std::vector<double> frequencies(int n, double half_width) {
  std::vector<double> xi(n);
  for (int k = 0; k < n; ++k) {
    const int kp = (k < n / 2) ? k : k - n;
    xi[k] = M_PI * static_cast<double>(kp) / half_width;
  }
  return xi;
}

}  // namespace phasefront::fft
