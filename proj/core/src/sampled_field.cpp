#include "phasefront/sampled_field.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "phasefront/fft.hpp"

namespace phasefront {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_shape(int d, double half_width, int n) {
  if (d != 1 && d != 2) throw std::invalid_argument("SampledField: d must be 1 or 2");
  if (half_width <= 0) throw std::invalid_argument("SampledField: half_width must be positive");
  if (!is_power_of_two(n)) throw std::invalid_argument("SampledField: n must be a power of two");
}

}  // namespace

double SampledField::l2_norm() const {
  double acc = 0.0;
  for (const auto& v : values) acc += std::norm(v);
  return std::sqrt(acc * std::pow(step(), d));
}

SampledField SampledField::zeros(int d, double half_width, int n) {
  check_shape(d, half_width, n);
  SampledField f;
  f.d = d;
  f.half_width = half_width;
  f.n = n;
  f.values.assign(d == 1 ? n : static_cast<std::size_t>(n) * n, cplx(0, 0));
  return f;
}

SampledField SampledField::sample(int d, double half_width, int n,
                                  const std::function<cplx(const Vec&)>& fn) {
  SampledField f = zeros(d, half_width, n);
  if (d == 1) {
    Vec x(1);
    for (int i = 0; i < n; ++i) {
      x(0) = f.coord(i);
      f.at(i) = fn(x);
    }
  } else {
    Vec x(2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        x(0) = f.coord(i);
        x(1) = f.coord(j);
        f.at(i, j) = fn(x);
      }
  }
  return f;
}

double SampledField::spectral_tail() const {
  std::vector<cplx> hat = values;
  if (d == 1) fft::forward(hat);
  else fft::forward2(hat, n, n);
  double peak = 0.0;
  for (const auto& v : hat) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  auto outer = [&](int k) {  // top quarter of |frequency| range
    const int kp = (k < n / 2) ? k : k - n;
    return std::abs(kp) >= 3 * n / 8;
  };
  double tail = 0.0;
  if (d == 1) {
    for (int k = 0; k < n; ++k)
      if (outer(k)) tail = std::max(tail, std::abs(hat[k]));
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (outer(i) || outer(j))
          tail = std::max(tail, std::abs(hat[static_cast<std::size_t>(i) * n + j]));
  }
  return tail / peak;
}

SampledField SampledField::fourier_transform() const {
  const double dx = step();
  const double xi_half = M_PI * n / (2.0 * half_width);
  SampledField out = zeros(d, xi_half, n);
  std::vector<cplx> hat = values;
  if (d == 1) {
    fft::forward(hat);
    const auto xi = fft::frequencies(n, half_width);
    for (int i = 0; i < n; ++i) {
      const int bin = (i - n / 2 + n) % n;  // ascending frequency order
      out.at(i) = dx * std::polar(1.0, half_width * xi[bin]) * hat[bin];
    }
  } else {
    fft::forward2(hat, n, n);
    const auto xi = fft::frequencies(n, half_width);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int bi = (i - n / 2 + n) % n;
        const int bj = (j - n / 2 + n) % n;
        out.at(i, j) = dx * dx *
                       std::polar(1.0, half_width * (xi[bi] + xi[bj])) *
                       hat[static_cast<std::size_t>(bi) * n + bj];
      }
  }
  return out;
}

void SampledField::save(const std::string& json_path, const std::string& csv_path) const {
  nlohmann::json header{{"d", d}, {"L", half_width}, {"n", n}, {"csv", csv_path}};
  std::ofstream jf(json_path);
  if (!jf) throw std::runtime_error("cannot write " + json_path);
  jf << header.dump(2) << "\n";

  std::ofstream cf(csv_path);
  if (!cf) throw std::runtime_error("cannot write " + csv_path);
  cf.precision(17);
  if (d == 1) {
    cf << "x,re,im\n";
    for (int i = 0; i < n; ++i)
      cf << coord(i) << "," << at(i).real() << "," << at(i).imag() << "\n";
  } else {
    cf << "x,y,re,im\n";
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        cf << coord(i) << "," << coord(j) << "," << at(i, j).real() << ","
           << at(i, j).imag() << "\n";
  }
}

SampledField SampledField::load(const std::string& json_path, const std::string& csv_path) {
  std::ifstream jf(json_path);
  if (!jf) throw std::runtime_error("cannot read " + json_path);
  nlohmann::json header;
  jf >> header;
  SampledField f = zeros(header.at("d").get<int>(), header.at("L").get<double>(),
                         header.at("n").get<int>());
  std::ifstream cf(csv_path);
  if (!cf) throw std::runtime_error("cannot read " + csv_path);
  std::string line;
  std::getline(cf, line);  // header row
  std::size_t idx = 0;
  while (std::getline(cf, line) && idx < f.values.size()) {
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> cells;
    while (std::getline(ss, tok, ',')) cells.push_back(std::stod(tok));
    if (cells.size() < static_cast<std::size_t>(f.d) + 2)
      throw std::runtime_error("field CSV: malformed row");
    f.values[idx++] = cplx(cells[f.d], cells[f.d + 1]);
  }
  if (idx != f.values.size()) throw std::runtime_error("field CSV: wrong row count");
  return f;
}

}  // namespace phasefront
