#include <doctest.h>

#include "oracles.hpp"
#include "phasefront/seminorms.hpp"

using namespace phasefront;

namespace {

SampledField hermite_field(int k, double L = 12.0, int n = 2048) {
  return SampledField::sample(
      1, L, n, [k](const Vec& x) { return cplx(oracle::hermite_function(k, x(0)), 0.0); });
}

}  // namespace

TEST_CASE("sup seminorm basics") {
  SUBCASE("zero function gives zero") {
    const auto r = seminorm_sup([](const Vec&) { return 0.0; }, 1, 1.0, 1.0, 5.0);
    CHECK(r.value == 0.0);
  }
  SUBCASE("Gaussian, A = 1, s = 1: sup is e^{1/2} at |x| = 1") {
    const auto r = seminorm_sup(
        [](const Vec& x) { return std::exp(-0.5 * x(0) * x(0)); }, 1, 1.0, 1.0, 8.0,
        16001);
    CHECK(r.value == doctest::Approx(std::exp(0.5)).epsilon(1e-6));
    CHECK(std::abs(std::abs(r.argmax(0)) - 1.0) < 1e-3);
    CHECK_FALSE(r.divergent);
  }
  SUBCASE("s <= 1/2 is rejected") {
    CHECK_THROWS_AS((void)seminorm_sup([](const Vec&) { return 1.0; }, 1, 1.0, 0.5, 5.0),
                    std::invalid_argument);
  }
  SUBCASE("boundary argmax is flagged") {
    const auto r = seminorm_sup([](const Vec&) { return 1.0; }, 1, 1.0, 1.0, 5.0);
    CHECK(r.boundary);
    CHECK(r.divergent);
  }
}

TEST_CASE("stft sup seminorm") {
  SUBCASE("window itself: finite, matched against the calculus value") {
    // u = phi: |V| = e^{-r^2/4}; sup exp(0.2 r - r^2/4) = exp(0.04) at r = 0.4
    const auto V = closed_form_evaluator(GaussianChirp{
        cplx(0, 1) * CMat::Identity(1, 1), CVec::Zero(1), std::pow(M_PI, -0.25)});
    const auto r = seminorm_stft(V, 0.2, 1.0, 8.0, 801);
    CHECK(r.value == doctest::Approx(std::exp(0.04)).epsilon(1e-4));
    CHECK_FALSE(r.divergent);
  }
  SUBCASE("delta: divergent along the frequency axis with a witness") {
    const auto V = closed_form_evaluator(Delta{Vec::Zero(1)});
    const auto r = seminorm_stft(V, 1.0, 1.0, 10.0, 401);
    CHECK(r.divergent);
    REQUIRE(r.witness_direction.size() == 2);
    CHECK(std::abs(r.witness_direction(0)) < 0.05);   // x-component
    CHECK(std::abs(r.witness_direction(1)) > 0.999);  // xi-component
  }
  SUBCASE("zero evaluator") {
    const StftEvaluator zero{2, [](const Vec&) { return 0.0; }};
    CHECK(seminorm_stft(zero, 1.0, 1.0, 5.0, 101).value == 0.0);
  }
}

TEST_CASE("derivative seminorm via spectral differentiation") {
  const auto gauss = hermite_field(0);

  SUBCASE("zero field") {
    const auto z = SampledField::zeros(1, 12.0, 1024);
    const auto r = seminorm_derivatives(z, 0.5, 1.0, 4);
    CHECK(r.value == 0.0);
  }

  SUBCASE("matches the Hermite recurrence oracle per derivative order") {
    // spot-check |D^beta f| for the Gaussian against (-1)^n He_n(x) e^{-x^2/2}
    const double A = 0.5, s = 1.0;
    const auto r = seminorm_derivatives(gauss, A, s, 8);
    double oracle_best = 0.0;
    for (int i = 0; i < gauss.n; ++i) {
      const double x = gauss.coord(i);
      if (std::abs(x) > 8) continue;
      const auto he = oracle::hermite_he(8, x);
      const double envelope = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
      for (int beta = 0; beta <= 8; ++beta) {
        const double term = std::pow(A, beta) * std::exp(A * std::abs(x)) *
                            std::abs(he[beta]) * envelope /
                            std::tgamma(beta + 1.0);
        oracle_best = std::max(oracle_best, term);
      }
    }
    CHECK(r.value == doctest::Approx(oracle_best).epsilon(1e-6));
    CHECK_FALSE(r.truncation_suspect);
  }

  SUBCASE("stable under deeper truncation for moderate A") {
    const auto r8 = seminorm_derivatives(gauss, 0.5, 1.0, 8);
    const auto r12 = seminorm_derivatives(gauss, 0.5, 1.0, 12);
    CHECK(std::abs(r8.value - r12.value) <= 0.01 * r12.value);
  }

  SUBCASE("large A at small s keeps growing and is flagged") {
    const auto r = seminorm_derivatives(gauss, 10.0, 0.6, 10);
    CHECK(r.truncation_suspect);
    const auto deeper = seminorm_derivatives(gauss, 10.0, 0.6, 14);
    CHECK(deeper.value > 2.0 * r.value);
  }

  SUBCASE("non-band-limited fields are rejected") {
    // a step function has a slowly decaying spectrum
    auto f = SampledField::sample(1, 12.0, 1024, [](const Vec& x) {
      return cplx(std::abs(x(0)) < 3 ? 1.0 : 0.0, 0.0);
    });
    CHECK_THROWS_AS((void)seminorm_derivatives(f, 0.5, 1.0, 4), std::invalid_argument);
  }
}

TEST_CASE("all three families are finite on Hermite functions") {
  for (int k = 0; k <= 4; ++k) {
    const auto f = hermite_field(k);
    const auto fhat = f.fourier_transform();
    for (double A : {0.5, 1.0, 2.0}) {
      auto field_eval = [&](const Vec& x) {
        const int i = static_cast<int>(std::lround((x(0) + f.half_width) / f.step()));
        return (i >= 0 && i < f.n) ? std::abs(f.at(i)) : 0.0;
      };
      const auto sup = seminorm_sup(field_eval, 1, A, 1.0, 11.0, 2049);
      CHECK(std::isfinite(sup.value));
      CHECK_FALSE(sup.divergent);

      auto hat_eval = [&](const Vec& x) {
        const int i =
            static_cast<int>(std::lround((x(0) + fhat.half_width) / fhat.step()));
        return (i >= 0 && i < fhat.n) ? std::abs(fhat.at(i)) : 0.0;
      };
      const auto sup_hat = seminorm_sup(hat_eval, 1, A, 1.0, 11.0, 2049);
      CHECK(std::isfinite(sup_hat.value));
      CHECK_FALSE(sup_hat.divergent);

      const auto deriv = seminorm_derivatives(f, A, 1.0, 24);
      CHECK(std::isfinite(deriv.value));
      CHECK_FALSE(deriv.truncation_suspect);
    }
  }
}
