#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "phasefront/expm.hpp"
#include "phasefront/symplectic.hpp"
#include "rational_oracle.hpp"

using namespace phasefront;

namespace {

ConeSet line_cone(double x, double xi) {
  Mat span(2, 1);
  span << x, xi;
  return ConeSet::exact(2, {SubspaceBasis::from_span(span)});
}

}  // namespace

TEST_CASE("hamilton_map on the model forms") {
  SUBCASE("zero form") {
    const auto q = QuadraticHamiltonian::create(1, CMat::Zero(2, 2));
    CHECK(hamilton_map(q).F.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("heat: F = [[0,1],[0,0]]") {
    const auto F = hamilton_map(QuadraticHamiltonian::heat(1)).F;
    CMat expected(2, 2);
    expected << 0, 1, 0, 0;
    CHECK((F - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("harmonic oscillator: F = i J") {
    const auto F = hamilton_map(QuadraticHamiltonian::harmonic_oscillator(1)).F;
    const CMat expected = cplx(0, 1) * symplectic_form_matrix(1).cast<cplx>();
    CHECK((F - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("J F is minus the form matrix") {
    std::mt19937 rng(11);
    const auto q = oracle::random_hamiltonian(2, rng);
    const auto h = hamilton_map(q);
    const CMat JF = symplectic_form_matrix(2).cast<cplx>() * h.F;
    CHECK((JF + q.Q).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("rejects invalid forms") {
    CMat asym(2, 2);
    asym << 0, 1, 0, 0;
    CHECK_THROWS_AS((void)QuadraticHamiltonian::create(1, asym), std::invalid_argument);
    CMat neg = CMat::Zero(2, 2);
    neg(0, 0) = -1;
    CHECK_THROWS_AS((void)QuadraticHamiltonian::create(1, neg), std::invalid_argument);
  }
}

TEST_CASE("singular_space model cases") {
  SUBCASE("Re Q = 0 gives the full phase space") {
    const auto h = hamilton_map(QuadraticHamiltonian::harmonic_oscillator(2));
    CHECK(singular_space(h).dim() == 4);
  }
  SUBCASE("heat d=1 gives the x-axis") {
    const auto S = singular_space(hamilton_map(QuadraticHamiltonian::heat(1)));
    REQUIRE(S.dim() == 1);
    CHECK(std::abs(std::abs(S.basis()(0, 0)) - 1.0) < 1e-12);
  }
  SUBCASE("mixed d=2 form against the exact-arithmetic oracle") {
    // q = xi_1^2 + i(x_2^2 + xi_2^2)
    const int d = 2;
    auto q_re = oracle::rational_zero(4, 4);
    auto q_im = oracle::rational_zero(4, 4);
    q_re[2][2] = 1;
    q_im[1][1] = 1;
    q_im[3][3] = 1;
    CMat Q = CMat::Zero(4, 4);
    Q(2, 2) = 1;
    Q(1, 1) = cplx(0, 1);
    Q(3, 3) = cplx(0, 1);
    const auto S = singular_space(hamilton_map(QuadraticHamiltonian::create(d, Q)));
    const Mat exact = oracle::exact_singular_space(q_re, q_im, d);
    const auto S_exact = SubspaceBasis::from_span(exact);
    CHECK(subspace_gap(S, S_exact) < 1e-8);
    // only the dissipated frequency direction xi_1 drops out
    CHECK(S.dim() == 3);
    Vec x1 = Vec::Unit(4, 0), xi1 = Vec::Unit(4, 2);
    CHECK(S.contains(x1, 1e-10));
    CHECK_FALSE(S.contains(xi1, 1e-6));
  }
}

TEST_CASE("singular_space matches the rational oracle on random rational forms") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> num(-2, 2);
  std::uniform_int_distribution<int> den(1, 2);
  std::uniform_int_distribution<int> ddist(1, 3);
  int checked = 0;
  while (checked < 20) {
    const int d = ddist(rng);
    const int n = 2 * d;
    std::uniform_int_distribution<int> rank(0, n);
    // Re Q = R^t R over Q, Im Q symmetric rational
    const int r = rank(rng);
    auto R = oracle::rational_zero(r, n);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < n; ++j) R[i][j] = mpq_class(num(rng), den(rng));
    auto q_re = r == 0 ? oracle::rational_zero(n, n)
                       : oracle::rational_multiply(oracle::rational_transpose(R), R);
    auto q_im = oracle::rational_zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) q_im[i][j] = q_im[j][i] = mpq_class(num(rng), den(rng));

    CMat Q(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        Q(i, j) = cplx(q_re[i][j].get_d(), q_im[i][j].get_d());
    const auto S = singular_space(hamilton_map(QuadraticHamiltonian::create(d, Q)));
    const auto S_exact =
        SubspaceBasis::from_span(oracle::exact_singular_space(q_re, q_im, d));
    REQUIRE(S.dim() == S_exact.dim());
    CHECK(subspace_gap(S, S_exact) < 1e-8);
    ++checked;
  }
}

TEST_CASE("propagator matrices of the model flows") {
  SUBCASE("t = 0 is the identity exactly") {
    const auto p = propagator_matrix(hamilton_map(QuadraticHamiltonian::heat(1)), 0.0);
    CHECK((p.T - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("free particle: real shear [[1, 2t],[0,1]]") {
    const auto p =
        propagator_matrix(hamilton_map(QuadraticHamiltonian::free_particle(1)), 0.7);
    CMat expected(2, 2);
    expected << 1, 1.4, 0, 1;
    CHECK((p.T - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("heat: complex shear [[1, -2it],[0,1]]") {
    const auto p = propagator_matrix(hamilton_map(QuadraticHamiltonian::heat(1)), 0.7);
    CMat expected(2, 2);
    expected << 1, cplx(0, -1.4), 0, 1;
    CHECK((p.T - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("propagator symplecticity and semigroup over random Hamiltonians") {
  std::mt19937 rng(5);
  const Mat J1 = symplectic_form_matrix(1), J2 = symplectic_form_matrix(2);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + (trial % 2);
    const auto h = hamilton_map(oracle::random_hamiltonian(d, rng));
    const Mat& J = d == 1 ? J1 : J2;
    std::uniform_real_distribution<double> tdist(0.0, 2.0);
    const double t1 = tdist(rng), t2 = tdist(rng);
    const auto p1 = propagator_matrix(h, t1);
    const auto p2 = propagator_matrix(h, t2);
    const auto p12 = propagator_matrix(h, t1 + t2);
    CHECK((p1.T.transpose() * J.cast<cplx>() * p1.T - J.cast<cplx>())
              .cwiseAbs()
              .maxCoeff() < 1e-8);
    CHECK((p12.T - p1.T * p2.T).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("positivity of the propagator form") {
  SUBCASE("real symplectic matrices give the zero form") {
    std::mt19937 rng(17);
    const Mat T = oracle::random_symplectic(2, rng);
    const auto rep = check_positive_symplectic(T.cast<cplx>());
    CHECK(rep.is_symplectic);
    CHECK(rep.is_positive);
    CHECK(std::abs(rep.min_eig) < 1e-10);
  }
  SUBCASE("heat forward is positive, backward is not") {
    const auto h = hamilton_map(QuadraticHamiltonian::heat(1));
    const auto fwd = propagator_matrix(h, 0.5);
    auto rep = check_positive_symplectic(fwd.T);
    CHECK(rep.is_symplectic);
    CHECK(rep.is_positive);
    // time-reversed heat: exp(+2itF)
    const CMat back = expm(CMat(cplx(0, 1.0) * h.F));
    rep = check_positive_symplectic(back);
    CHECK(rep.is_symplectic);
    CHECK_FALSE(rep.is_positive);
    CHECK(rep.min_eig < -0.5);
  }
}

TEST_CASE("kernel_imag model cases") {
  SUBCASE("real propagator: full space") {
    const auto p =
        propagator_matrix(hamilton_map(QuadraticHamiltonian::free_particle(1)), 0.4);
    CHECK(kernel_imag(p).dim() == 2);
  }
  SUBCASE("heat: x-axis survives") {
    const auto p = propagator_matrix(hamilton_map(QuadraticHamiltonian::heat(1)), 0.4);
    const auto k = kernel_imag(p);
    REQUIRE(k.dim() == 1);
    CHECK(std::abs(std::abs(k.basis()(0, 0)) - 1.0) < 1e-12);
  }
}

TEST_CASE("predicted propagation of the model cones") {
  const auto heat = hamilton_map(QuadraticHamiltonian::heat(1));
  SUBCASE("heat absorbs the delta cone") {
    const auto pred = predict_wf_propagated(heat, 0.3, line_cone(0, 1));
    CHECK(pred.sharp.empty());
  }
  SUBCASE("heat keeps the constant's cone") {
    const auto pred = predict_wf_propagated(heat, 0.3, line_cone(1, 0));
    REQUIRE(pred.sharp.subspaces().size() == 1);
    CHECK(subspace_gap(pred.sharp.subspaces()[0],
                       line_cone(1, 0).subspaces()[0]) < 1e-10);
    // sharp never exceeds coarse
    for (const auto& s : pred.sharp.subspaces()) {
      bool inside = false;
      for (const auto& c : pred.coarse.subspaces()) inside = inside || c.contains(s, 1e-8);
      CHECK(inside);
    }
  }
  SUBCASE("Re Q = 0 rotates cones exactly") {
    const auto harm = hamilton_map(QuadraticHamiltonian::harmonic_oscillator(1));
    const double t = 0.3;
    const auto pred = predict_wf_propagated(harm, t, line_cone(1, 1));
    const Mat rot = expm(Mat(2.0 * t * harm.F.imag()));
    Vec v(2);
    v << 1, 1;
    const Vec moved = rot * v;
    REQUIRE(pred.sharp.subspaces().size() == 1);
    CHECK(angle_to_subspace(moved, pred.sharp.subspaces()[0]) < 1e-10);
  }
  SUBCASE("empirical cones are rejected") {
    Vec dir(2);
    dir << 0, 1;
    const auto emp = ConeSet::empirical(2, {{dir, 0.0, 0.0, true}});
    CHECK_THROWS_AS((void)predict_wf_propagated(heat, 0.3, emp), std::invalid_argument);
  }
}

TEST_CASE("flow of Im F preserves the singular space (per instance)") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    const int d = 1 + (trial % 2);
    const auto h = hamilton_map(oracle::random_hamiltonian(d, rng));
    const auto S = singular_space(h);
    if (S.dim() == 0) continue;
    std::uniform_real_distribution<double> tdist(0.1, 2.0);
    const Mat flow = expm(Mat(2.0 * tdist(rng) * h.F.imag()));
    CHECK(subspace_gap(S, map_subspace(flow, S)) < 1e-8);
  }
}

TEST_CASE("sharp prediction is contained in the coarse one on random instances") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> tdist(0.05, 1.5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + (trial % 2);
    const auto h = hamilton_map(oracle::random_hamiltonian(d, rng));
    Mat span(2 * d, 1 + (trial % d == 0 ? 0 : 1));
    for (int i = 0; i < span.rows(); ++i)
      for (int j = 0; j < span.cols(); ++j) span(i, j) = u(rng);
    const auto cone = ConeSet::exact(2 * d, {SubspaceBasis::from_span(span)});
    const auto pred = predict_wf_propagated(h, tdist(rng), cone);
    for (const auto& s : pred.sharp.subspaces()) {
      bool inside = false;
      for (const auto& c : pred.coarse.subspaces())
        inside = inside || c.contains(s, 1e-8);
      CHECK(inside);
    }
  }
}

TEST_CASE("relation composition") {
  std::mt19937 rng(41);
  SUBCASE("twisted graph of a symplectic matrix acts as the matrix") {
    for (int trial = 0; trial < 6; ++trial) {
      const int d = 1 + (trial % 2);
      const Mat T = oracle::random_symplectic(d, rng);
      const auto relation = twisted_graph_relation(T);
      std::uniform_real_distribution<double> u(-1, 1);
      Mat span(2 * d, 1);
      for (int i = 0; i < 2 * d; ++i) span(i, 0) = u(rng);
      const auto cone = ConeSet::exact(2 * d, {SubspaceBasis::from_span(span)});
      const auto out = compose_relation(relation, cone);
      REQUIRE(out.subspaces().size() == 1);
      CHECK(subspace_gap(out.subspaces()[0], map_subspace(T, cone.subspaces()[0])) < 1e-8);
    }
  }
  SUBCASE("identity relation is the identity on cones") {
    const auto relation = twisted_graph_relation(Mat::Identity(4, 4));
    Mat span(4, 2);
    span << 1, 0, 0, 1, 0, 2, 1, 0;
    const auto cone = ConeSet::exact(4, {SubspaceBasis::from_span(span)});
    const auto out = compose_relation(relation, cone);
    REQUIRE(out.subspaces().size() == 1);
    CHECK(subspace_gap(out.subspaces()[0], cone.subspaces()[0]) < 1e-10);
  }
  SUBCASE("empty relation or cone gives the empty cone") {
    const auto relation = twisted_graph_relation(Mat::Identity(2, 2));
    CHECK(compose_relation(relation, ConeSet::empty_exact(2)).empty());
    CHECK(compose_relation(ConeSet::empty_exact(4), line_cone( 0, 1)).empty());
  }
}
