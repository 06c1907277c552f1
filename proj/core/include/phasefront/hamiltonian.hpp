#pragma once

#include <nlohmann/json_fwd.hpp>

#include "phasefront/types.hpp"

namespace phasefront {

/// Standard symplectic form matrix J = [[0, I], [-I, 0]] on R^2d,
/// coordinates ordered (x, xi). sigma(X, Y) = <J X, Y>.
Mat symplectic_form_matrix(int d);

/// Quadratic form q(x,xi) = <(x,xi), Q (x,xi)> with Q complex symmetric and
/// Re Q positive semidefinite. Generates the evolution d/dt u + q^w u = 0.
struct QuadraticHamiltonian {
  int d = 0;   // phase-space half-dimension
  CMat Q;      // 2d x 2d

  /// Validates symmetry (1e-12) and Re Q >= -1e-10; throws std::invalid_argument.
  static QuadraticHamiltonian create(int d, CMat Q);

  static QuadraticHamiltonian from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // q = |xi|^2
  static QuadraticHamiltonian heat(int d);
  // q = i |xi|^2
  static QuadraticHamiltonian free_particle(int d);
  // q = i (|x|^2 + |xi|^2)
  static QuadraticHamiltonian harmonic_oscillator(int d);

  CMat Qxx() const { return Q.topLeftCorner(d, d); }
  CMat Qxxi() const { return Q.topRightCorner(d, d); }
  CMat Qxix() const { return Q.bottomLeftCorner(d, d); }
  CMat Qxixi() const { return Q.bottomRightCorner(d, d); }
};

/// Hamilton map F = J Q of a quadratic form.
struct HamiltonMap {
  int d = 0;
  CMat F;  // 2d x 2d
  CMat Q;  // source form, kept for engines that need the blocks
};

HamiltonMap hamilton_map(const QuadraticHamiltonian& q);

}  // namespace phasefront
