#pragma once

#include "qmpkit/errors.hpp"

namespace qmpkit {

// Physical constants of a run. Everything downstream scales as hbar^2 / mass,
// so tests can pin either one and vary the other.
struct Constants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    if (!(hbar > 0.0)) fail(ErrorCode::InvalidArgument, "hbar must be positive");
    if (!(mass > 0.0)) fail(ErrorCode::InvalidArgument, "mass must be positive");
  }

  // hbar^2 / (2 m), the prefactor of every kinetic-type term.
  double kinetic_scale() const { return hbar * hbar / (2.0 * mass); }
};

}  // namespace qmpkit
