#pragma once

// Exchange-phase bookkeeping for identical particles.  A full circulation of
// one particle around an identical one equals two successive exchanges, so it
// contributes twice the single-exchange phase theta.  In three or more
// spatial dimensions the circulation deforms to the identity and theta is
// forced to 0 (boson) or pi (fermion); in two dimensions any theta is
// admissible ("anyons").  The dimensional restriction is enforced as a type
// invariant; the underlying topological deformation argument is a proof, not
// an algorithm, and is not modeled here.

#include <string>

#include "holonomy/core.hpp"
#include "holonomy/errors.hpp"

namespace holonomy {

class ExchangePhase {
 public:
  ExchangePhase(GeometricPhase theta, int spatial_dimension)
      : theta_(theta), spatial_dimension_(spatial_dimension) {
    if (spatial_dimension_ != 2 && spatial_dimension_ != 3)
      throw DomainError("ExchangePhase: spatial dimension must be 2 or 3");
    if (spatial_dimension_ == 3 && phase_distance(theta_.value(), 0.0) > kPhysicsTol &&
        phase_distance(theta_.value(), kPi) > kPhysicsTol)
      throw DomainError(
          "ExchangePhase: in 3 spatial dimensions a single exchange phase must be 0 "
          "(boson) or pi (fermion); got " +
          std::to_string(theta_.value()));
  }
  ExchangePhase(double theta_radians, int spatial_dimension)
      : ExchangePhase(GeometricPhase(theta_radians), spatial_dimension) {}

  GeometricPhase theta() const noexcept { return theta_; }
  int spatial_dimension() const noexcept { return spatial_dimension_; }

 private:
  GeometricPhase theta_;
  int spatial_dimension_;
};

// Phase acquired under a full circulation: two exchanges, i.e. 2 theta.
inline GeometricPhase circulation_phase(const ExchangePhase& x) {
  return GeometricPhase(2.0 * x.theta().value());
}

enum class ParticleKind { Boson, Fermion, Anyon };

struct Classification {
  ParticleKind kind;
  GeometricPhase theta;  // meaningful for every kind; the anyon's datum
};

inline Classification classify(const ExchangePhase& x, double tol) {
  if (phase_distance(x.theta().value(), 0.0) <= tol)
    return {ParticleKind::Boson, x.theta()};
  if (phase_distance(x.theta().value(), kPi) <= tol)
    return {ParticleKind::Fermion, x.theta()};
  return {ParticleKind::Anyon, x.theta()};
}

inline const char* to_string(ParticleKind kind) {
  switch (kind) {
    case ParticleKind::Boson: return "Boson";
    case ParticleKind::Fermion: return "Fermion";
    case ParticleKind::Anyon: return "Anyon";
  }
  return "?";
}

}  // namespace holonomy
