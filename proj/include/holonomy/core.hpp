#pragma once

// Foundational value types shared by every engine: phases canonicalized to
// (-pi, pi], finite-dimensional unit kets, parameter points and sampled
// parameter paths.  All types are immutable after construction and may be
// shared freely between threads.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <utility>
#include <vector>

#include "holonomy/errors.hpp"

namespace holonomy {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Default tolerances: construction-level checks vs physics-level assertions.
inline constexpr double kNormTol = 1e-12;
inline constexpr double kPhysicsTol = 1e-9;
// Overlap magnitude below which a relative phase is numerically meaningless.
inline constexpr double kOrthTol = 1e-8;

// Reduces an angle to the canonical representative in (-pi, pi].
// pi is kept on the positive side so a fermionic sign flip reads as +pi.
inline double canonicalize_angle(double x) {
  if (!std::isfinite(x)) throw DomainError("canonicalize_phase: non-finite angle");
  double y = std::remainder(x, kTwoPi);  // [-pi, pi]
  if (y <= -kPi) y += kTwoPi;
  return y;
}

// A geometric phase, stored canonically in (-pi, pi].
class GeometricPhase {
 public:
  GeometricPhase() = default;
  explicit GeometricPhase(double radians) : value_(canonicalize_angle(radians)) {}
  double value() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

inline GeometricPhase canonicalize_phase(double radians) { return GeometricPhase(radians); }

// min over integer k of |a - b - 2 pi k|, always in [0, pi].
inline double phase_distance(double a, double b) {
  return std::abs(canonicalize_angle(a - b));
}
inline double phase_distance(GeometricPhase a, GeometricPhase b) {
  return phase_distance(a.value(), b.value());
}

// Finite-dimensional ket with unit Euclidean norm (within kNormTol).
class QuantumState {
 public:
  explicit QuantumState(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() < 2) throw DomainError("QuantumState: dimension must be >= 2");
    if (!amps_.allFinite()) throw DomainError("QuantumState: non-finite amplitude");
    const double norm = amps_.norm();
    if (std::abs(norm - 1.0) > kNormTol)
      throw DomainError("QuantumState: norm deviates from 1 by " +
                        std::to_string(std::abs(norm - 1.0)));
  }

  // Rescales an arbitrary non-zero vector to unit norm.
  static QuantumState normalized(Eigen::VectorXcd amplitudes) {
    if (!amplitudes.allFinite()) throw DomainError("QuantumState: non-finite amplitude");
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw DomainError("QuantumState: cannot normalize a zero vector");
    amplitudes /= norm;
    return QuantumState(std::move(amplitudes));
  }

  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
  Eigen::Index dimension() const noexcept { return amps_.size(); }

  // Multiplies by exp(i angle); norm unchanged.
  QuantumState rephased(double angle) const {
    return QuantumState(amps_ * std::polar(1.0, angle));
  }
  QuantumState rephased(Complex unit_factor) const {
    return QuantumState::normalized(amps_ * unit_factor);
  }

 private:
  Eigen::VectorXcd amps_;
};

// <a|b>; Eigen's dot conjugates the left factor.
inline Complex overlap(const QuantumState& a, const QuantumState& b) {
  if (a.dimension() != b.dimension()) throw DomainError("overlap: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

// A point in parameter space, e.g. (x, y) or (r, phi).
class ParameterPoint {
 public:
  explicit ParameterPoint(Eigen::VectorXd coordinates) : coords_(std::move(coordinates)) {
    if (coords_.size() < 1) throw DomainError("ParameterPoint: dimension must be >= 1");
    if (!coords_.allFinite()) throw DomainError("ParameterPoint: non-finite coordinate");
  }
  ParameterPoint(std::initializer_list<double> coordinates)
      : ParameterPoint(Eigen::Map<const Eigen::VectorXd>(coordinates.begin(),
                                                         static_cast<Eigen::Index>(
                                                             coordinates.size()))) {}

  const Eigen::VectorXd& coordinates() const noexcept { return coords_; }
  Eigen::Index dimension() const noexcept { return coords_.size(); }
  double operator[](Eigen::Index i) const { return coords_(i); }

 private:
  Eigen::VectorXd coords_;
};

// Ordered parameter samples along a (possibly closed) discretized path.
// Closure is implicit: for a closed path the first sample is NOT repeated at
// the end, and the closing edge runs from the last sample back to the first.
class ParamPath {
 public:
  ParamPath(std::vector<ParameterPoint> samples, bool closed)
      : samples_(std::move(samples)), closed_(closed) {
    if (samples_.empty()) throw DomainError("ParamPath: no samples");
    const Eigen::Index dim = samples_.front().dimension();
    for (const auto& p : samples_)
      if (p.dimension() != dim) throw DomainError("ParamPath: mixed sample dimensions");
    if (closed_) {
      if (samples_.size() < 3) throw DomainError("ParamPath: closed path needs >= 3 samples");
      if (samples_.front().coordinates() == samples_.back().coordinates())
        throw DomainError(
            "ParamPath: closed path must not repeat the first sample at the end "
            "(closure is implicit)");
    }
  }

  const std::vector<ParameterPoint>& samples() const noexcept { return samples_; }
  const ParameterPoint& operator[](std::size_t k) const { return samples_[k]; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool closed() const noexcept { return closed_; }
  Eigen::Index dimension() const noexcept { return samples_.front().dimension(); }

 private:
  std::vector<ParameterPoint> samples_;
  bool closed_;
};

// Closed circle in a 2-coordinate parameter plane, traversed |winding| times
// (negative winding = clockwise), sampled at `samples` points.
inline ParamPath make_circle_path(double center_x, double center_y, double radius,
                                  int winding, std::size_t samples) {
  if (winding == 0) throw DomainError("make_circle_path: winding must be non-zero");
  if (samples < 3) throw DomainError("make_circle_path: need >= 3 samples");
  if (!(radius > 0.0)) throw DomainError("make_circle_path: radius must be positive");
  std::vector<ParameterPoint> pts;
  pts.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double theta = kTwoPi * winding * (static_cast<double>(k) / samples);
    pts.push_back(ParameterPoint{center_x + radius * std::cos(theta),
                                 center_y + radius * std::sin(theta)});
  }
  return ParamPath(std::move(pts), /*closed=*/true);
}

// Closed circuit for polar-parameterized families (r, phi): the radius stays
// fixed and phi sweeps 0 -> 2 pi * winding.
inline ParamPath make_polar_circuit(double radius, int winding, std::size_t samples) {
  if (winding == 0) throw DomainError("make_polar_circuit: winding must be non-zero");
  if (samples < 3) throw DomainError("make_polar_circuit: need >= 3 samples");
  std::vector<ParameterPoint> pts;
  pts.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double phi = kTwoPi * winding * (static_cast<double>(k) / samples);
    pts.push_back(ParameterPoint{radius, phi});
  }
  return ParamPath(std::move(pts), /*closed=*/true);
}

}  // namespace holonomy
