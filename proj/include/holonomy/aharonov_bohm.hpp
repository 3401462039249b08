#pragma once

// Solenoid vector-potential line integrals, winding-number topology, and the
// complementarity-sum checker.
//
// Natural units q = hbar = c = 1, so the phase per winding equals the flux;
// kChargeOverHbarC is the single rescaling knob for SI users.  Paths are
// polygonal and each segment's line integral of the azimuthal potential is
// the exact signed angle subtended at the axis times flux / 2 pi, so
// topological invariance holds to rounding rather than to quadrature error.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "holonomy/core.hpp"
#include "holonomy/errors.hpp"

namespace holonomy {

inline constexpr double kChargeOverHbarC = 1.0;
// Minimum allowed distance between the path and the solenoid axis.
inline constexpr double kAxisClearance = 1e-9;
inline constexpr double kWindingResidueTol = 1e-6;

using PlanarPoint = Eigen::Vector2d;

// Magnetic flux confined to an axis at `center`; the exterior potential is
// azimuthal with magnitude flux / (2 pi rho).
struct SolenoidField {
  double flux = 0.0;
  PlanarPoint center = PlanarPoint::Zero();

  SolenoidField(double flux_value, PlanarPoint axis_center)
      : flux(flux_value), center(std::move(axis_center)) {
    if (!std::isfinite(flux) || !center.allFinite())
      throw DomainError("SolenoidField: flux and center must be finite");
  }
};

// Piecewise-linear planar path; when closed the first vertex is not repeated.
class PlanarPath {
 public:
  PlanarPath(std::vector<PlanarPoint> vertices, bool closed)
      : vertices_(std::move(vertices)), closed_(closed) {
    if (vertices_.size() < 2) throw DomainError("PlanarPath: need >= 2 vertices");
    if (closed_ && vertices_.size() < 3)
      throw DomainError("PlanarPath: closed path needs >= 3 vertices");
    for (const auto& v : vertices_)
      if (!v.allFinite()) throw DomainError("PlanarPath: non-finite vertex");
    const std::size_t pairs = closed_ ? vertices_.size() : vertices_.size() - 1;
    for (std::size_t k = 0; k < pairs; ++k) {
      const std::size_t j = (k + 1) % vertices_.size();
      if (vertices_[k] == vertices_[j])
        throw DomainError("PlanarPath: consecutive vertices " + std::to_string(k) +
                          " and " + std::to_string(j) + " coincide");
    }
  }

  const std::vector<PlanarPoint>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  bool closed() const noexcept { return closed_; }

  // Regular polygon approximating a circle, traversed |winding| times.
  static PlanarPath circle(PlanarPoint center, double radius, int winding,
                           std::size_t samples_per_turn = 360) {
    if (winding == 0) throw DomainError("PlanarPath::circle: winding must be non-zero");
    if (!(radius > 0.0)) throw DomainError("PlanarPath::circle: radius must be positive");
    if (samples_per_turn < 3)
      throw DomainError("PlanarPath::circle: need >= 3 samples per turn");
    const std::size_t turns = static_cast<std::size_t>(winding > 0 ? winding : -winding);
    const std::size_t n = samples_per_turn * turns;
    std::vector<PlanarPoint> pts;
    pts.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = kTwoPi * winding * (static_cast<double>(k) / n);
      pts.emplace_back(center.x() + radius * std::cos(theta),
                       center.y() + radius * std::sin(theta));
    }
    return PlanarPath(std::move(pts), /*closed=*/true);
  }

 private:
  std::vector<PlanarPoint> vertices_;
  bool closed_;
};

namespace detail {

inline double point_segment_distance(const PlanarPoint& p, const PlanarPoint& a,
                                     const PlanarPoint& b) {
  const PlanarPoint ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - a - t * ab).norm();
}

inline void check_axis_clearance(const PlanarPath& path, const PlanarPoint& center) {
  const std::size_t n = path.size();
  const std::size_t edges = path.closed() ? n : n - 1;
  for (std::size_t k = 0; k < edges; ++k) {
    const std::size_t j = (k + 1) % n;
    if (point_segment_distance(center, path.vertices()[k], path.vertices()[j]) <
        kAxisClearance)
      throw SingularityError("path segment " + std::to_string(k) +
                             " passes within " + std::to_string(kAxisClearance) +
                             " of the solenoid axis");
  }
}

// Signed angle at `center` swept by the segment a -> b, in (-pi, pi).
inline double swept_angle(const PlanarPoint& center, const PlanarPoint& a,
                          const PlanarPoint& b) {
  const PlanarPoint u = a - center;
  const PlanarPoint v = b - center;
  const double cross = u.x() * v.y() - u.y() * v.x();
  const double dot = u.dot(v);
  return std::atan2(cross, dot);
}

// Sum of signed angle increments around `center` along the closed path.
inline double total_swept_angle(const PlanarPath& path, const PlanarPoint& center) {
  check_axis_clearance(path, center);
  const std::size_t n = path.size();
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    total += swept_angle(center, path.vertices()[k], path.vertices()[(k + 1) % n]);
  return total;
}

}  // namespace detail

// Exterior solenoid potential A = (flux / 2 pi) * (-(y - c_y), x - c_x) / rho^2.
// Curl-free away from the axis; its loop integral over a once-winding circuit
// equals the flux.
inline PlanarPoint vector_potential(const SolenoidField& field, const PlanarPoint& p) {
  const PlanarPoint d = p - field.center;
  const double rho2 = d.squaredNorm();
  if (!(std::sqrt(rho2) > kAxisClearance))
    throw SingularityError("vector_potential: point is on (or too near) the solenoid axis");
  return PlanarPoint(-d.y(), d.x()) * (field.flux / (kTwoPi * rho2));
}

// Signed number of times the closed path encircles `center`.
inline int winding_number(const PlanarPath& path, const PlanarPoint& center) {
  if (!path.closed()) throw DomainError("winding_number: path must be closed");
  const double turns = detail::total_swept_angle(path, center) / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= kWindingResidueTol)
    throw ResolutionError("winding_number: angle sum residue " +
                          std::to_string(std::abs(turns - rounded)) +
                          " too large; path resolution is inadequate");
  return static_cast<int>(rounded);
}

struct AbPhaseResult {
  double raw = 0.0;          // winding * flux, uncanonicalized
  GeometricPhase canonical;  // raw mod 2 pi in (-pi, pi]
  int winding = 0;
};

// Line integral of the solenoid potential around the closed polygonal path:
// each segment contributes exactly (flux / 2 pi) times its swept angle.
inline AbPhaseResult ab_phase(const SolenoidField& field, const PlanarPath& path) {
  if (!path.closed()) throw DomainError("ab_phase: path must be closed");
  const double total_angle = detail::total_swept_angle(path, field.center);
  const double turns = total_angle / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= kWindingResidueTol)
    throw ResolutionError("ab_phase: winding residue too large");
  const double raw = kChargeOverHbarC * field.flux * (total_angle / kTwoPi);
  return AbPhaseResult{raw, GeometricPhase(raw), static_cast<int>(rounded)};
}

struct ComplementarityResult {
  GeometricPhase sum;
  bool vanishes = false;
};

// sum = a + b mod 2 pi; vanishes when the sum is within tol of zero.
inline ComplementarityResult complementarity_check(GeometricPhase phase_a,
                                                   GeometricPhase phase_b, double tol) {
  const GeometricPhase sum(phase_a.value() + phase_b.value());
  return ComplementarityResult{sum, phase_distance(sum.value(), 0.0) <= tol};
}

// The value the complementarity conjecture predicts for the rest-of-system
// phase: the negation of the AB phase.  A hypothesis output only -- the
// first-principles computation of that phase is outside this toolkit.
inline GeometricPhase complementary_phase_hypothesis(const SolenoidField& field,
                                                     const PlanarPath& path) {
  return GeometricPhase(-ab_phase(field, path).raw);
}

}  // namespace holonomy
