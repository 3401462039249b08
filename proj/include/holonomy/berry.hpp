#pragma once

// Berry connection sampling, closed-loop phase integrals, gauge
// transformations, and single-valuedness audits.
//
// Phase convention: the loop phase is arg of the forward overlap product,
// whose continuum limit is F(C) = (1/i) \oint <Psi | grad_R Psi> . dR, i.e.
// \oint Im <Psi | dPsi>.  NOTE this is the NEGATIVE of the other common Berry
// convention gamma = i \oint <Psi | grad_R Psi> . dR.
//
// The closed-loop integral is computed via the discrete overlap product of a
// branch-continued section, which is gauge-invariant by construction; naive
// quadrature of connection samples exists only as a cross-check and is
// meaningful only in a gauge whose section is smooth and single-valued around
// the loop.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holonomy/core.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/hamiltonian.hpp"
#include "holonomy/pancharatnam.hpp"
#include "holonomy/spectral.hpp"

namespace holonomy {

inline constexpr double kAuditTol = 1e-6;
inline constexpr double kWindingCheckTol = 1e-9;
// Default finite-difference step, as a fraction of the coordinate scale.
inline constexpr double kConnectionStepScale = 1e-5;

// Berry connection components (radians per parameter unit) at a point.
struct ConnectionSample {
  ParameterPoint point;
  Eigen::VectorXd components;
};

// A pointwise gauge over parameter coordinates, for connection sampling.
using LocalGauge = std::function<double(const ParameterPoint&)>;

// A gauge along a circuit: a real function of the path parameter t in [0, 1]
// (the sample point is also provided for coordinate-dependent gauges).
// Closure is evaluated at t = 1, so multivalued angle gauges such as "half
// the swept angle" are expressible; for those no integer winding exists and
// none is declared.  A declared winding k asserts fn(1) - fn(0) = 2 pi k and
// is verified whenever the gauge is used on a closed path.
class GaugeFunction {
 public:
  using Fn = std::function<double(double, const ParameterPoint&)>;

  explicit GaugeFunction(Fn fn, std::string label = "gauge")
      : fn_(std::move(fn)), label_(std::move(label)) {}

  static GaugeFunction single_valued(Fn fn, std::string label = "gauge") {
    GaugeFunction g(std::move(fn), std::move(label));
    g.declared_winding_ = 0;
    return g;
  }
  static GaugeFunction with_winding(Fn fn, int winding, std::string label = "gauge") {
    GaugeFunction g(std::move(fn), std::move(label));
    g.declared_winding_ = winding;
    return g;
  }
  // Wraps a coordinate-only gauge; valid on paths that do not wrap a
  // periodic coordinate.
  static GaugeFunction from_coordinates(LocalGauge g, std::string label = "gauge") {
    return GaugeFunction([g = std::move(g)](double, const ParameterPoint& p) { return g(p); },
                         std::move(label));
  }

  double operator()(double t, const ParameterPoint& p) const {
    const double v = fn_(t, p);
    if (!std::isfinite(v)) throw DomainError("GaugeFunction: non-finite value");
    return v;
  }

  std::optional<int> declared_winding() const noexcept { return declared_winding_; }
  const std::string& label() const noexcept { return label_; }

 private:
  Fn fn_;
  std::string label_;
  std::optional<int> declared_winding_;
};

// fn(1, start) - fn(0, start): the gauge's total increase over one circuit.
inline double gauge_circuit_increase(const GaugeFunction& gauge, const ParamPath& path) {
  if (!path.closed()) throw DomainError("gauge_circuit_increase: path must be closed");
  const ParameterPoint& start = path[0];
  return gauge(1.0, start) - gauge(0.0, start);
}

inline void verify_declared_winding(const GaugeFunction& gauge, const ParamPath& path) {
  if (!gauge.declared_winding()) return;
  const double increase = gauge_circuit_increase(gauge, path);
  const double expected = kTwoPi * *gauge.declared_winding();
  if (std::abs(increase - expected) > kWindingCheckTol)
    throw DomainError("gauge '" + gauge.label() + "': declared winding " +
                      std::to_string(*gauge.declared_winding()) +
                      " does not match circuit increase " + std::to_string(increase));
}

namespace detail {

// Path parameter of sample k: closed paths close at t = 1, open paths end there.
inline double path_parameter(const ParamPath& path, std::size_t k) {
  const std::size_t n = path.size();
  if (path.closed()) return static_cast<double>(k) / static_cast<double>(n);
  return (n == 1) ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
}

}  // namespace detail

// Multiplies state k by exp(i g(t_k, R_k)).  Pointwise legal for any gauge;
// whether the result is single-valued around a closed circuit is the
// audit's business, not this function's.
inline StateSection apply_gauge(const StateSection& section, const GaugeFunction& gauge) {
  std::vector<QuantumState> gauged;
  gauged.reserve(section.states.size());
  for (std::size_t k = 0; k < section.states.size(); ++k)
    gauged.push_back(
        section.states[k].rephased(gauge(detail::path_parameter(section.path, k),
                                         section.path[k])));
  return StateSection{section.path, section.band_index, std::move(gauged),
                      section.gauge_label + "+" + gauge.label()};
}

// Berry connection by centered differences: component_j = Im <psi | d_j psi>
// with the stencil neighbours branch-continued and phase-aligned to the
// center state before differencing (O(step^2) accurate).  In that aligned
// gauge the components vanish identically; a non-trivial local gauge g adds
// grad g, the non-zero vector potential carried by a single-valued section.
//
// step <= 0 selects the default kConnectionStepScale * max(1, |coordinate|).
inline ConnectionSample connection_numeric(const HamiltonianFamily& family, int band,
                                           const ParameterPoint& point, double step = 0.0,
                                           const LocalGauge& local_gauge = {}) {
  if (band < 0 || band >= family.dimension())
    throw DomainError("connection_numeric: band index out of range");
  if (static_cast<std::size_t>(point.dimension()) != family.parameter_count())
    throw DomainError("connection_numeric: point dimension does not match family");
  if (step < 0.0 || !std::isfinite(step))
    throw DomainError("connection_numeric: step must be finite and >= 0");

  const auto band_state = [&](const ParameterPoint& p) {
    const EigenSystem es = eigh(evaluate(family, p));
    const double gap = band_gap(es.eigenvalues, band);
    if (gap < kDefaultGapTol)
      throw DegeneracyError("connection_numeric: degeneracy inside the stencil (gap " +
                                std::to_string(gap) + ")",
                            0, gap);
    return es.eigenvectors[static_cast<std::size_t>(band)];
  };

  const QuantumState center = band_state(point);
  const double g_center = local_gauge ? local_gauge(point) : 0.0;

  Eigen::VectorXd components(point.dimension());
  for (Eigen::Index j = 0; j < point.dimension(); ++j) {
    const double scale = std::max(1.0, std::abs(point[j]));
    const double h = (step > 0.0) ? step : kConnectionStepScale * scale;
    // Below ~64 ulp the stencil cannot resolve distinct coordinates and the
    // difference is pure cancellation noise.
    if (h < 64.0 * std::numeric_limits<double>::epsilon() * scale)
      throw NumericError("connection_numeric: step " + std::to_string(h) +
                         " is cancellation-dominated at coordinate " + std::to_string(j));

    Eigen::VectorXd fwd = point.coordinates(), bwd = point.coordinates();
    fwd(j) += h;
    bwd(j) -= h;
    const ParameterPoint pf(fwd), pb(bwd);

    // Align the neighbours to the center state (discrete parallel transport),
    // then apply the local gauge to all three stencil states.
    const auto aligned = [&](const ParameterPoint& p) {
      const QuantumState s = band_state(p);
      const Complex c = overlap(center, s);
      if (std::abs(c) < kSectionOverlapMin)
        throw ResolutionError("connection_numeric: stencil overlap below 0.5; reduce step");
      return s.rephased(-std::arg(c));
    };
    QuantumState sf = aligned(pf);
    QuantumState sb = aligned(pb);
    Complex of = overlap(center, sf);  // real positive by alignment
    Complex ob = overlap(center, sb);
    if (local_gauge) {
      of *= std::polar(1.0, local_gauge(pf) - g_center);
      ob *= std::polar(1.0, local_gauge(pb) - g_center);
    }
    components(j) = (of.imag() - ob.imag()) / (2.0 * h);
    if (!std::isfinite(components(j)))
      throw NumericError("connection_numeric: non-finite component");
  }
  return ConnectionSample{point, std::move(components)};
}

// F(C): the discrete loop phase of the (optionally gauged) branch-continued
// section over a closed path.  The overlap product ignores per-sample phase
// choices entirely, so a gauge argument changes the section but never the
// returned canonical phase; it is accepted here so callers can audit the
// section they actually integrated.
inline GeometricPhase loop_integral(const HamiltonianFamily& family, int band,
                                    const ParamPath& path,
                                    const GaugeFunction* gauge = nullptr,
                                    double gap_tol = kDefaultGapTol) {
  if (!path.closed()) throw DomainError("loop_integral: path must be closed");
  if (gauge) verify_declared_winding(*gauge, path);
  StateSection section = continue_branch(family, path, band, gap_tol);
  if (gauge) section = apply_gauge(section, *gauge);
  return loop_phase_discrete(OverlapChain::from_section(section));
}

struct SingleValuednessReport {
  GeometricPhase closure_phase;
  bool single_valued;
  bool sign_flip;
};

// Transports the band once around the closed path and compares the
// (optionally gauged) returning state against the start: closure_phase is
// the phase the end state carries relative to the start state, with the
// gauge evaluated at t = 1 for the circuit end.  single_valued when the
// closure phase vanishes, sign_flip when it is pi (tolerance kAuditTol).
inline SingleValuednessReport single_valuedness_audit(const HamiltonianFamily& family,
                                                      int band, const ParamPath& path,
                                                      const GaugeFunction* gauge = nullptr,
                                                      double gap_tol = kDefaultGapTol) {
  if (!path.closed()) throw DomainError("single_valuedness_audit: path must be closed");
  if (gauge) verify_declared_winding(*gauge, path);
  const StateSection section = continue_branch(family, path, band, gap_tol);
  // Transport continuation across the closing edge lands on the start state
  // times exp(-i holonomy); the gauged end state additionally carries the
  // gauge's circuit increase.
  const GeometricPhase holonomy =
      overlap_phase(section.states.back(), section.states.front());
  const double gauge_increase = gauge ? gauge_circuit_increase(*gauge, path) : 0.0;
  const GeometricPhase closure(gauge_increase - holonomy.value());
  return SingleValuednessReport{
      closure,
      phase_distance(closure.value(), 0.0) <= kAuditTol,
      phase_distance(closure.value(), kPi) <= kAuditTol,
  };
}

// Largest per-step violation of the local in-phase condition along a section:
// max_k |Im <psi_k | psi_{k+1}>| over consecutive pairs (closure excluded --
// the closing mismatch is the holonomy, not a transport defect).
inline double orthogonal_gauge_check(const StateSection& section) {
  if (section.states.empty())
    throw DomainError("orthogonal_gauge_check: empty section");
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < section.states.size(); ++k)
    worst = std::max(worst,
                     std::abs(overlap(section.states[k], section.states[k + 1]).imag()));
  return worst;
}

// Cross-check only: trapezoidal quadrature of connection samples along the
// path edges, including the literal closing edge.  Requires a path that is
// honestly closed in coordinate space (no periodic identification), and
// reproduces the loop phase only when the local gauge makes the section
// smooth and single-valued around the loop.
inline double loop_integral_quadrature(const HamiltonianFamily& family, int band,
                                       const ParamPath& path, double step = 0.0,
                                       const LocalGauge& local_gauge = {}) {
  if (!path.closed()) throw DomainError("loop_integral_quadrature: path must be closed");
  const std::size_t n = path.size();
  std::vector<Eigen::VectorXd> samples;
  samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    samples.push_back(connection_numeric(family, band, path[k], step, local_gauge).components);
  double integral = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = (k + 1) % n;
    const Eigen::VectorXd edge = path[j].coordinates() - path[k].coordinates();
    integral += 0.5 * (samples[k] + samples[j]).dot(edge);
  }
  return integral;
}

}  // namespace holonomy
