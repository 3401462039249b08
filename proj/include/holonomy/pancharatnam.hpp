#pragma once

// Discrete geometric phases from overlap products.
//
// Two states are "in phase" when their overlap is real and positive (the
// intensity of their superposition is then maximal).  The relation is not
// transitive; around a closed chain the accumulated mismatch is the discrete
// geometric phase, returned here as the argument of the forward overlap
// product.  That argument is invariant under independent rephasing of every
// state in the chain.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "holonomy/core.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/spectral.hpp"

namespace holonomy {

// Ordered states with pairwise-nonorthogonal consecutive overlaps
// (wraparound pair included when closed).
class OverlapChain {
 public:
  OverlapChain(std::vector<QuantumState> states, bool closed, double orth_tol = kOrthTol)
      : states_(std::move(states)), closed_(closed), orth_tol_(orth_tol) {
    if (states_.size() < 2) throw DomainError("OverlapChain: need >= 2 states");
    const Eigen::Index dim = states_.front().dimension();
    for (const auto& s : states_)
      if (s.dimension() != dim) throw DomainError("OverlapChain: mixed state dimensions");
    const std::size_t pairs = closed_ ? states_.size() : states_.size() - 1;
    for (std::size_t k = 0; k < pairs; ++k) {
      const std::size_t j = (k + 1) % states_.size();
      if (std::abs(overlap(states_[k], states_[j])) <= orth_tol_)
        throw UndefinedPhaseError("OverlapChain: states " + std::to_string(k) + " and " +
                                  std::to_string(j) + " are (near-)orthogonal");
    }
  }

  static OverlapChain from_section(const StateSection& section) {
    return OverlapChain(section.states, section.path.closed());
  }

  const std::vector<QuantumState>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  bool closed() const noexcept { return closed_; }
  double orth_tol() const noexcept { return orth_tol_; }

 private:
  std::vector<QuantumState> states_;
  bool closed_;
  double orth_tol_;
};

// arg<a|b>, defined only when the overlap magnitude exceeds kOrthTol.
// Zero exactly when a and b are in phase.
inline GeometricPhase overlap_phase(const QuantumState& a, const QuantumState& b) {
  const Complex c = overlap(a, b);
  if (std::abs(c) <= kOrthTol)
    throw UndefinedPhaseError("overlap_phase: |<a|b>| = " + std::to_string(std::abs(c)) +
                              " is too small for a meaningful phase");
  return GeometricPhase(std::arg(c));
}

inline bool in_phase(const QuantumState& a, const QuantumState& b, double tol) {
  return std::abs(overlap_phase(a, b).value()) <= tol;
}

// arg of the forward product prod_k <psi_k | psi_{k+1 mod N}> around a closed
// chain.  The running product is renormalized when its magnitude gets small;
// dividing by a positive real leaves the argument untouched.
inline GeometricPhase loop_phase_discrete(const OverlapChain& chain) {
  if (!chain.closed()) throw DomainError("loop_phase_discrete: chain must be closed");
  Complex product(1.0, 0.0);
  const std::size_t n = chain.size();
  for (std::size_t k = 0; k < n; ++k) {
    product *= overlap(chain.states()[k], chain.states()[(k + 1) % n]);
    if (std::abs(product) < 1e-100) product /= std::abs(product);
  }
  if (std::abs(product) <= 0.0)
    throw UndefinedPhaseError("loop_phase_discrete: overlap product vanished");
  return GeometricPhase(std::arg(product));
}

struct TransportResult {
  std::vector<QuantumState> transported;
  GeometricPhase holonomy;
};

// Rephases each state so every consecutive overlap is real positive;
// transported[0] is the input's first state unchanged.  For closed chains the
// holonomy is the phase by which the transported continuation across the
// closing edge differs from the start state; it equals loop_phase_discrete of
// the same chain.  Open chains have holonomy 0 by convention.
inline TransportResult parallel_transport(const OverlapChain& chain) {
  std::vector<QuantumState> transported;
  transported.reserve(chain.size());
  transported.push_back(chain.states().front());
  for (std::size_t k = 1; k < chain.size(); ++k) {
    const Complex c = overlap(transported.back(), chain.states()[k]);
    transported.push_back(chain.states()[k].rephased(-std::arg(c)));
  }
  GeometricPhase holonomy;
  if (chain.closed())
    holonomy = overlap_phase(transported.back(), chain.states().front());
  return TransportResult{std::move(transported), holonomy};
}

// arg[<a|b><b|c><c|a>]: zero exactly when the in-phase relation is transitive
// for this triple.
inline GeometricPhase transitivity_defect(const QuantumState& a, const QuantumState& b,
                                          const QuantumState& c) {
  const Complex ab = overlap(a, b), bc = overlap(b, c), ca = overlap(c, a);
  for (const Complex& v : {ab, bc, ca})
    if (std::abs(v) <= kOrthTol)
      throw UndefinedPhaseError("transitivity_defect: a pairwise overlap is (near-)orthogonal");
  return GeometricPhase(std::arg(ab * bc * ca));
}

}  // namespace holonomy
