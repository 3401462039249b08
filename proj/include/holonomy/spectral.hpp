#pragma once

// Hermitian eigendecomposition for small dense matrices and smooth
// eigenvector-branch continuation along parameter paths.
//
// The 2x2 case is solved in closed form; larger matrices use cyclic complex
// Jacobi rotations.  Both paths are deterministic: identical input bits give
// identical output bits, and every eigenvector's global phase is fixed by
// making its largest-magnitude amplitude real and positive.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "holonomy/core.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/hamiltonian.hpp"

namespace holonomy {

inline constexpr double kDefaultGapTol = 1e-8;
// Consecutive same-band overlap magnitude below this means the sampling can
// no longer distinguish branch continuation from a band jump.  The guard is
// a heuristic, not a sharp boundary: comparisons leave rounding slack so the
// coarsest legal circuits (overlap exactly 1/2) stay usable.
inline constexpr double kSectionOverlapMin = 0.5;
inline constexpr double kSectionOverlapSlack = 1e-12;

struct EigenSystem {
  Eigen::VectorXd eigenvalues;             // ascending
  std::vector<QuantumState> eigenvectors;  // orthonormal; k-th pairs with eigenvalues[k]
};

namespace detail {

inline void check_hermitian_input(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols() || h.rows() < 2)
    throw DomainError("eigh: matrix must be square with dimension >= 2");
  if (!h.allFinite()) throw DomainError("eigh: non-finite entry");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double deviation = (h - h.adjoint().eval()).cwiseAbs().maxCoeff();
  if (deviation > 1e-10 * scale)
    throw DomainError("eigh: matrix is not Hermitian, max |H - H^dagger| = " +
                      std::to_string(deviation));
}

// Largest-magnitude amplitude made real positive (first maximum wins).
inline void fix_global_phase(Eigen::VectorXcd& v) {
  Eigen::Index best = 0;
  double best_mag = std::abs(v(0));
  for (Eigen::Index k = 1; k < v.size(); ++k) {
    const double mag = std::abs(v(k));
    if (mag > best_mag) {
      best = k;
      best_mag = mag;
    }
  }
  if (best_mag == 0.0) throw NumericError("eigh: zero eigenvector");
  v *= std::conj(v(best)) / best_mag;
  v(best) = Complex(std::abs(v(best)), 0.0);  // clear rounding residue
}

// Closed form for the 2x2 Hermitian block [[a, b], [conj(b), d]].
inline EigenSystem eigh2(const Eigen::MatrixXcd& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const Complex b = h(0, 1);
  const double bmag = std::abs(b);

  Eigen::VectorXd vals(2);
  Eigen::VectorXcd lo(2), hi(2);
  if (bmag == 0.0) {
    if (a <= d) {
      vals << a, d;
      lo << 1, 0;
      hi << 0, 1;
    } else {
      vals << d, a;
      lo << 0, 1;
      hi << 1, 0;
    }
  } else {
    const double mid = 0.5 * (a + d);
    const double delta = 0.5 * (a - d);
    const double split = std::hypot(delta, bmag);
    vals << mid - split, mid + split;
    // Eigenvector of the larger eigenvalue, picking the cancellation-free row.
    if (delta >= 0.0) {
      hi << Complex(delta + split, 0.0), std::conj(b);
    } else {
      hi << b, Complex(split - delta, 0.0);
    }
    hi.normalize();
    // The orthogonal complement spans the lower eigenspace.
    lo << -std::conj(hi(1)), std::conj(hi(0));
  }

  fix_global_phase(lo);
  fix_global_phase(hi);
  return EigenSystem{std::move(vals),
                     {QuantumState::normalized(std::move(lo)),
                      QuantumState::normalized(std::move(hi))}};
}

// Cyclic complex Jacobi.  Each sweep zeroes every off-diagonal pair (p, q)
// via the unitary plane rotation W with
//   W(p,p) = c,  W(p,q) = -s e^{i phi},  W(q,p) = s e^{-i phi},  W(q,q) = c,
// where phi = arg A(p,q) and (c, s) is the classic symmetric Jacobi pair for
// the real matrix [[a_pp, |a_pq|], [|a_pq|, a_qq]].
inline EigenSystem eigh_jacobi(Eigen::MatrixXcd a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) a(k, k) = Complex(a(k, k).real(), 0.0);

  const double scale = std::max(a.norm(), 1e-300);
  const double stop = 1e-15 * scale;
  constexpr int kMaxSweeps = 64;

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) <= stop) break;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-18 * scale) continue;

        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (app - aqq) / (2.0 * mag);  // cot(2 theta)
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex phase = apq / mag;  // e^{i phi}

        const Eigen::VectorXcd colp = a.col(p), colq = a.col(q);
        a.col(p) = c * colp + s * std::conj(phase) * colq;
        a.col(q) = -s * phase * colp + c * colq;
        const Eigen::RowVectorXcd rowp = a.row(p), rowq = a.row(q);
        a.row(p) = c * rowp + s * phase * rowq;
        a.row(q) = -s * std::conj(phase) * rowp + c * rowq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);

        const Eigen::VectorXcd vp = v.col(p), vq = v.col(q);
        v.col(p) = c * vp + s * std::conj(phase) * vq;
        v.col(q) = -s * phase * vp + c * vq;
      }
    }
  }
  if (sweep == kMaxSweeps)
    throw NumericError("eigh: Jacobi sweeps failed to converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() < a(y, y).real();
  });

  Eigen::VectorXd vals(n);
  std::vector<QuantumState> vecs;
  vecs.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    vals(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    Eigen::VectorXcd col = v.col(order[static_cast<std::size_t>(k)]);
    fix_global_phase(col);
    vecs.push_back(QuantumState::normalized(std::move(col)));
  }
  return EigenSystem{std::move(vals), std::move(vecs)};
}

}  // namespace detail

// Hermitian eigendecomposition, eigenvalues ascending, deterministic phases.
inline EigenSystem eigh(const Eigen::MatrixXcd& h) {
  detail::check_hermitian_input(h);
  return (h.rows() == 2) ? detail::eigh2(h) : detail::eigh_jacobi(h);
}

// Minimal gap between the chosen band and its spectral neighbours.
inline double band_gap(const Eigen::VectorXd& eigenvalues, Eigen::Index band) {
  double gap = std::numeric_limits<double>::infinity();
  if (band > 0) gap = std::min(gap, eigenvalues(band) - eigenvalues(band - 1));
  if (band + 1 < eigenvalues.size())
    gap = std::min(gap, eigenvalues(band + 1) - eigenvalues(band));
  return gap;
}

// One eigenvector branch sampled along a path, with a gauge label recording
// how the per-sample phases were fixed.
struct StateSection {
  ParamPath path;
  int band_index;
  std::vector<QuantumState> states;  // one per path sample
  std::string gauge_label;
};

// Follows the band of given ascending-eigenvalue rank along the path,
// rephasing each state so consecutive overlaps are real and positive
// (discrete parallel transport).  The first state's global phase comes from
// eigh's largest-amplitude-real-positive convention.
//
// Degenerate samples (gap < gap_tol) and samples whose same-band overlap
// drops below kSectionOverlapMin are refused: rank-following is unreliable
// there and the caller must refine the sampling or reroute the path.
inline StateSection continue_branch(const HamiltonianFamily& family, const ParamPath& path,
                                    int band_index, double gap_tol = kDefaultGapTol) {
  if (band_index < 0 || band_index >= family.dimension())
    throw DomainError("continue_branch: band index " + std::to_string(band_index) +
                      " out of range for dimension " + std::to_string(family.dimension()));
  if (static_cast<std::size_t>(path.dimension()) != family.parameter_count())
    throw DomainError("continue_branch: path dimension does not match family parameters");

  std::vector<QuantumState> states;
  states.reserve(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    const EigenSystem es = eigh(evaluate(family, path[k]));
    const double gap = band_gap(es.eigenvalues, band_index);
    if (gap < gap_tol)
      throw DegeneracyError("continue_branch: spectral gap " + std::to_string(gap) +
                                " below tolerance at sample " + std::to_string(k),
                            k, gap);
    const QuantumState& raw = es.eigenvectors[static_cast<std::size_t>(band_index)];
    if (k == 0) {
      states.push_back(raw);
      continue;
    }
    const Complex c = overlap(states.back(), raw);
    if (std::abs(c) < kSectionOverlapMin - kSectionOverlapSlack)
      throw ResolutionError("continue_branch: consecutive overlap " +
                            std::to_string(std::abs(c)) + " below " +
                            std::to_string(kSectionOverlapMin) + " at sample " +
                            std::to_string(k) + "; refine the path sampling");
    states.push_back(raw.rephased(-std::arg(c)));
  }
  if (path.closed() && path.size() >= 2) {
    const double wrap = std::abs(overlap(states.back(), states.front()));
    if (wrap < kSectionOverlapMin - kSectionOverlapSlack)
      throw ResolutionError("continue_branch: closure overlap " + std::to_string(wrap) +
                            " below " + std::to_string(kSectionOverlapMin) +
                            "; refine the path sampling");
  }
  return StateSection{path, band_index, std::move(states), "parallel-transport"};
}

// Samples whose minimal adjacent eigenvalue gap is strictly below gap_tol,
// ascending by sample index.
inline std::vector<std::pair<std::size_t, double>> detect_degeneracies(
    const HamiltonianFamily& family, const ParamPath& path, double gap_tol) {
  if (static_cast<std::size_t>(path.dimension()) != family.parameter_count())
    throw DomainError("detect_degeneracies: path dimension does not match family parameters");
  std::vector<std::pair<std::size_t, double>> hits;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const EigenSystem es = eigh(evaluate(family, path[k]));
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index b = 0; b + 1 < es.eigenvalues.size(); ++b)
      gap = std::min(gap, es.eigenvalues(b + 1) - es.eigenvalues(b));
    if (gap < gap_tol) hits.emplace_back(k, gap);
  }
  return hits;
}

}  // namespace holonomy
