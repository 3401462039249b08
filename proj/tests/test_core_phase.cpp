#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "holonomy/core.hpp"

using namespace holonomy;

namespace {

// Independent oracle: minimize |a - b - 2 pi k| by direct enumeration.
double phase_distance_brute(double a, double b) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = -4; k <= 4; ++k) best = std::min(best, std::abs(a - b - kTwoPi * k));
  return best;
}

}  // namespace

TEST_CASE("canonicalize_phase maps into (-pi, pi]") {
  CHECK(canonicalize_phase(0.0).value() == 0.0);
  CHECK(canonicalize_phase(3.0 * kPi).value() == doctest::Approx(kPi).epsilon(1e-15));
  // -pi is not in the canonical interval; it maps to +pi.
  CHECK(canonicalize_phase(-kPi).value() == kPi);
  CHECK(canonicalize_phase(kPi).value() == kPi);
  CHECK(canonicalize_phase(2.5).value() == 2.5);
  CHECK(canonicalize_phase(-2.5).value() == -2.5);
  CHECK(canonicalize_phase(kTwoPi).value() == 0.0);
}

TEST_CASE("canonicalize_phase rejects non-finite input") {
  CHECK_THROWS_AS(canonicalize_phase(std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(canonicalize_phase(std::nan("")), DomainError);
}

TEST_CASE("canonicalize_phase is exactly idempotent") {
  std::mt19937_64 rng(20260809);
  std::uniform_real_distribution<double> wide(-50.0, 50.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double once = canonicalize_phase(wide(rng)).value();
    CHECK(canonicalize_phase(once).value() == once);
    CHECK(once > -kPi);
    CHECK(once <= kPi);
  }
}

TEST_CASE("phase_distance examples") {
  CHECK(phase_distance(GeometricPhase(kPi), GeometricPhase(-kPi)) == 0.0);
  CHECK(phase_distance(GeometricPhase(0.1), GeometricPhase(0.4)) ==
        doctest::Approx(0.3).epsilon(1e-12));
  // Frozen from the enumeration oracle: min_k |3 - (-3) - 2 pi k| = 2 pi - 6.
  const double expected = phase_distance_brute(3.0, -3.0);
  CHECK(expected == doctest::Approx(kTwoPi - 6.0).epsilon(1e-15));
  CHECK(phase_distance(GeometricPhase(3.0), GeometricPhase(-3.0)) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("phase_distance agrees with the enumeration oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = angle(rng), b = angle(rng);
    CHECK(phase_distance(a, b) == doctest::Approx(phase_distance_brute(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("phase_distance is a pseudometric") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(-8.0, 8.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = angle(rng), b = angle(rng), c = angle(rng);
    const double dab = phase_distance(a, b);
    CHECK(dab >= 0.0);
    CHECK(dab <= kPi);
    CHECK(dab == phase_distance(b, a));
    CHECK(dab <= phase_distance(a, c) + phase_distance(c, b) + 1e-12);
    CHECK(phase_distance(a, a + kTwoPi) <= 1e-12);
  }
}

TEST_CASE("QuantumState enforces unit norm and dimension") {
  Eigen::VectorXcd v(2);
  v << Complex(1.0, 0.0), Complex(0.0, 0.0);
  CHECK_NOTHROW(QuantumState{v});

  Eigen::VectorXcd off(2);
  off << Complex(1.0, 0.0), Complex(0.5, 0.0);
  CHECK_THROWS_AS(QuantumState{off}, DomainError);
  CHECK(QuantumState::normalized(off).amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));

  Eigen::VectorXcd one(1);
  one << Complex(1.0, 0.0);
  CHECK_THROWS_AS(QuantumState{one}, DomainError);

  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(3);
  CHECK_THROWS_AS(QuantumState::normalized(zero), DomainError);
}

TEST_CASE("rephasing preserves norm and shifts overlap phase") {
  Eigen::VectorXcd v(2);
  v << Complex(0.6, 0.0), Complex(0.0, 0.8);
  const QuantumState s(v);
  const QuantumState r = s.rephased(0.7);
  CHECK(std::abs(overlap(s, r)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::arg(overlap(s, r)) == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("ParamPath validates closure conventions") {
  std::vector<ParameterPoint> tri{ParameterPoint{0.0, 0.0}, ParameterPoint{1.0, 0.0},
                                  ParameterPoint{0.0, 1.0}};
  CHECK_NOTHROW(ParamPath(tri, true));
  CHECK_NOTHROW(ParamPath(tri, false));

  // Closed paths must not repeat the first sample: closure is implicit.
  auto duplicated = tri;
  duplicated.push_back(tri.front());
  CHECK_THROWS_AS(ParamPath(duplicated, true), DomainError);

  std::vector<ParameterPoint> two{ParameterPoint{0.0}, ParameterPoint{1.0}};
  CHECK_THROWS_AS(ParamPath(two, true), DomainError);
  CHECK_NOTHROW(ParamPath(two, false));

  std::vector<ParameterPoint> mixed{ParameterPoint{0.0}, ParameterPoint{1.0, 2.0},
                                    ParameterPoint{3.0}};
  CHECK_THROWS_AS(ParamPath(mixed, false), DomainError);
}

TEST_CASE("circle and polar circuit constructors") {
  const ParamPath circle = make_circle_path(0.0, 0.0, 2.0, 1, 8);
  CHECK(circle.size() == 8);
  CHECK(circle.closed());
  CHECK(circle[0][0] == doctest::Approx(2.0));
  CHECK(circle[2][1] == doctest::Approx(2.0));  // quarter turn

  const ParamPath sweep = make_polar_circuit(1.5, -2, 12);
  CHECK(sweep.size() == 12);
  CHECK(sweep[0][0] == 1.5);
  CHECK(sweep[1][1] == doctest::Approx(-2.0 * kTwoPi / 12.0));
  CHECK_THROWS_AS(make_polar_circuit(1.0, 0, 12), DomainError);
  CHECK_THROWS_AS(make_circle_path(0, 0, 1.0, 1, 2), DomainError);
}
