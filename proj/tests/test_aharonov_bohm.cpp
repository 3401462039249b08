#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "holonomy/aharonov_bohm.hpp"

using namespace holonomy;

namespace {

PlanarPath square(PlanarPoint center, double half_side) {
  return PlanarPath({center + PlanarPoint(-half_side, -half_side),
                     center + PlanarPoint(half_side, -half_side),
                     center + PlanarPoint(half_side, half_side),
                     center + PlanarPoint(-half_side, half_side)},
                    true);
}

PlanarPath noisy_polygon(PlanarPoint center, double radius, int winding,
                         std::size_t vertices, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  std::vector<PlanarPoint> pts;
  pts.reserve(vertices);
  for (std::size_t k = 0; k < vertices; ++k) {
    const double theta = kTwoPi * winding * (static_cast<double>(k) / vertices);
    const double rho = radius * (1.0 + jitter(rng));
    pts.emplace_back(center.x() + rho * std::cos(theta), center.y() + rho * std::sin(theta));
  }
  return PlanarPath(std::move(pts), true);
}

}  // namespace

TEST_CASE("vector potential of the exterior solenoid") {
  const SolenoidField field(kTwoPi, PlanarPoint::Zero());
  const PlanarPoint a = vector_potential(field, PlanarPoint(1.0, 0.0));
  CHECK(a.x() == 0.0);
  CHECK(a.y() == doctest::Approx(1.0).epsilon(1e-15));

  // |A| = |flux| / (2 pi rho).
  const SolenoidField f2(3.7, PlanarPoint(0.5, -0.25));
  const PlanarPoint p = f2.center + PlanarPoint(1.2, 1.6);  // distance 2
  CHECK(vector_potential(f2, p).norm() == doctest::Approx(3.7 / (2.0 * kTwoPi)).epsilon(1e-14));

  const SolenoidField off(0.0, PlanarPoint::Zero());
  CHECK(vector_potential(off, PlanarPoint(2.0, 1.0)).norm() == 0.0);

  CHECK_THROWS_AS(vector_potential(field, PlanarPoint::Zero()), SingularityError);
  CHECK_THROWS_AS(vector_potential(field, PlanarPoint(1e-12, 0.0)), SingularityError);
}

TEST_CASE("vector potential is curl-free away from the axis") {
  const SolenoidField field(2.5, PlanarPoint(0.3, -0.1));
  const double h = 1e-5;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const PlanarPoint p(coord(rng), coord(rng));
    if ((p - field.center).norm() < 0.3) continue;
    const double dAy_dx = (vector_potential(field, p + PlanarPoint(h, 0)).y() -
                           vector_potential(field, p - PlanarPoint(h, 0)).y()) /
                          (2 * h);
    const double dAx_dy = (vector_potential(field, p + PlanarPoint(0, h)).x() -
                           vector_potential(field, p - PlanarPoint(0, h)).x()) /
                          (2 * h);
    CHECK(std::abs(dAy_dx - dAx_dy) <= 1e-5);
  }
}

TEST_CASE("winding numbers of simple loops") {
  CHECK(winding_number(PlanarPath::circle(PlanarPoint::Zero(), 1.0, 1), PlanarPoint::Zero()) ==
        1);
  CHECK(winding_number(PlanarPath::circle(PlanarPoint::Zero(), 1.0, -1),
                       PlanarPoint::Zero()) == -1);
  CHECK(winding_number(PlanarPath::circle(PlanarPoint(10.0, 0.0), 1.0, 1),
                       PlanarPoint::Zero()) == 0);
  CHECK(winding_number(square(PlanarPoint::Zero(), 1.0), PlanarPoint::Zero()) == 1);
  for (int k = -3; k <= 3; ++k) {
    if (k == 0) continue;
    CHECK(winding_number(PlanarPath::circle(PlanarPoint::Zero(), 2.0, k, 90),
                         PlanarPoint::Zero()) == k);
  }
}

TEST_CASE("paths touching the axis are rejected") {
  // A vertex exactly on the axis.
  CHECK_THROWS_AS(winding_number(square(PlanarPoint(1.0, 1.0), 1.0), PlanarPoint(0.0, 0.0)),
                  SingularityError);
  // A segment crossing the axis between vertices.
  const PlanarPath seg({PlanarPoint(-1.0, 0.0), PlanarPoint(1.0, 0.0), PlanarPoint(0.0, 1.0)},
                       true);
  CHECK_THROWS_AS(winding_number(seg, PlanarPoint(0.0, 0.0)), SingularityError);
}

TEST_CASE("ab phase equals winding times flux") {
  const SolenoidField field(kPi / 2.0, PlanarPoint::Zero());
  const AbPhaseResult unit = ab_phase(field, PlanarPath::circle(PlanarPoint::Zero(), 1.0, 1));
  CHECK(unit.winding == 1);
  CHECK(unit.raw == doctest::Approx(kPi / 2.0).epsilon(1e-12));
  CHECK(unit.canonical.value() == doctest::Approx(kPi / 2.0).epsilon(1e-12));

  // Flux quantization: 2 pi per winding is invisible mod 2 pi.
  const SolenoidField quantum(kTwoPi, PlanarPoint::Zero());
  const AbPhaseResult q = ab_phase(quantum, noisy_polygon(PlanarPoint::Zero(), 1.3, 1, 400, 5));
  CHECK(q.raw == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(std::abs(q.canonical.value()) <= 1e-9);

  // Non-enclosing loop: no phase.
  const AbPhaseResult none = ab_phase(field, square(PlanarPoint(5.0, 5.0), 1.0));
  CHECK(none.winding == 0);
  CHECK(std::abs(none.raw) <= 1e-12);
}

TEST_CASE("ab phase is a homotopy invariant") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> fluxes(-8.0, 8.0);
  const PlanarPoint axis(0.1, -0.2);
  // All winding-1 representatives around the axis.
  const std::vector<PlanarPath> loops{
      PlanarPath::circle(axis, 1.0, 1),
      PlanarPath::circle(PlanarPoint(0.4, 0.1), 5.0, 1),
      noisy_polygon(axis, 1.0, 1, 1000, 77),
      square(PlanarPoint(0.3, 0.0), 2.0),
  };
  for (int trial = 0; trial < 10; ++trial) {
    const SolenoidField field(fluxes(rng), axis);
    const double reference = ab_phase(field, loops[0]).raw;
    for (const auto& loop : loops)
      CHECK(std::abs(ab_phase(field, loop).raw - reference) <= 1e-9);
  }
}

TEST_CASE("raw phase is additive in winding and linear in flux") {
  const PlanarPoint axis(0.0, 0.0);
  const SolenoidField field(1.234, axis);
  const double single = ab_phase(field, PlanarPath::circle(axis, 1.5, 1)).raw;
  for (int k = -3; k <= 3; ++k) {
    if (k == 0) continue;
    const double multi = ab_phase(field, PlanarPath::circle(axis, 1.5, k)).raw;
    CHECK(std::abs(multi - k * single) <= 1e-9);
  }

  const PlanarPath loop = noisy_polygon(axis, 2.0, 1, 300, 21);
  const double f1 = 0.37, f3 = 5.11, f2 = 0.5 * (f1 + f3);
  const double p1 = ab_phase(SolenoidField(f1, axis), loop).raw;
  const double p2 = ab_phase(SolenoidField(f2, axis), loop).raw;
  const double p3 = ab_phase(SolenoidField(f3, axis), loop).raw;
  CHECK(std::abs(p1 + p3 - 2.0 * p2) <= 1e-9);

  CHECK(ab_phase(SolenoidField(0.0, axis), loop).raw == 0.0);
}

TEST_CASE("complementarity checker") {
  CHECK(complementarity_check(GeometricPhase(kPi), GeometricPhase(-kPi), 1e-12).vanishes);
  CHECK(complementarity_check(GeometricPhase(0.7), GeometricPhase(kTwoPi - 0.7), 1e-9).vanishes);
  const ComplementarityResult off =
      complementarity_check(GeometricPhase(0.3), GeometricPhase(0.4), 1e-6);
  CHECK_FALSE(off.vanishes);
  CHECK(off.sum.value() == doctest::Approx(0.7).epsilon(1e-14));

  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> angle(-20.0, 20.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = angle(rng);
    CHECK(complementarity_check(GeometricPhase(a), GeometricPhase(-a), 1e-12).vanishes);
  }
}

TEST_CASE("hypothesis phase is the negated ab phase") {
  const PlanarPoint axis(0.0, 0.0);
  const SolenoidField field(kPi / 2.0, axis);
  const PlanarPath loop = PlanarPath::circle(axis, 1.0, 1);
  const GeometricPhase hyp = complementary_phase_hypothesis(field, loop);
  CHECK(hyp.value() == doctest::Approx(-kPi / 2.0).epsilon(1e-12));
  CHECK(complementary_phase_hypothesis(SolenoidField(0.0, axis), loop).value() == 0.0);

  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> fluxes(-6.0, 6.0);
  for (int trial = 0; trial < 50; ++trial) {
    const SolenoidField f(fluxes(rng), axis);
    const auto ab = ab_phase(f, loop);
    CHECK(complementarity_check(ab.canonical, complementary_phase_hypothesis(f, loop), 1e-9)
              .vanishes);
  }
}

TEST_CASE("planar path validation") {
  CHECK_THROWS_AS(PlanarPath({PlanarPoint(0, 0), PlanarPoint(1, 0)}, true), DomainError);
  CHECK_THROWS_AS(PlanarPath({PlanarPoint(0, 0), PlanarPoint(0, 0), PlanarPoint(1, 0)}, true),
                  DomainError);
  CHECK_THROWS_AS(PlanarPath::circle(PlanarPoint::Zero(), -1.0, 1), DomainError);
  CHECK_THROWS_AS(ab_phase(SolenoidField(1.0, PlanarPoint::Zero()),
                           PlanarPath({PlanarPoint(1, 0), PlanarPoint(2, 0)}, false)),
                  DomainError);
}
