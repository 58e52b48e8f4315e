#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "flapsim/aero.hpp"

using namespace flapsim;
using std::numbers::pi;

namespace {

// Independent brute-force mean body force: drag on v = r k dV/dt, unsaturated.
double brute_mean_force(const AeroParams& p, const WingKinematicsMap& m, double a, double mu,
                        double f, int n) {
  const double w = 2 * pi * f;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = 2 * pi * k / n;
    const double v = m.characteristic_radius() * m.stroke_gain * a * w *
                     (std::cos(x) + 2 * mu * std::cos(2 * x));
    sum += 0.5 * p.drag_coefficient * p.air_density * p.wing_area * v * std::abs(v);
  }
  return sum / n;
}

}  // namespace

TEST_CASE("instantaneous drag") {
  AeroParams p;
  CHECK(instantaneous_wing_drag(p, 0.0) == 0.0);
  CHECK(instantaneous_wing_drag(p, 0.7) == -instantaneous_wing_drag(p, -0.7));
  p.drag_coefficient = 1.0;
  p.air_density = 1.2;
  p.wing_area = 1e-4;
  CHECK(std::abs(instantaneous_wing_drag(p, 1.0)) == doctest::Approx(6.0e-5).epsilon(1e-12));
  CHECK(instantaneous_wing_drag(p, 1.0) < 0.0);
  CHECK(instantaneous_wing_drag(p, 0.8) == doctest::Approx(4.0 * instantaneous_wing_drag(p, 0.4)));
}

TEST_CASE("cycle-mean horizontal force") {
  const AeroParams p;
  const WingKinematicsMap m;

  SUBCASE("no net force without the second harmonic") {
    for (double a : {50.0, 150.0, 250.0})
      for (double f : {20.0, 60.0, 130.0}) {
        const DriveSignal s(0.0, a, 0.0, f);
        CHECK(std::abs(cycle_mean_horizontal_force(s, m, p)) < 1e-10 * peak_horizontal_force(s, m, p));
      }
  }
  SUBCASE("positive mu drives forward; brute-force oracle") {
    const DriveSignal s(0.0, 220.0, 0.3, 35.0);
    const double f = cycle_mean_horizontal_force(s, m, p);
    CHECK(f > 0.0);
    CHECK(f == doctest::Approx(brute_mean_force(p, m, 220.0, 0.3, 35.0, 1000000)).epsilon(1e-9));
    const DriveSignal r(0.0, 220.0, -0.3, 35.0);
    CHECK(cycle_mean_horizontal_force(r, m, p) == doctest::Approx(-f).epsilon(1e-9));
  }
  SUBCASE("bare rod gives exactly zero") {
    AeroParams rod = p;
    rod.wing_area = 0.0;
    CHECK(cycle_mean_horizontal_force(DriveSignal(0.0, 210.0, 0.3, 60.0), m, rod) == 0.0);
  }
  SUBCASE("quadrature has converged") {
    const DriveSignal s(0.0, 180.0, 0.2, 90.0);
    const double a = cycle_mean_horizontal_force(s, m, p, 1 << 14);
    const double b = cycle_mean_horizontal_force(s, m, p, 1 << 15);
    CHECK(std::abs(a - b) < 1e-8 * std::abs(b));
  }
  SUBCASE("closed form scale times the rectification factor") {
    const DriveSignal s(0.0, 200.0, 0.25, 80.0);
    CHECK(cycle_mean_horizontal_force(s, m, p) ==
          doctest::Approx(rectified_force_scale(m, p, 200.0, 80.0) * rectification_factor(0.25))
              .epsilon(1e-9));
  }
}

TEST_CASE("rectification factor") {
  double prev = -1.0;
  for (int i = -10; i <= 10; ++i) {
    const double mu = 0.05 * i;
    const double h = rectification_factor(mu);
    CHECK(h > prev);
    prev = h;
    // Odd in mu; at mu = 0 both sides are summation residue of order 1e-18.
    CHECK(std::abs(rectification_factor(-mu) + h) <= 1e-9 * std::abs(h) + 1e-15);
  }
  CHECK(rectification_factor(0.3) == doctest::Approx(0.218).epsilon(0.01));
  const RectificationInverse inv;
  for (double mu : {-0.3, -0.12, 0.0, 0.07, 0.3})
    CHECK(inv.solve(rectification_factor(mu)) == doctest::Approx(mu).epsilon(1e-3).scale(1e-3));
}

TEST_CASE("vertical thrust") {
  const AeroParams p;
  CHECK(cycle_mean_thrust(p, 0.0, 140.0) == 0.0);
  CHECK(frequency_weight(p, p.resonant_frequency) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cycle_mean_thrust(p, kReferenceHoverAmplitude, 140.0) ==
        doctest::Approx(74e-6 * 9.81).epsilon(1e-12));
  CHECK(cycle_mean_thrust(p, 200.0, 90.0) ==
        doctest::Approx(2.0 * cycle_mean_thrust(p, 100.0, 90.0)).epsilon(1e-14));
  double prev = -1.0;
  for (double a = 0.0; a <= 300.0; a += 10.0) {
    const double t = cycle_mean_thrust(p, a, 120.0);
    CHECK(t >= prev);
    prev = t;
  }
  CHECK(2.0 * per_wing_thrust_per_volt(p, 100.0) * 130.0 ==
        doctest::Approx(cycle_mean_thrust(p, 130.0, 100.0)));
  // Below resonance the weight rises monotonically toward 1.
  CHECK(frequency_weight(p, 60.0) < frequency_weight(p, 120.0));
  CHECK(cycle_mean_thrust(DriveSignal(0.0, 250.0, 0.0, 140.0), p) ==
        doctest::Approx(cycle_mean_thrust(p, 250.0, 140.0)));
}
