#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "flapsim/hydrostatics.hpp"

using namespace flapsim;

namespace {
constexpr double g = 9.81;
double mg(double milligrams) { return milligrams * 1e-6 * g; }
}  // namespace

TEST_CASE("capillary length") {
  WaterProperties w;
  const double lc = capillary_length(w);
  CHECK(lc == doctest::Approx(std::sqrt(0.072 / (1000.0 * 9.81))).epsilon(1e-14));
  CHECK(lc == doctest::Approx(2.71e-3).epsilon(0.005));
  w.surface_tension *= 4.0;
  CHECK(capillary_length(w) == doctest::Approx(2.0 * lc));
  w.density = 1e300;
  CHECK(capillary_length(w) < 1e-100);
}

TEST_CASE("Bond number") {
  const WaterProperties w;
  LegGeometry l;
  l.radius = capillary_length(w);
  CHECK(bond_number(l, w) == doctest::Approx(1.0));
  l.radius = 0.0;
  CHECK(bond_number(l, w) == 0.0);
  // With the rounded l_c = 2.6 mm the printed formula gives about 9.2e-3.
  const double ratio = 0.25 / 2.6;
  CHECK(ratio * ratio == doctest::Approx(9.2e-3).epsilon(0.01));
  const FlotationReport r = flotation_check(LegGeometry{}, w, 95e-6);
  bool found = false;
  for (const auto& n : r.notes)
    if (n.key == "reported_bond_number") {
      found = true;
      CHECK(n.value == doctest::Approx(0.31));
    }
  CHECK(found);
}

TEST_CASE("curvature force") {
  const WaterProperties w;
  LegGeometry l;  // 50 mm total
  const CurvatureForces f = curvature_force(l, w);
  CHECK(f.maximum == doctest::Approx(7.2e-3).epsilon(1e-12));
  CHECK(to_milligram_force(f.maximum) == doctest::Approx(734.0).epsilon(0.002));
  CHECK(f.at_contact_angle == doctest::Approx(7.2e-3 * std::cos(3.0 * M_PI / 4.0) * -1.0));
  l.contact_angle_deg = 90.0;
  CHECK(std::abs(curvature_force(l, w).at_contact_angle) < 1e-15);
  LegGeometry twice;
  for (auto& s : twice.segment_lengths) s *= 2.0;
  CHECK(curvature_force(twice, w).maximum == doctest::Approx(2.0 * f.maximum));
  CHECK(curvature_force(twice, w).at_contact_angle == doctest::Approx(2.0 * f.at_contact_angle));
  WaterProperties w2 = w;
  w2.surface_tension *= 3.0;
  CHECK(curvature_force(l, w2).maximum == doctest::Approx(3.0 * curvature_force(l, w).maximum));
}

TEST_CASE("leg length sizing") {
  const WaterProperties w;
  CHECK(min_leg_length_worst_case(mg(80), w) == doctest::Approx(80e-6 * 9.81 / 0.144));
  CHECK(min_leg_length_worst_case(0.0, w) == 0.0);
  WaterProperties half = w;
  half.surface_tension *= 0.5;
  CHECK(min_leg_length_worst_case(mg(80), half) ==
        doctest::Approx(2.0 * min_leg_length_worst_case(mg(80), w)));

  const HuFitResult h = recommended_leg_length_hu_fit(mg(80), w);
  CHECK(h.max_curvature_force_dynes == doctest::Approx(48.0 * std::pow(78.48, 0.58)));
  CHECK(h.max_curvature_force_dynes == doctest::Approx(600.0).epsilon(0.05));
  CHECK(h.leg_length == doctest::Approx(0.042).epsilon(0.05));
  CHECK(recommended_leg_length_hu_fit(1e-5, w).max_curvature_force_dynes ==
        doctest::Approx(48.0).epsilon(1e-12));
  CHECK(h.max_curvature_force == doctest::Approx(h.max_curvature_force_dynes * 1e-5).epsilon(1e-12));

  for (double m = 10.0; m <= 1000.0; m += 10.0)
    CHECK(recommended_leg_length_hu_fit(mg(m), w).leg_length >= min_leg_length_worst_case(mg(m), w));

  const SelfConsistentLegs s = self_consistent_leg_length(80e-6, 3.6e-4, w);
  CHECK(s.leg_length > h.leg_length);
  CHECK(s.leg_length < 0.05);
  CHECK(s.history.size() >= 2);
  for (std::size_t i = 1; i < s.history.size(); ++i) CHECK(s.history[i] >= s.history[i - 1]);
  // Fixed-point oracle: the result reproduces itself.
  CHECK(recommended_leg_length_hu_fit((80e-6 + 3.6e-4 * s.leg_length) * 9.81, w).leg_length ==
        doctest::Approx(s.leg_length).epsilon(1e-8));
}

TEST_CASE("leg spacing") {
  LegGeometry l;
  CHECK(min_leg_spacing() == doctest::Approx(12e-3));
  CHECK(leg_spacing_ok(l));
  l.spacing = 10e-3;
  CHECK_FALSE(leg_spacing_ok(l));
  l.spacing = 12e-3;
  CHECK(leg_spacing_ok(l));
  const FlotationReport r = flotation_check(LegGeometry{.spacing = 10e-3}, WaterProperties{}, 95e-6);
  CHECK_FALSE(r.spacing_ok);
  bool warned = false;
  for (const auto& n : r.notes) warned |= n.key == "leg_spacing_warning";
  CHECK(warned);
}

TEST_CASE("liftoff requirement") {
  const WaterProperties w;
  const LiftoffRequirement r = liftoff_requirement(LegGeometry{}, w, mg(80));
  CHECK(r.lift_to_weight_ratio == doctest::Approx(1.0 + 7.2e-3 / mg(80)).epsilon(1e-12));
  CHECK(r.lift_to_weight_ratio == doctest::Approx(10.2).epsilon(0.01));
  CHECK(to_milligram_force(r.liftoff_force) == doctest::Approx(814.0).epsilon(0.003));
  LegGeometry none;
  none.segment_lengths = {0.0};
  CHECK(liftoff_requirement(none, w, mg(80)).lift_to_weight_ratio == doctest::Approx(1.0));
  double prev = 0.0;
  for (double len = 0.01; len < 0.1; len += 0.01) {
    LegGeometry l;
    l.segment_lengths = {len};
    const double q = liftoff_requirement(l, w, mg(80)).lift_to_weight_ratio;
    CHECK(q > prev);
    prev = q;
  }
  CHECK(liftoff_requirement(LegGeometry{}, w, mg(100)).lift_to_weight_ratio <
        liftoff_requirement(LegGeometry{}, w, mg(80)).lift_to_weight_ratio);
}

TEST_CASE("flotation check") {
  const WaterProperties w;
  const FlotationReport ok = flotation_check(LegGeometry{}, w, 95e-6);
  CHECK(ok.floats);
  CHECK(ok.flotation_margin > 0.0);
  CHECK(ok.buoyancy_negligible);
  CHECK(ok.buoyancy_ratio == doctest::Approx(0.25e-3 / capillary_length(w)));
  const FlotationReport heavy = flotation_check(LegGeometry{}, w, 1e-3);
  CHECK_FALSE(heavy.floats);
  CHECK(heavy.flotation_margin < 0.0);
  bool sinks = false;
  for (const auto& n : heavy.notes) sinks |= n.key == "sinks";
  CHECK(sinks);
  const FlotationReport empty = flotation_check(LegGeometry{}, w, 0.0);
  CHECK(empty.flotation_margin == doctest::Approx(empty.max_curvature_force));
}

TEST_CASE("dyne conversion round trip") {
  for (double f : {1e-7, 3.3e-4, 0.02}) {
    const double back = (f / kNewtonsPerDyne) * kNewtonsPerDyne;
    CHECK(std::abs(back - f) <= 1e-12 * f);
  }
}
