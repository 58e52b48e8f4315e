#include "flapsim/hydrostatics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace flapsim {

namespace {
double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
}  // namespace

void WaterProperties::validate() const {
  if (!(surface_tension > 0.0)) throw std::invalid_argument("water: surface_tension must be > 0");
  if (!(density > 0.0)) throw std::invalid_argument("water: density must be > 0");
  if (!(gravity > 0.0)) throw std::invalid_argument("water: gravity must be > 0");
}

double LegGeometry::total_length() const {
  return std::accumulate(segment_lengths.begin(), segment_lengths.end(), 0.0);
}

void LegGeometry::validate() const {
  if (leg_count <= 0) throw std::invalid_argument("legs: leg_count must be > 0");
  if (!(radius >= 0.0)) throw std::invalid_argument("legs: radius must be >= 0");
  for (double s : segment_lengths) {
    if (!(s >= 0.0)) throw std::invalid_argument("legs: segment lengths must be >= 0");
  }
  if (!(total_length() > 0.0)) throw std::invalid_argument("legs: total length must be > 0");
  if (!(spacing >= 0.0)) throw std::invalid_argument("legs: spacing must be >= 0");
  if (!(linear_density >= 0.0)) throw std::invalid_argument("legs: linear_density must be >= 0");
  if (!(contact_angle_deg > 0.0 && contact_angle_deg < 180.0)) {
    throw std::invalid_argument("legs: contact angle must be in (0, 180) deg");
  }
}

double capillary_length(const WaterProperties& water) {
  return std::sqrt(water.surface_tension / (water.density * water.gravity));
}

double bond_number(const LegGeometry& legs, const WaterProperties& water) {
  const double ratio = legs.radius / capillary_length(water);
  return ratio * ratio;
}

CurvatureForces curvature_force(const LegGeometry& legs, const WaterProperties& water) {
  const double max = 2.0 * water.surface_tension * legs.total_length();
  return {max * std::abs(std::cos(deg2rad(legs.contact_angle_deg))), max};
}

double min_leg_length_worst_case(double weight, const WaterProperties& water) {
  if (weight < 0.0) throw std::invalid_argument("min_leg_length_worst_case: negative weight");
  return weight / (2.0 * water.surface_tension);
}

HuFitResult recommended_leg_length_hu_fit(double weight, const WaterProperties& water) {
  if (!(weight > 0.0)) throw std::invalid_argument("recommended_leg_length_hu_fit: weight must be > 0");
  HuFitResult r;
  const double weight_dynes = weight / kNewtonsPerDyne;
  r.max_curvature_force_dynes = 48.0 * std::pow(weight_dynes, 0.58);
  r.max_curvature_force = r.max_curvature_force_dynes * kNewtonsPerDyne;
  r.leg_length = r.max_curvature_force / (2.0 * water.surface_tension);
  return r;
}

SelfConsistentLegs self_consistent_leg_length(double body_mass, double linear_density,
                                              const WaterProperties& water, double tolerance,
                                              int max_iterations) {
  SelfConsistentLegs out;
  double length = 0.0;
  for (int i = 0; i < max_iterations; ++i) {
    const double mass = body_mass + linear_density * length;
    const double next = recommended_leg_length_hu_fit(mass * water.gravity, water).leg_length;
    out.history.push_back(next);
    out.iterations = i + 1;
    const bool done = std::abs(next - length) <= tolerance * next;
    length = next;
    if (done) break;
  }
  out.leg_length = length;
  out.total_mass = body_mass + linear_density * length;
  return out;
}

double min_leg_spacing() { return kMinLegSpacing; }

bool leg_spacing_ok(const LegGeometry& legs) {
  // 1e-12 m slack so that a spacing written as 12 mm passes after unit conversion.
  return legs.spacing >= kMinLegSpacing - 1e-12;
}

LiftoffRequirement liftoff_requirement(const LegGeometry& legs, const WaterProperties& water,
                                       double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("liftoff_requirement: weight must be > 0");
  const double fl = weight + 2.0 * water.surface_tension * legs.total_length();
  return {fl, fl / weight};
}

FlotationReport flotation_check(const LegGeometry& legs, const WaterProperties& water,
                                double total_mass) {
  if (total_mass < 0.0) throw std::invalid_argument("flotation_check: negative mass");
  FlotationReport r;
  r.capillary_length = capillary_length(water);
  r.bond_number = bond_number(legs, water);
  const CurvatureForces fc = curvature_force(legs, water);
  r.max_curvature_force = fc.maximum;
  r.curvature_force = fc.at_contact_angle;
  r.buoyancy_ratio = legs.radius / r.capillary_length;
  r.buoyancy_negligible = r.buoyancy_ratio < kBuoyancyNegligibleRatio;
  r.weight = total_mass * water.gravity;
  r.flotation_margin = r.max_curvature_force - r.weight;
  r.floats = r.flotation_margin > 0.0;
  r.liftoff_force = r.weight + r.max_curvature_force;
  r.lift_to_weight_ratio = r.weight > 0.0 ? r.liftoff_force / r.weight
                                          : std::numeric_limits<double>::infinity();
  r.spacing_ok = leg_spacing_ok(legs);

  r.notes.push_back({"reported_bond_number",
                     "reference-design figure Bo = 0.31 is not reproduced by (w/l_c)^2; see "
                     "bond_number",
                     kReportedBondNumber});
  r.notes.push_back({"biological_lift_to_weight",
                     "water-lily beetle take-off lift-to-weight ratio for comparison",
                     kBiologicalLiftToWeight});
  if (!r.spacing_ok) {
    r.notes.push_back({"leg_spacing_warning",
                       "adjacent legs closer than the 12 mm dimple-interaction limit", legs.spacing});
  }
  if (!r.floats) {
    r.notes.push_back({"sinks", "weight exceeds the maximum curvature force", r.flotation_margin});
  }
  return r;
}

double to_milligram_force(double newtons, double gravity) { return newtons / gravity * 1e6; }

}  // namespace flapsim
