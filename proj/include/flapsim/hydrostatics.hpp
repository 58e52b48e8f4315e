#pragma once

// Static flotation of a robot standing on horizontal hydrophobic legs.
//
// Surface tension supports the legs through the curvature force
// F_C = 2 sigma L |cos(theta)| (submerged angle fixed at 90 deg), which peaks
// at 2 sigma L. Buoyancy is only estimated through the ratio w / l_c.

#include <string>
#include <vector>

namespace flapsim {

struct WaterProperties {
  double surface_tension = 0.072;  // N/m
  double density = 1000.0;         // kg/m^3
  double gravity = 9.81;           // m/s^2

  void validate() const;
};

struct LegGeometry {
  int leg_count = 3;
  double radius = 0.25e-3;
  std::vector<double> segment_lengths{25e-3, 12.5e-3, 12.5e-3};
  double spacing = 15e-3;
  /// kg/m; carbon fibre rod of 0.5 mm diameter is 3.6 mg/cm.
  double linear_density = 3.6e-4;
  double contact_angle_deg = 135.0;
  double submerged_angle_deg = 90.0;

  double total_length() const;
  double mass() const { return linear_density * total_length(); }
  void validate() const;
};

/// Free-form remark attached to a report, keyed for machine consumers.
struct ReportNote {
  std::string key;
  std::string message;
  double value = 0.0;
};

struct FlotationReport {
  double capillary_length = 0.0;
  double bond_number = 0.0;
  double max_curvature_force = 0.0;
  double curvature_force = 0.0;
  double buoyancy_ratio = 0.0;
  double weight = 0.0;
  double flotation_margin = 0.0;
  double liftoff_force = 0.0;
  double lift_to_weight_ratio = 0.0;
  bool floats = false;
  bool buoyancy_negligible = false;
  bool spacing_ok = false;
  std::vector<ReportNote> notes;
};

inline constexpr double kNewtonsPerDyne = 1e-5;
/// Minimum gap between adjacent legs so their dimples do not interact.
inline constexpr double kMinLegSpacing = 12e-3;
/// Lift-to-weight ratio needed to leave the surface, observed for the
/// water-lily beetle; printed alongside our own q for comparison.
inline constexpr double kBiologicalLiftToWeight = 3.4;
/// Reference-design Bond number, which disagrees with (w/l_c)^2 for the same legs.
inline constexpr double kReportedBondNumber = 0.31;
/// w/l_c below this counts as "buoyancy negligible".
inline constexpr double kBuoyancyNegligibleRatio = 0.2;

double capillary_length(const WaterProperties& water);

/// Bo = (w / l_c)^2.
double bond_number(const LegGeometry& legs, const WaterProperties& water);

struct CurvatureForces {
  double at_contact_angle = 0.0;
  double maximum = 0.0;
};
CurvatureForces curvature_force(const LegGeometry& legs, const WaterProperties& water);

/// Shortest total leg length whose maximum curvature force carries `weight` (N).
double min_leg_length_worst_case(double weight, const WaterProperties& water);

struct HuFitResult {
  double max_curvature_force_dynes = 0.0;
  double max_curvature_force = 0.0;  // N
  double leg_length = 0.0;           // m
};
/// Leg length from the water-strider power law max(F_c) = 48 F_W^0.58 (dynes).
HuFitResult recommended_leg_length_hu_fit(double weight, const WaterProperties& water = {});

struct SelfConsistentLegs {
  double leg_length = 0.0;
  double total_mass = 0.0;
  int iterations = 0;
  std::vector<double> history;
};
/// Re-applies the power law with the legs' own mass added until the length
/// stops changing.
SelfConsistentLegs self_consistent_leg_length(double body_mass, double linear_density,
                                              const WaterProperties& water = {},
                                              double tolerance = 1e-9, int max_iterations = 100);

double min_leg_spacing();
/// Boundary inclusive.
bool leg_spacing_ok(const LegGeometry& legs);

struct LiftoffRequirement {
  double liftoff_force = 0.0;
  double lift_to_weight_ratio = 0.0;
};
/// F_L = F_W + 2 sigma L and q = F_L / F_W.
LiftoffRequirement liftoff_requirement(const LegGeometry& legs, const WaterProperties& water,
                                       double weight);

FlotationReport flotation_check(const LegGeometry& legs, const WaterProperties& water,
                                double total_mass);

/// Newtons to milligram-force at standard gravity.
double to_milligram_force(double newtons, double gravity = 9.81);

}  // namespace flapsim
