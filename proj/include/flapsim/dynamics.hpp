#pragma once

// Rigid-body motion in three contact regimes.
//
//   Airborne      6-DOF, fixed-step RK4, cycle-averaged wrench.
//   Ground        planar (x, y, yaw), Coulomb stick-slip, semi-implicit Euler
//                 on the instantaneous within-stroke forces.
//   WaterSurface  planar, cycle-averaged forces against linear water drag.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "flapsim/hydrostatics.hpp"

namespace flapsim {

enum class Mode { Airborne, Ground, WaterSurface };
const char* to_string(Mode m);

enum class Surface { Ground, Water };

struct RobotState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  /// Body to world.
  Eigen::Matrix3d attitude = Eigen::Matrix3d::Identity();
  Eigen::Vector3d body_rate = Eigen::Vector3d::Zero();
  Mode mode = Mode::Airborne;
  double time = 0.0;
};

struct BodyParams {
  double mass = 74e-6;
  /// Principal moments about body x (roll), y (pitch), z (yaw), kg m^2.
  Eigen::Vector3d inertia{1.5e-9, 1.5e-9, 2.0e-9};
  /// Lateral distance from the centre of mass to each wing's aerodynamic centre.
  double thrust_moment_arm = 6e-3;
  /// Height of the wings' aerodynamic centre above the centre of mass.
  double drag_center_height = 3e-3;
  double friction_coefficient = 0.3;
  double gravity = 9.81;
  /// Effective radius of the leg footprint for yaw friction.
  double yaw_contact_radius = 4e-3;
  /// z of the centre of mass when standing on the surface.
  double contact_height = 0.0;
  /// Aerodynamic yaw damping while airborne (N m s / rad).
  double yaw_damping = 2e-8;

  double weight() const { return mass * gravity; }
  void validate() const;
};

/// Body-frame force and torque, excluding gravity.
struct Wrench {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();
};

class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxStep = 2e-4;

/// Throws NumericalAbort naming the first non-finite component.
void check_finite(const RobotState& state);

/// One RK4 step of the airborne equations of motion. dt in (0, 2e-4].
RobotState step(const RobotState& state, const Wrench& wrench, const BodyParams& params, double dt);

/// Closest rotation by Gram-Schmidt on the columns.
Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& r);

double tilt_angle(const Eigen::Matrix3d& attitude);
double yaw_angle(const Eigen::Matrix3d& attitude);
Eigen::Matrix3d yaw_rotation(double yaw);

/// In-plane load in the body frame.
struct PlanarLoad {
  double forward_force = 0.0;
  double yaw_torque = 0.0;
};

/// Stick-slip step: the body only starts to slide while the drive exceeds
/// mu m g (mu m g r for yaw), and kinetic friction of the same size opposes
/// sliding until it stops.
RobotState ground_step(const RobotState& state, const PlanarLoad& load, const BodyParams& params,
                       double dt);

/// Defaults are the output of calibrate_water_drag() for the bundled water
/// configuration (0.5 cm/s line speed, 20 deg/s differential turn).
struct WaterDrag {
  /// N s/m
  double linear = 2.49011e-3;
  /// N m s/rad
  double yaw = 2.59886e-8;
};

struct WaterStepResult {
  RobotState state;
  /// Vertical thrust exceeded the weight; the film holds the robot anyway.
  bool surface_bound = false;
};

WaterStepResult water_step(const RobotState& state, const PlanarLoad& load, double vertical_thrust,
                           const FlotationReport& legs, const BodyParams& params,
                           const WaterDrag& drag, double dt);

struct TouchdownConfig {
  double topple_threshold_deg = 30.0;
  double film_break_speed = 0.3;
  /// Time for the floating body to stop oscillating after the last leg lands.
  double water_settle_time = 0.05;
};

enum class EventKind {
  Liftoff,
  UprightLanding,
  Toppled,
  WaterLanding,
  FilmBroken,
  LegContact,
  Settled,
  SurfaceBound,
};
const char* to_string(EventKind k);

struct ModeEvent {
  EventKind kind = EventKind::Liftoff;
  double time = 0.0;
  double tilt = 0.0;
  double vertical_speed = 0.0;
  int leg = -1;
};

/// Touchdown detection for an airborne state. Returns nothing while airborne
/// above the surface or when moving upward.
std::optional<ModeEvent> detect_mode_transition(const RobotState& state, const BodyParams& params,
                                                Surface surface, const TouchdownConfig& cfg,
                                                const FlotationReport* flotation = nullptr);

/// Leg-by-leg contact events following a water touchdown, ending in Settled.
std::vector<ModeEvent> water_touchdown_sequence(const RobotState& at_contact,
                                                const LegGeometry& legs,
                                                const TouchdownConfig& cfg);

/// Put a touched-down body on the surface: level, at rest, planar mode.
RobotState settle_on_surface(const RobotState& state, const BodyParams& params, Mode mode);

}  // namespace flapsim
