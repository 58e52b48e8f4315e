#pragma once

// Scenario description and the simulation loop that wires every module
// together: sensors -> controller -> mixer -> aero -> dynamics, with mode
// transitions, a power trace and per-tick telemetry.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flapsim/aero.hpp"
#include "flapsim/control.hpp"
#include "flapsim/dynamics.hpp"
#include "flapsim/energetics.hpp"
#include "flapsim/hydrostatics.hpp"
#include "flapsim/sensors.hpp"
#include "flapsim/waveform.hpp"

namespace flapsim {

/// Setpoint knot. The schedule interpolates linearly between knots and holds
/// the last one.
struct SetpointKnot {
  double t = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

struct DriveConfig {
  double frequency = 140.0;
  double offset_voltage = 0.0;
  VoltageEnvelope envelope;
  double mu_limit = kTypicalSecondHarmonicLimit;
};

struct OpenLoopDrive {
  WingCommand left;
  WingCommand right;
};

struct MetricsConfig {
  /// Window for speed, power and cost of transport; negative end = run end.
  double window_start = 0.0;
  double window_end = -1.0;
  /// Length of the trailing window for RMS errors.
  double rms_window = 1.0;
  /// |z - z_d| below which the altitude counts as reached.
  double reach_tolerance = 4e-3;
  double min_cot_distance = kDefaultMinCotDistance;
};

struct OutputConfig {
  std::string directory;
  bool trajectory = true;
  bool power = true;
  bool events = true;
};

struct Scenario {
  std::string name = "unnamed";
  int schema = 1;
  Mode initial_mode = Mode::Airborne;
  /// What an airborne robot lands on.
  Surface surface = Surface::Ground;
  double duration = 1.0;
  double dt = 5e-5;
  std::uint64_t seed = 1;

  Eigen::Vector3d initial_position = Eigen::Vector3d::Zero();
  Eigen::Vector3d initial_velocity = Eigen::Vector3d::Zero();
  double initial_yaw = 0.0;
  double initial_roll = 0.0;
  double initial_pitch = 0.0;

  BodyParams body;
  AeroParams aero;
  WingKinematicsMap wing;
  DriveConfig drive;
  ActuatorElectrical electrical;
  SensorConfig sensor;

  bool closed_loop = false;
  ControllerGains gains = ControllerGains::defaults();
  ControllerLimits limits;
  std::vector<SetpointKnot> schedule;
  /// Feed the schedule's lateral slope forward as the velocity setpoint.
  bool velocity_feedforward = true;
  OpenLoopDrive open_loop;

  WaterProperties water;
  LegGeometry legs;
  WaterDrag water_drag;
  TouchdownConfig touchdown;
  bool stop_on_touchdown = true;
  /// Constant body-z torque while airborne (N m), for yaw drift studies.
  double yaw_disturbance = 0.0;

  MetricsConfig metrics;
  OutputConfig output;

  /// Throws ConfigError listing every violation.
  void validate() const;
  MixerContext mixer_context() const;
  Setpoint setpoint_at(double t) const;
};

struct TrajectoryRow {
  double t = 0.0;
  RobotState truth;
  Setpoint setpoint;
  WingCommand left;
  WingCommand right;
  double thrust = 0.0;
  double a_z = 0.0;
  double tau_x = 0.0;
  double tau_y = 0.0;
  bool saturated = false;
};

struct RunSummary {
  std::string scenario;
  RobotState final_state;
  std::optional<ModeEvent> landing;
  /// Each axis: RMS of (truth - setpoint) over the trailing rms_window.
  Eigen::Vector3d rms_error = Eigen::Vector3d::Zero();
  double rms_lateral = 0.0;
  /// Mean z - z_d over the trailing rms_window.
  double mean_z_error = 0.0;
  /// First time |z - z_d| < reach_tolerance, or negative if never.
  double reach_time = -1.0;
  double mean_speed = 0.0;
  Eigen::Vector2d displacement = Eigen::Vector2d::Zero();
  double mean_yaw_rate = 0.0;
  double path_length = 0.0;
  double energy_rectified = 0.0;
  double energy_signed = 0.0;
  double mean_power = 0.0;
  CostOfTransport cot;
  int saturation_count = 0;
  bool surface_bound = false;
  bool lifted_off = false;
};

struct RunResult {
  RunSummary summary;
  std::vector<TrajectoryRow> trajectory;
  EnergyTrace power;
  std::vector<ModeEvent> events;
};

/// Deterministic simulation of a validated scenario. Throws NumericalAbort
/// on a non-finite state.
RunResult simulate(const Scenario& scenario);

/// Writes trajectory.csv, power.csv, events.csv and summary.json into `dir`.
void write_outputs(const RunResult& result, const Scenario& scenario, const std::string& dir);

// ---- experiments built on simulate() ----

struct SpeedCell {
  double amplitude = 0.0;
  double frequency = 0.0;
  double speed = 0.0;
  /// At or above resonance, or thrust at least the weight; not simulated.
  bool liftoff_regime = false;
};

/// Ground-mode mean speed over an amplitude x frequency grid. `base` supplies
/// physics, duration and metrics window; its drive commands are overridden.
std::vector<SpeedCell> ground_speed_sweep(const Scenario& base, const std::vector<double>& amplitudes,
                                          const std::vector<double>& frequencies);

/// True when speed is nondecreasing along both grid axes (liftoff cells skipped).
bool speed_grid_monotone(const std::vector<SpeedCell>& cells, double slack = 0.0);

struct CotRow {
  std::string label;
  double frequency = 0.0;
  double speed = 0.0;
  double mean_power = 0.0;
  CostOfTransport cot;
};

/// Ground runs at fixed amplitude for each frequency; with `hover` given, a
/// last row reports its mean power with the cost of transport not applicable.
std::vector<CotRow> cot_frequency_sweep(const Scenario& ground, double amplitude,
                                        const std::vector<double>& frequencies,
                                        const Scenario* hover = nullptr);

struct ClearanceGeometry {
  double leg_height = 2e-3;
  double airframe_height = 12e-3;
  /// Height of the wing hinge line above the airframe base; the resting wing
  /// hangs below it.
  double wing_root_height = 11e-3;
};

struct ClearanceResult {
  double bounding_height = 0.0;
  double gap_height = 0.0;
  bool passes = false;
};

/// Inclusive: a gap equal to the bounding height passes.
ClearanceResult clearance_check(double gap_height, const ClearanceGeometry& geometry = {});

struct WaterCalibrationTargets {
  double line_frequency = 35.0;
  double line_amplitude = 220.0;
  double line_mu = 0.3;
  double line_speed = 5e-3;
  double turn_frequency = 30.0;
  double turn_right_amplitude = 220.0;
  double turn_left_amplitude = 180.0;
  double turn_mu = 0.3;
  double turn_rate_deg = 20.0;
};

/// Linear and yaw drag coefficients that make the steady states of the
/// water model hit the targets.
WaterDrag calibrate_water_drag(const BodyParams& body, const AeroParams& aero,
                               const WingKinematicsMap& wing, const DriveConfig& drive,
                               const WaterCalibrationTargets& targets = {});

struct TuneResult {
  ControllerGains gains;
  double cost = 0.0;
  int evaluations = 0;
};

/// Hover cost used by tune_gains: lateral RMS + 2 z RMS + late-reach penalty.
double hover_cost(const RunSummary& summary, double reach_deadline = 1.0);

/// Deterministic coordinate search on the gains, scoring `hover` runs.
TuneResult tune_gains(const Scenario& hover, const ControllerGains& start, int rounds = 4);

}  // namespace flapsim
