#pragma once

// Cascaded hover controller.
//
//   altitude  a_z = k_ph e_z + k_dh de_z + k_ih int(e_z)
//   lateral   zhat_d = k_pl (p_d - p) + k_dl (v_d - v)         (world frame)
//   error     e' = R2^T (zhat_d - zhat)                         (body frame)
//   attitude  [tau_x, tau_y] = k_pa [-e'_y, e'_x] - k_da w' + k_ia int([-e'_y, e'_x])
//
// a_z and the torques are normalised by mass and inertia. The mixer turns
// them into per-wing amplitude (thrust and roll) and a shared second-harmonic
// ratio (pitch, through the rectified fore/aft drag acting above the CoM).

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "flapsim/aero.hpp"
#include "flapsim/dynamics.hpp"
#include "flapsim/sensors.hpp"
#include "flapsim/waveform.hpp"

namespace flapsim {

struct ControllerGains {
  double altitude_p = 0.0;
  double altitude_d = 0.0;
  double altitude_i = 0.0;
  double lateral_p = 0.0;
  double lateral_d = 0.0;
  double attitude_p = 0.0;
  double attitude_d = 0.0;
  double attitude_i = 0.0;

  /// Tuned against the bundled hover scenario (see tune_gains()).
  static ControllerGains defaults();
  void validate() const;
};

struct ControllerLimits {
  double control_rate = 240.0;
  double filter_cutoff = 20.0;
  /// Norm clamp on zhat_d.
  double max_inclination = 0.3;
  double altitude_integral_limit = 0.05;
  double attitude_integral_limit = 0.1;

  void validate() const;
};

/// Second-order Butterworth low-pass, bilinear transform with pre-warping.
class ButterworthLowPass {
 public:
  ButterworthLowPass() = default;
  ButterworthLowPass(double cutoff_hz, double sample_rate_hz);
  double filter(double x);
  /// Set the memory to the steady state for a constant input x.
  void reset(double x);

  double b0() const { return b0_; }
  double b1() const { return b1_; }
  double b2() const { return b2_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }

 private:
  double b0_ = 1.0, b1_ = 0.0, b2_ = 0.0, a1_ = 0.0, a2_ = 0.0;
  double x1_ = 0.0, x2_ = 0.0, y1_ = 0.0, y2_ = 0.0;
};

/// Filtered-derivative estimator: Butterworth on the signal, backward
/// difference of the filtered value.
class FilteredDerivative {
 public:
  FilteredDerivative() = default;
  FilteredDerivative(double cutoff_hz, double sample_rate_hz) : filter_(cutoff_hz, sample_rate_hz) {}
  /// Returns d(filtered x)/dt; 0 on the first call.
  double update(double x, double dt);
  bool started() const { return started_; }

 private:
  ButterworthLowPass filter_;
  double previous_ = 0.0;
  bool started_ = false;
};

struct ControllerState {
  ControllerState() = default;
  explicit ControllerState(const ControllerLimits& limits);

  double altitude_integral = 0.0;
  Eigen::Vector2d attitude_integral = Eigen::Vector2d::Zero();
  double altitude_integral_limit = 0.05;
  double attitude_integral_limit = 0.1;
  FilteredDerivative z_rate;
  FilteredDerivative x_rate;
  FilteredDerivative y_rate;
  double previous_altitude_error = 0.0;
  Eigen::Vector2d previous_attitude_term = Eigen::Vector2d::Zero();
  bool altitude_started = false;
  bool attitude_started = false;
  Eigen::Quaterniond previous_orientation = Eigen::Quaterniond::Identity();
  bool have_orientation = false;
  double last_tick_time = 0.0;
};

struct Setpoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector2d lateral_velocity = Eigen::Vector2d::Zero();
};

struct WingCommand {
  double amplitude = 0.0;
  double mu = 0.0;
};

struct MixerContext {
  BodyParams body;
  AeroParams aero;
  WingKinematicsMap wing;
  double flap_frequency = 140.0;
  double offset_voltage = 0.0;
  VoltageEnvelope envelope;
  double mu_limit = kTypicalSecondHarmonicLimit;
};

struct MixerOutput {
  WingCommand left;
  WingCommand right;
  bool saturated = false;
  bool thrust_clamped = false;
};

struct ControlOutput {
  double a_z = 0.0;
  double tau_x = 0.0;
  double tau_y = 0.0;
  Eigen::Vector2d inclination = Eigen::Vector2d::Zero();
  Eigen::Vector2d attitude_error = Eigen::Vector2d::Zero();
  Eigen::Vector3d body_rate_estimate = Eigen::Vector3d::Zero();
  MixerOutput mix;
};

/// Trapezoidal integration of e_z; the derivative comes from the filtered z.
double altitude_law(const ControllerGains& gains, ControllerState& state, double z, double z_d,
                    double dt);

/// PD on world-frame lateral position, clamped to |zhat_d| <= max_inclination.
Eigen::Vector2d lateral_law(const ControllerGains& gains, const Eigen::Vector2d& position,
                            const Eigen::Vector2d& velocity, const Setpoint& setpoint,
                            double max_inclination = 0.3);

/// e' = R2^T (zhat_d - zhat), R2 the upper-left 2x2 block of R.
Eigen::Vector2d attitude_error_to_body(const Eigen::Matrix3d& attitude, const Eigen::Vector2d& zhat,
                                       const Eigen::Vector2d& zhat_d);

/// xy-projection of the body z axis in world coordinates.
Eigen::Vector2d thrust_axis_projection(const Eigen::Matrix3d& attitude);

/// Returns (tau_x, tau_y).
Eigen::Vector2d attitude_law(const ControllerGains& gains, ControllerState& state,
                             const Eigen::Vector2d& error, const Eigen::Vector3d& body_rate,
                             double dt);

/// Inverse of the actuator model; amplitudes saturate to the envelope.
MixerOutput mixer(double a_z, double tau_x, double tau_y, const MixerContext& ctx);

struct MixedEffort {
  double thrust = 0.0;  // N
  double tau_x = 0.0;   // normalised, rad/s^2
  double tau_y = 0.0;   // normalised, rad/s^2
};
/// Forward actuator model used by both the mixer round-trip and the dynamics.
MixedEffort mixer_forward(const WingCommand& left, const WingCommand& right,
                          const MixerContext& ctx);

/// Body-frame wrench of the cycle-averaged wing forces. Left wing sits at +y.
Wrench wing_wrench(const WingCommand& left, const WingCommand& right, const MixerContext& ctx,
                   int samples = kDefaultCycleSamples);

/// Full control tick: filters, cascade, mixer.
class CascadedController {
 public:
  CascadedController(ControllerGains gains, ControllerLimits limits, MixerContext mixer);
  ControlOutput update(const MoCapSample& sample, const Setpoint& setpoint);
  const ControllerState& state() const { return state_; }
  const ControllerGains& gains() const { return gains_; }
  const MixerContext& mixer_context() const { return mixer_; }

 private:
  ControllerGains gains_;
  ControllerLimits limits_;
  MixerContext mixer_;
  ControllerState state_;
};

}  // namespace flapsim
