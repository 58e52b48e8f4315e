#include "flapsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "flapsim/sensors.hpp"

namespace flapsim {

using Eigen::Matrix3d;
using Eigen::Quaterniond;
using Eigen::Vector2d;
using Eigen::Vector3d;

// Output of `flapsim tune scenarios/tune_hover.cfg --rounds 3`, started from
// hand-placed poles (attitude ~8 Hz, lateral ~0.9 Hz, altitude ~1.2 Hz).
ControllerGains ControllerGains::defaults() {
  ControllerGains g;
  g.altitude_p = 126.562;
  g.altitude_d = 7.2;
  g.altitude_i = 18.963;
  g.lateral_p = 2.4;
  g.lateral_d = 0.8;
  g.attitude_p = 2700.0;
  g.attitude_d = 49.7778;
  g.attitude_i = 421.875;
  return g;
}

void ControllerGains::validate() const {
  const double all[] = {altitude_p, altitude_d, altitude_i, lateral_p,
                        lateral_d,  attitude_p, attitude_d, attitude_i};
  for (double v : all)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("controller gains must be finite and >= 0");
}

void ControllerLimits::validate() const {
  if (!(control_rate > 0.0)) throw std::invalid_argument("control_rate must be > 0");
  if (!(filter_cutoff > 0.0) || filter_cutoff >= 0.5 * control_rate)
    throw std::invalid_argument("filter_cutoff must lie in (0, control_rate/2)");
  if (!(max_inclination > 0.0) || max_inclination >= 1.0)
    throw std::invalid_argument("max_inclination must lie in (0, 1)");
  if (!(altitude_integral_limit >= 0.0) || !(attitude_integral_limit >= 0.0))
    throw std::invalid_argument("integral limits must be >= 0");
}

ButterworthLowPass::ButterworthLowPass(double cutoff_hz, double sample_rate_hz) {
  if (!(cutoff_hz > 0.0) || !(sample_rate_hz > 2.0 * cutoff_hz))
    throw std::invalid_argument("Butterworth cutoff must lie in (0, fs/2)");
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
  const double s2 = std::numbers::sqrt2;
  const double norm = 1.0 / (1.0 + s2 * k + k * k);
  b0_ = k * k * norm;
  b1_ = 2.0 * b0_;
  b2_ = b0_;
  a1_ = 2.0 * (k * k - 1.0) * norm;
  a2_ = (1.0 - s2 * k + k * k) * norm;
}

double ButterworthLowPass::filter(double x) {
  const double y = b0_ * x + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
  x2_ = x1_;
  x1_ = x;
  y2_ = y1_;
  y1_ = y;
  return y;
}

void ButterworthLowPass::reset(double x) { x1_ = x2_ = y1_ = y2_ = x; }

double FilteredDerivative::update(double x, double dt) {
  if (!started_) {
    filter_.reset(x);
    previous_ = x;
    started_ = true;
    return 0.0;
  }
  const double y = filter_.filter(x);
  const double rate = (y - previous_) / dt;
  previous_ = y;
  return rate;
}

ControllerState::ControllerState(const ControllerLimits& limits)
    : altitude_integral_limit(limits.altitude_integral_limit),
      attitude_integral_limit(limits.attitude_integral_limit),
      z_rate(limits.filter_cutoff, limits.control_rate),
      x_rate(limits.filter_cutoff, limits.control_rate),
      y_rate(limits.filter_cutoff, limits.control_rate) {}

double altitude_law(const ControllerGains& gains, ControllerState& state, double z, double z_d,
                    double dt) {
  const double e = z_d - z;
  const double z_dot = state.z_rate.update(z, dt);
  if (state.altitude_started) {
    state.altitude_integral += 0.5 * (e + state.previous_altitude_error) * dt;
    const double lim = state.altitude_integral_limit;
    state.altitude_integral = std::clamp(state.altitude_integral, -lim, lim);
  }
  state.altitude_started = true;
  state.previous_altitude_error = e;
  return gains.altitude_p * e - gains.altitude_d * z_dot + gains.altitude_i * state.altitude_integral;
}

Vector2d lateral_law(const ControllerGains& gains, const Vector2d& position,
                     const Vector2d& velocity, const Setpoint& setpoint, double max_inclination) {
  Vector2d zd = gains.lateral_p * (setpoint.position.head<2>() - position) +
                gains.lateral_d * (setpoint.lateral_velocity - velocity);
  const double n = zd.norm();
  if (n > max_inclination) zd *= max_inclination / n;
  return zd;
}

Vector2d attitude_error_to_body(const Matrix3d& attitude, const Vector2d& zhat,
                                const Vector2d& zhat_d) {
  return attitude.topLeftCorner<2, 2>().transpose() * (zhat_d - zhat);
}

Vector2d thrust_axis_projection(const Matrix3d& attitude) {
  return attitude.col(2).head<2>();
}

Vector2d attitude_law(const ControllerGains& gains, ControllerState& state, const Vector2d& error,
                      const Vector3d& body_rate, double dt) {
  const Vector2d u(-error.y(), error.x());
  if (state.attitude_started) {
    state.attitude_integral += 0.5 * (u + state.previous_attitude_term) * dt;
    const double lim = state.attitude_integral_limit;
    state.attitude_integral = state.attitude_integral.cwiseMax(-lim).cwiseMin(lim);
  }
  state.attitude_started = true;
  state.previous_attitude_term = u;
  return gains.attitude_p * u - gains.attitude_d * body_rate.head<2>() +
         gains.attitude_i * state.attitude_integral;
}

namespace {

const RectificationInverse& rectification_table() {
  static const RectificationInverse table;
  return table;
}

}  // namespace

MixerOutput mixer(double a_z, double tau_x, double tau_y, const MixerContext& ctx) {
  MixerOutput out;
  const BodyParams& b = ctx.body;
  double thrust = b.mass * (b.gravity + a_z);
  if (thrust < 0.0) {
    thrust = 0.0;
    out.thrust_clamped = true;
  }
  const double k = per_wing_thrust_per_volt(ctx.aero, ctx.flap_frequency);
  if (!(k > 0.0)) throw std::invalid_argument("mixer: thrust per volt must be > 0");

  // T = k (A_L + A_R),  I_x tau_x = d k (A_L - A_R)
  const double sum = thrust / k;
  const double diff = b.inertia.x() * tau_x / (b.thrust_moment_arm * k);
  double a_left = 0.5 * (sum + diff);
  double a_right = 0.5 * (sum - diff);
  if (a_left < 0.0 || a_right < 0.0) {
    out.saturated = true;
    a_left = std::max(a_left, 0.0);
    a_right = std::max(a_right, 0.0);
  }

  // I_y tau_y = h F_x,  F_x = H(mu) (s_L + s_R)
  double mu = 0.0;
  const double scale = rectified_force_scale(ctx.wing, ctx.aero, a_left, ctx.flap_frequency) +
                       rectified_force_scale(ctx.wing, ctx.aero, a_right, ctx.flap_frequency);
  const double force = b.inertia.y() * tau_y / b.drag_center_height;
  if (scale > 0.0) {
    const auto& table = rectification_table();
    const double hmax = table.factor(ctx.mu_limit);
    const double hmin = table.factor(-ctx.mu_limit);
    const double target = force / scale;
    if (target > hmax || target < hmin) out.saturated = true;
    mu = std::clamp(table.solve(std::clamp(target, hmin, hmax)), -ctx.mu_limit, ctx.mu_limit);
  } else if (force != 0.0) {
    out.saturated = true;
  }

  // Shrunk by a few ulps so the clamped waveform never trips the envelope check.
  const double a_max =
      max_amplitude_in_envelope(ctx.offset_voltage, mu, ctx.envelope) * (1.0 - 1e-12);
  if (a_left > a_max || a_right > a_max) out.saturated = true;
  out.left = {std::min(a_left, a_max), mu};
  out.right = {std::min(a_right, a_max), mu};
  return out;
}

MixedEffort mixer_forward(const WingCommand& left, const WingCommand& right,
                          const MixerContext& ctx) {
  const BodyParams& b = ctx.body;
  const double k = per_wing_thrust_per_volt(ctx.aero, ctx.flap_frequency);
  const auto& table = rectification_table();
  const double f = ctx.flap_frequency;
  const double fx =
      rectified_force_scale(ctx.wing, ctx.aero, left.amplitude, f) * table.factor(left.mu) +
      rectified_force_scale(ctx.wing, ctx.aero, right.amplitude, f) * table.factor(right.mu);
  MixedEffort e;
  e.thrust = k * (left.amplitude + right.amplitude);
  e.tau_x = b.thrust_moment_arm * k * (left.amplitude - right.amplitude) / b.inertia.x();
  e.tau_y = b.drag_center_height * fx / b.inertia.y();
  return e;
}

Wrench wing_wrench(const WingCommand& left, const WingCommand& right, const MixerContext& ctx,
                   int samples) {
  const double k = per_wing_thrust_per_volt(ctx.aero, ctx.flap_frequency);
  auto horizontal = [&](const WingCommand& w) {
    if (w.amplitude <= 0.0) return 0.0;
    const DriveSignal s(ctx.offset_voltage, w.amplitude, w.mu, ctx.flap_frequency, ctx.envelope);
    return cycle_mean_horizontal_force(s, ctx.wing, ctx.aero, samples);
  };
  const double fl = horizontal(left), fr = horizontal(right);
  const double tl = k * left.amplitude, tr = k * right.amplitude;
  const double d = ctx.body.thrust_moment_arm, h = ctx.body.drag_center_height;
  Wrench w;
  w.force = Vector3d(fl + fr, 0.0, tl + tr);
  w.torque = Vector3d(d * (tl - tr), h * (fl + fr), d * (fr - fl));
  return w;
}

CascadedController::CascadedController(ControllerGains gains, ControllerLimits limits,
                                       MixerContext mixer)
    : gains_(gains), limits_(limits), mixer_(std::move(mixer)), state_(limits) {
  gains_.validate();
  limits_.validate();
  mixer_.body.validate();
  mixer_.aero.validate();
  mixer_.wing.validate();
}

ControlOutput CascadedController::update(const MoCapSample& sample, const Setpoint& setpoint) {
  const double dt = 1.0 / limits_.control_rate;
  ControlOutput out;
  const Matrix3d r = quaternion_to_rotation(sample.orientation);

  // Body rate from consecutive orientations: q_prev^-1 q = exp(w dt / 2).
  if (state_.have_orientation) {
    Quaterniond dq = state_.previous_orientation.conjugate() * sample.orientation;
    if (dq.w() < 0.0) dq.coeffs() *= -1.0;
    const Eigen::AngleAxisd aa(dq.normalized());
    out.body_rate_estimate = aa.axis() * (aa.angle() / dt);
  }
  state_.previous_orientation = sample.orientation;
  state_.have_orientation = true;
  state_.last_tick_time = sample.time;

  const Vector2d v(state_.x_rate.update(sample.position.x(), dt),
                   state_.y_rate.update(sample.position.y(), dt));

  out.a_z = altitude_law(gains_, state_, sample.position.z(), setpoint.position.z(), dt);
  const Vector2d zd =
      lateral_law(gains_, sample.position.head<2>(), v, setpoint, limits_.max_inclination);
  out.inclination = zd;
  out.attitude_error = attitude_error_to_body(r, thrust_axis_projection(r), zd);
  const Vector2d tau = attitude_law(gains_, state_, out.attitude_error, out.body_rate_estimate, dt);
  out.tau_x = tau.x();
  out.tau_y = tau.y();
  out.mix = mixer(out.a_z, out.tau_x, out.tau_y, mixer_);
  return out;
}

}  // namespace flapsim
