#include "flapsim/aero.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flapsim {

void AeroParams::validate() const {
  if (!(drag_coefficient > 0.0)) throw std::invalid_argument("aero: drag_coefficient must be > 0");
  if (!(air_density > 0.0)) throw std::invalid_argument("aero: air_density must be > 0");
  if (!(wing_area >= 0.0)) throw std::invalid_argument("aero: wing_area must be >= 0");
  if (!(thrust_per_volt >= 0.0)) throw std::invalid_argument("aero: thrust_per_volt must be >= 0");
  if (!(resonant_frequency > 0.0))
    throw std::invalid_argument("aero: resonant_frequency must be > 0");
  if (!(resonance_damping > 0.0))
    throw std::invalid_argument("aero: resonance_damping must be > 0");
}

double instantaneous_wing_drag(const AeroParams& params, double wing_velocity) {
  return -0.5 * params.drag_coefficient * params.air_density * params.wing_area * wing_velocity *
         std::abs(wing_velocity);
}

double instantaneous_body_force(const DriveSignal& signal, const WingKinematicsMap& map,
                                const AeroParams& params, double t) {
  // Stroke coordinate points rearward, body x points forward.
  return -instantaneous_wing_drag(params, wing_tip_velocity(signal, map, t));
}

double cycle_mean_horizontal_force(const DriveSignal& signal, const WingKinematicsMap& map,
                                   const AeroParams& params, int samples) {
  if (samples < 2) throw std::invalid_argument("cycle_mean_horizontal_force: samples < 2");
  if (params.wing_area == 0.0 || signal.amplitude() == 0.0) return 0.0;
  // Rectangle rule on a periodic integrand.
  const double h = signal.period() / samples;
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) sum += instantaneous_body_force(signal, map, params, k * h);
  return sum / samples;
}

double peak_horizontal_force(const DriveSignal& signal, const WingKinematicsMap& map,
                             const AeroParams& params, int samples) {
  const double h = signal.period() / samples;
  double peak = 0.0;
  for (int k = 0; k < samples; ++k) {
    peak = std::max(peak, std::abs(instantaneous_body_force(signal, map, params, k * h)));
  }
  return peak;
}

double frequency_weight(const AeroParams& params, double frequency) {
  const double r = frequency / params.resonant_frequency;
  const double z2 = 2.0 * params.resonance_damping;
  const double one_minus = 1.0 - r * r;
  return z2 / std::sqrt(one_minus * one_minus + z2 * z2 * r * r);
}

double cycle_mean_thrust(const AeroParams& params, double amplitude, double frequency) {
  const double t = params.thrust_per_volt * amplitude * frequency_weight(params, frequency);
  return std::max(0.0, t);
}

double cycle_mean_thrust(const DriveSignal& signal, const AeroParams& params) {
  return cycle_mean_thrust(params, signal.amplitude(), signal.flap_frequency());
}

double per_wing_thrust_per_volt(const AeroParams& params, double frequency) {
  return 0.5 * params.thrust_per_volt * frequency_weight(params, frequency);
}

double rectification_factor(double mu, int samples) {
  const double h = 2.0 * std::numbers::pi / samples;
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double x = k * h;
    const double u = std::cos(x) + 2.0 * mu * std::cos(2.0 * x);
    sum += u * std::abs(u);
  }
  return sum / samples;
}

double rectified_force_scale(const WingKinematicsMap& map, const AeroParams& params,
                             double amplitude, double frequency) {
  const double v = map.characteristic_radius() * map.stroke_gain * amplitude * 2.0 *
                   std::numbers::pi * frequency;
  return 0.5 * params.drag_coefficient * params.air_density * params.wing_area * v * v;
}

RectificationInverse::RectificationInverse(double limit, int points) : limit_(limit) {
  if (points < 3 || !(limit > 0.0)) throw std::invalid_argument("RectificationInverse: bad table");
  mu_.resize(points);
  h_.resize(points);
  for (int i = 0; i < points; ++i) {
    mu_[i] = -limit + 2.0 * limit * i / (points - 1);
    h_[i] = rectification_factor(mu_[i], 4096);
  }
}

double RectificationInverse::factor(double mu) const {
  mu = std::clamp(mu, -limit_, limit_);
  const auto it = std::upper_bound(mu_.begin(), mu_.end(), mu);
  const std::size_t i = std::clamp<std::size_t>(it - mu_.begin(), 1, mu_.size() - 1);
  const double w = (mu - mu_[i - 1]) / (mu_[i] - mu_[i - 1]);
  return h_[i - 1] + w * (h_[i] - h_[i - 1]);
}

double RectificationInverse::solve(double target) const {
  if (target <= h_.front()) return mu_.front();
  if (target >= h_.back()) return mu_.back();
  const auto it = std::upper_bound(h_.begin(), h_.end(), target);
  const std::size_t i = it - h_.begin();
  const double w = (target - h_[i - 1]) / (h_[i] - h_[i - 1]);
  return mu_[i - 1] + w * (mu_[i] - mu_[i - 1]);
}

}  // namespace flapsim
