#include "flapsim/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace flapsim {

double second_harmonic_peak_factor(double mu) {
  if (mu == 0.0) return 1.0;
  // Stationary points of sin(x) + mu sin(2x): 4 mu c^2 + c - 2 mu = 0, c = cos(x).
  const double disc = std::sqrt(1.0 + 32.0 * mu * mu);
  double best = 0.0;
  for (double root : {(-1.0 + disc) / (8.0 * mu), (-1.0 - disc) / (8.0 * mu)}) {
    if (root < -1.0 || root > 1.0) continue;
    const double s = std::sqrt(1.0 - root * root);
    best = std::max(best, std::abs(s * (1.0 + 2.0 * mu * root)));
  }
  return best;
}

DriveSignal::DriveSignal(double offset_voltage, double amplitude, double second_harmonic_ratio,
                         double flap_frequency, VoltageEnvelope envelope)
    : offset_(offset_voltage),
      amplitude_(amplitude),
      mu_(second_harmonic_ratio),
      frequency_(flap_frequency),
      envelope_(envelope) {
  if (!std::isfinite(offset_) || !std::isfinite(amplitude_) || !std::isfinite(mu_) ||
      !std::isfinite(frequency_)) {
    throw std::invalid_argument("drive signal: non-finite parameter");
  }
  if (amplitude_ < 0.0) throw std::invalid_argument("drive signal: amplitude must be >= 0");
  if (frequency_ <= 0.0) throw std::invalid_argument("drive signal: flap frequency must be > 0");
  if (std::abs(mu_) > kMaxSecondHarmonicRatio) {
    throw std::invalid_argument("drive signal: |second harmonic ratio| exceeds 0.5");
  }
  if (envelope_.min_volts > envelope_.max_volts) {
    throw std::invalid_argument("drive signal: envelope minimum above maximum");
  }
  const double dev = peak_deviation();
  if (offset_ + dev > envelope_.max_volts || offset_ - dev < envelope_.min_volts) {
    throw std::invalid_argument("drive signal: waveform leaves the actuator voltage envelope [" +
                                std::to_string(envelope_.min_volts) + ", " +
                                std::to_string(envelope_.max_volts) + "] V");
  }
}

double DriveSignal::angular_frequency() const { return 2.0 * std::numbers::pi * frequency_; }

double DriveSignal::peak_deviation() const {
  return amplitude_ * second_harmonic_peak_factor(mu_);
}

std::vector<std::string> DriveSignal::warnings() const {
  std::vector<std::string> out;
  if (std::abs(mu_) > kTypicalSecondHarmonicLimit) {
    out.push_back("second harmonic ratio " + std::to_string(mu_) + " outside the typical [-0.3, 0.3]");
  }
  return out;
}

double max_amplitude_in_envelope(double offset_voltage, double mu, const VoltageEnvelope& envelope) {
  const double headroom =
      std::min(envelope.max_volts - offset_voltage, offset_voltage - envelope.min_volts);
  if (headroom <= 0.0) return 0.0;
  return headroom / second_harmonic_peak_factor(mu);
}

double voltage_at(const DriveSignal& signal, double t) {
  const double wt = signal.angular_frequency() * t;
  return signal.offset_voltage() + signal.amplitude() * std::sin(wt) +
         signal.second_harmonic_amplitude() * std::sin(2.0 * wt);
}

double voltage_rate_at(const DriveSignal& signal, double t) {
  const double w = signal.angular_frequency();
  const double wt = w * t;
  return signal.amplitude() * w * std::cos(wt) +
         2.0 * w * signal.second_harmonic_amplitude() * std::cos(2.0 * wt);
}

void WingKinematicsMap::validate() const {
  if (!(stroke_gain > 0.0)) throw std::invalid_argument("wing: stroke_gain must be > 0");
  if (!(max_stroke_amplitude > 0.0))
    throw std::invalid_argument("wing: max_stroke_amplitude must be > 0");
  if (!(wing_length > 0.0)) throw std::invalid_argument("wing: wing_length must be > 0");
  if (!(mean_chord > 0.0)) throw std::invalid_argument("wing: mean_chord must be > 0");
  if (drag_reference_area < 0.0)
    throw std::invalid_argument("wing: drag_reference_area must be >= 0");
  if (!(radius_fraction > 0.0 && radius_fraction <= 1.0))
    throw std::invalid_argument("wing: radius_fraction must be in (0, 1]");
}

namespace {
double unclipped_stroke(const DriveSignal& signal, const WingKinematicsMap& map, double t) {
  return map.stroke_gain * (voltage_at(signal, t) - signal.offset_voltage());
}
}  // namespace

double stroke_angle(const DriveSignal& signal, const WingKinematicsMap& map, double t) {
  const double half = 0.5 * map.max_stroke_amplitude;
  return std::clamp(unclipped_stroke(signal, map, t), -half, half);
}

double wing_tip_velocity(const DriveSignal& signal, const WingKinematicsMap& map, double t) {
  if (std::abs(unclipped_stroke(signal, map, t)) >= 0.5 * map.max_stroke_amplitude) return 0.0;
  return map.characteristic_radius() * map.stroke_gain * voltage_rate_at(signal, t);
}

}  // namespace flapsim
