#pragma once

// Two-harmonic actuator drive signals and the voltage-to-stroke map.
//
//   V(t) = V0 + A0 sin(wt) + mu A0 sin(2wt)
//
// Stroke angle is measured positive toward the tail of the robot, so a
// positive mu makes the rearward half-stroke the fast one.

#include <string>
#include <vector>

namespace flapsim {

/// Allowed range of the instantaneous actuator voltage.
struct VoltageEnvelope {
  double min_volts = -400.0;
  double max_volts = 400.0;
};

/// |mu| above this is accepted but reported by DriveSignal::warnings().
inline constexpr double kTypicalSecondHarmonicLimit = 0.3;
/// |mu| above this is rejected.
inline constexpr double kMaxSecondHarmonicRatio = 0.5;

/// Peak of |sin(x) + mu sin(2x)| over one period (closed form).
double second_harmonic_peak_factor(double mu);

class DriveSignal {
 public:
  /// Throws std::invalid_argument if the parameters are out of range or the
  /// waveform leaves the voltage envelope anywhere in the period.
  DriveSignal(double offset_voltage, double amplitude, double second_harmonic_ratio,
              double flap_frequency, VoltageEnvelope envelope = {});

  double offset_voltage() const { return offset_; }
  double amplitude() const { return amplitude_; }
  double second_harmonic_ratio() const { return mu_; }
  double second_harmonic_amplitude() const { return mu_ * amplitude_; }
  double flap_frequency() const { return frequency_; }
  double angular_frequency() const;
  double period() const { return 1.0 / frequency_; }
  const VoltageEnvelope& envelope() const { return envelope_; }

  /// Largest |V(t) - V0| over a period.
  double peak_deviation() const;

  std::vector<std::string> warnings() const;

 private:
  double offset_;
  double amplitude_;
  double mu_;
  double frequency_;
  VoltageEnvelope envelope_;
};

/// Largest amplitude A0 that keeps a (V0, mu) waveform inside the envelope.
double max_amplitude_in_envelope(double offset_voltage, double mu, const VoltageEnvelope& envelope);

double voltage_at(const DriveSignal& signal, double t);
/// Analytic dV/dt.
double voltage_rate_at(const DriveSignal& signal, double t);

struct WingKinematicsMap {
  /// rad per volt of (V - V0). Default: 250 V amplitude gives 90 deg peak-to-peak.
  double stroke_gain = 3.14159265358979323846 / 4.0 / 250.0;
  /// Peak-to-peak hard-stop limit of the stroke (rad).
  double max_stroke_amplitude = 120.0 * 3.14159265358979323846 / 180.0;
  double wing_length = 13e-3;
  double mean_chord = 2.5e-3;
  double drag_reference_area = 13e-3 * 2.5e-3;
  /// Radius at which the wing velocity is evaluated, as a fraction of wing_length.
  double radius_fraction = 0.5;

  double characteristic_radius() const { return radius_fraction * wing_length; }
  void validate() const;
};

/// Stroke angle (rad), hard-clipped at +-max_stroke_amplitude/2.
double stroke_angle(const DriveSignal& signal, const WingKinematicsMap& map, double t);

/// Stroke velocity at the characteristic radius (m/s, positive rearward).
/// Zero while the stroke sits on a hard stop.
double wing_tip_velocity(const DriveSignal& signal, const WingKinematicsMap& map, double t);

}  // namespace flapsim
