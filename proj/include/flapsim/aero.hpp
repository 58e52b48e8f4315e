#pragma once

// Quasi-steady wing aerodynamics: drag on the stroking wing (which the
// second harmonic rectifies into a net fore/aft body force) and a lumped,
// amplitude-linear vertical thrust.

#include <vector>

#include "flapsim/waveform.hpp"

namespace flapsim {

inline constexpr double kStandardGravity = 9.81;
inline constexpr double kReferenceFlightMass = 74e-6;
inline constexpr double kReferenceHoverAmplitude = 250.0;

struct AeroParams {
  double drag_coefficient = 1.5;
  double air_density = 1.2;
  /// Drag reference area of one wing (m^2). Zero models a bare carbon rod.
  double wing_area = 13e-3 * 2.5e-3;
  /// Thrust of both wings per volt of common amplitude at resonance (N/V).
  double thrust_per_volt = kReferenceFlightMass * kStandardGravity / kReferenceHoverAmplitude;
  double resonant_frequency = 140.0;
  /// Damping ratio of the second-order frequency weight.
  double resonance_damping = 0.1;

  void validate() const;
};

/// Drag on a wing moving at `wing_velocity` (stroke frame): -1/2 C_D rho A v|v|.
double instantaneous_wing_drag(const AeroParams& params, double wing_velocity);

/// Fore/aft force the wing applies to the body at time t (positive forward).
double instantaneous_body_force(const DriveSignal& signal, const WingKinematicsMap& map,
                                const AeroParams& params, double t);

inline constexpr int kDefaultCycleSamples = 1 << 14;

/// Period mean of instantaneous_body_force for one wing.
double cycle_mean_horizontal_force(const DriveSignal& signal, const WingKinematicsMap& map,
                                   const AeroParams& params, int samples = kDefaultCycleSamples);

/// Largest |instantaneous_body_force| over the sampled period.
double peak_horizontal_force(const DriveSignal& signal, const WingKinematicsMap& map,
                             const AeroParams& params, int samples = kDefaultCycleSamples);

/// Second-order resonance magnitude normalised to 1 at the resonant frequency.
double frequency_weight(const AeroParams& params, double frequency);

/// Vertical thrust of both wings driven at `amplitude` (N), clamped at 0.
double cycle_mean_thrust(const AeroParams& params, double amplitude, double frequency);
double cycle_mean_thrust(const DriveSignal& signal, const AeroParams& params);

/// Thrust of one wing per volt of its own amplitude at `frequency`.
double per_wing_thrust_per_volt(const AeroParams& params, double frequency);

/// Period mean of u|u| with u = cos(x) + 2 mu cos(2x); the dimensionless
/// shape factor of the unsaturated rectified drag.
double rectification_factor(double mu, int samples = kDefaultCycleSamples);

/// Unsaturated closed form of cycle_mean_horizontal_force:
/// 1/2 C_D rho A (r k A0 w)^2 H(mu).
double rectified_force_scale(const WingKinematicsMap& map, const AeroParams& params,
                             double amplitude, double frequency);

/// Tabulated inverse of rectification_factor on [-limit, limit].
class RectificationInverse {
 public:
  explicit RectificationInverse(double limit = kMaxSecondHarmonicRatio, int points = 401);
  double factor(double mu) const;
  /// mu whose factor equals `target`, clamped to the table range.
  double solve(double target) const;
  double limit() const { return limit_; }

 private:
  double limit_;
  std::vector<double> mu_;
  std::vector<double> h_;
};

}  // namespace flapsim
