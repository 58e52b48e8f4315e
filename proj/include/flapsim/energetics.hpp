#pragma once

// Electrical power of the piezo actuators treated as pure capacitive loads,
// and cost of transport from a sampled power trace.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "flapsim/waveform.hpp"

namespace flapsim {

struct ActuatorElectrical {
  /// Per actuator (F). Sized so that both actuators at the hover waveform
  /// draw about 50 mW rectified.
  double capacitance = 2.9e-9;
  /// Rate at which the power trace is sampled (Hz).
  double sample_rate = 1e4;

  void validate() const;
};

/// I = C dV/dt using the analytic waveform derivative.
double actuator_current(const ActuatorElectrical& elec, const DriveSignal& signal, double t);

/// P = V I. With `rectified`, negative (returned) power is zeroed, which is
/// what a linear half-bridge driver that cannot recover charge sees.
double instantaneous_power(double voltage, double current, bool rectified);

struct PowerSample {
  double t = 0.0;
  double v_left = 0.0;
  double i_left = 0.0;
  double v_right = 0.0;
  double i_right = 0.0;
  double p_rectified = 0.0;
  double p_signed = 0.0;
};

/// Sample both actuators at time t. Rectification is applied per actuator
/// and the two are summed.
PowerSample sample_power(const ActuatorElectrical& elec, const DriveSignal& left,
                         const DriveSignal& right, double t);

class EnergyTrace {
 public:
  void push(const PowerSample& s) { samples_.push_back(s); }
  const std::vector<PowerSample>& samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }

  /// Trapezoidal integrals over samples with t in [t0, t1].
  double energy_rectified(double t0 = -1e300, double t1 = 1e300) const;
  double energy_signed(double t0 = -1e300, double t1 = 1e300) const;
  double mean_power(double t0 = -1e300, double t1 = 1e300) const;
  double duration() const;

 private:
  template <class F>
  double integrate(F&& value, double t0, double t1) const;

  std::vector<PowerSample> samples_;
};

/// Trapezoidal integral of uniformly or non-uniformly spaced samples.
double trapezoid(std::span<const double> t, std::span<const double> y);

/// Sum of segment lengths of a sampled 3D path.
double path_length(std::span<const Eigen::Vector3d> points);

inline constexpr double kDefaultMinCotDistance = 1e-3;

struct CostOfTransport {
  bool applicable = false;
  double energy = 0.0;    // J
  double distance = 0.0;  // m
  double duration = 0.0;  // s
  double mean_power = 0.0;
  double joules_per_meter = 0.0;
  double millijoules_per_millimeter = 0.0;
};

/// Rectified energy over distance. Paths shorter than `min_distance` (e.g.
/// hovering in place) give applicable = false with the mean power filled in.
CostOfTransport cost_of_transport(double energy, double duration, double distance,
                                  double min_distance = kDefaultMinCotDistance);
CostOfTransport cost_of_transport(const EnergyTrace& trace, double distance,
                                  double min_distance = kDefaultMinCotDistance);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace flapsim
