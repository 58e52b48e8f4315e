#include "flapsim/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flapsim {

void ActuatorElectrical::validate() const {
  if (!(capacitance > 0.0)) throw std::invalid_argument("electrical: capacitance must be > 0");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("electrical: sample_rate must be > 0");
}

double actuator_current(const ActuatorElectrical& elec, const DriveSignal& signal, double t) {
  return elec.capacitance * voltage_rate_at(signal, t);
}

double instantaneous_power(double voltage, double current, bool rectified) {
  const double p = voltage * current;
  return rectified ? std::max(p, 0.0) : p;
}

PowerSample sample_power(const ActuatorElectrical& elec, const DriveSignal& left,
                         const DriveSignal& right, double t) {
  PowerSample s;
  s.t = t;
  s.v_left = voltage_at(left, t);
  s.i_left = actuator_current(elec, left, t);
  s.v_right = voltage_at(right, t);
  s.i_right = actuator_current(elec, right, t);
  s.p_rectified = instantaneous_power(s.v_left, s.i_left, true) +
                  instantaneous_power(s.v_right, s.i_right, true);
  s.p_signed = instantaneous_power(s.v_left, s.i_left, false) +
               instantaneous_power(s.v_right, s.i_right, false);
  return s;
}

template <class F>
double EnergyTrace::integrate(F&& value, double t0, double t1) const {
  double sum = 0.0;
  for (std::size_t k = 1; k < samples_.size(); ++k) {
    const PowerSample& a = samples_[k - 1];
    const PowerSample& b = samples_[k];
    if (a.t < t0 || b.t > t1) continue;
    sum += 0.5 * (value(a) + value(b)) * (b.t - a.t);
  }
  return sum;
}

double EnergyTrace::energy_rectified(double t0, double t1) const {
  return integrate([](const PowerSample& s) { return s.p_rectified; }, t0, t1);
}

double EnergyTrace::energy_signed(double t0, double t1) const {
  return integrate([](const PowerSample& s) { return s.p_signed; }, t0, t1);
}

double EnergyTrace::duration() const {
  return samples_.size() < 2 ? 0.0 : samples_.back().t - samples_.front().t;
}

double EnergyTrace::mean_power(double t0, double t1) const {
  double span = 0.0;
  for (std::size_t k = 1; k < samples_.size(); ++k) {
    if (samples_[k - 1].t < t0 || samples_[k].t > t1) continue;
    span += samples_[k].t - samples_[k - 1].t;
  }
  return span > 0.0 ? energy_rectified(t0, t1) / span : 0.0;
}

double trapezoid(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  double sum = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) sum += 0.5 * (y[k - 1] + y[k]) * (t[k] - t[k - 1]);
  return sum;
}

double path_length(std::span<const Eigen::Vector3d> points) {
  double s = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) s += (points[k] - points[k - 1]).norm();
  return s;
}

CostOfTransport cost_of_transport(double energy, double duration, double distance,
                                  double min_distance) {
  if (distance < 0.0) throw std::invalid_argument("cost_of_transport: negative distance");
  CostOfTransport c;
  c.energy = energy;
  c.distance = distance;
  c.duration = duration;
  c.mean_power = duration > 0.0 ? energy / duration : 0.0;
  c.applicable = distance >= min_distance && distance > 0.0;
  if (c.applicable) {
    c.joules_per_meter = energy / distance;
    // J/m and mJ/mm are the same number.
    c.millijoules_per_millimeter = c.joules_per_meter;
  }
  return c;
}

CostOfTransport cost_of_transport(const EnergyTrace& trace, double distance, double min_distance) {
  return cost_of_transport(trace.energy_rectified(), trace.duration(), distance, min_distance);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace flapsim
