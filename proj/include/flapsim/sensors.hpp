#pragma once

// Motion-capture emulation: pose samples at a fixed rate with Gaussian noise
// and optional whole-tick latency.

#include <cstdint>
#include <deque>
#include <random>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "flapsim/dynamics.hpp"

namespace flapsim {

/// Quaternions are scalar-first (w, x, y, z) wherever they are written out;
/// in memory they are Eigen::Quaterniond with w >= 0.
struct MoCapSample {
  double time = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};

struct SensorConfig {
  double rate = 240.0;
  double position_noise = 1e-4;     // m, per axis
  double orientation_noise = 2e-3;  // rad, per axis of the perturbation
  int latency_ticks = 0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Standard unit-quaternion to rotation-matrix formula.
Eigen::Matrix3d quaternion_to_rotation(const Eigen::Quaterniond& q);
/// Inverse of quaternion_to_rotation, sign fixed so that w >= 0.
Eigen::Quaterniond rotation_to_quaternion(const Eigen::Matrix3d& r);

/// One noisy sample of the true pose, drawing from `rng`.
MoCapSample sample(const RobotState& truth, const SensorConfig& cfg, std::mt19937_64& rng);

/// Stateful sampler owning its RNG and latency buffer.
class MoCapEmulator {
 public:
  explicit MoCapEmulator(SensorConfig cfg);

  /// Sample the current truth and return the one delivered this tick
  /// (`latency_ticks` old; the oldest available while the buffer fills).
  MoCapSample tick(const RobotState& truth);
  double period() const { return 1.0 / cfg_.rate; }
  const SensorConfig& config() const { return cfg_; }

 private:
  SensorConfig cfg_;
  std::mt19937_64 rng_;
  std::deque<MoCapSample> pending_;
};

}  // namespace flapsim
