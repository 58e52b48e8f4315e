#include "flapsim/sensors.hpp"

#include <cmath>
#include <stdexcept>

namespace flapsim {

using Eigen::Matrix3d;
using Eigen::Quaterniond;
using Eigen::Vector3d;

void SensorConfig::validate() const {
  if (!(rate > 0.0)) throw std::invalid_argument("sensor: rate must be > 0");
  if (!(position_noise >= 0.0)) throw std::invalid_argument("sensor: position_noise must be >= 0");
  if (!(orientation_noise >= 0.0))
    throw std::invalid_argument("sensor: orientation_noise must be >= 0");
  if (latency_ticks < 0) throw std::invalid_argument("sensor: latency_ticks must be >= 0");
}

Matrix3d quaternion_to_rotation(const Quaterniond& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Matrix3d r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

Quaterniond rotation_to_quaternion(const Matrix3d& r) {
  Quaterniond q(r);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return q;
}

MoCapSample sample(const RobotState& truth, const SensorConfig& cfg, std::mt19937_64& rng) {
  MoCapSample s;
  s.time = truth.time;
  s.position = truth.position;
  Quaterniond q = rotation_to_quaternion(truth.attitude);
  if (cfg.position_noise > 0.0) {
    std::normal_distribution<double> n(0.0, cfg.position_noise);
    for (int i = 0; i < 3; ++i) s.position[i] += n(rng);
  }
  if (cfg.orientation_noise > 0.0) {
    std::normal_distribution<double> n(0.0, cfg.orientation_noise);
    const Vector3d rot(n(rng), n(rng), n(rng));
    const double angle = rot.norm();
    if (angle > 0.0) q = q * Quaterniond(Eigen::AngleAxisd(angle, rot / angle));
    q.normalize();
    if (q.w() < 0.0) q.coeffs() *= -1.0;
  }
  s.orientation = q;
  return s;
}

MoCapEmulator::MoCapEmulator(SensorConfig cfg) : cfg_(cfg), rng_(cfg.seed) { cfg_.validate(); }

MoCapSample MoCapEmulator::tick(const RobotState& truth) {
  pending_.push_back(sample(truth, cfg_, rng_));
  while (static_cast<int>(pending_.size()) > cfg_.latency_ticks + 1) pending_.pop_front();
  return pending_.front();
}

}  // namespace flapsim
