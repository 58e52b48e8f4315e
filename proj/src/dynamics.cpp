#include "flapsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flapsim {

using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Airborne: return "airborne";
    case Mode::Ground: return "ground";
    case Mode::WaterSurface: return "water";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Liftoff: return "liftoff";
    case EventKind::UprightLanding: return "upright_landing";
    case EventKind::Toppled: return "toppled";
    case EventKind::WaterLanding: return "water_landing";
    case EventKind::FilmBroken: return "film_broken";
    case EventKind::LegContact: return "leg_contact";
    case EventKind::Settled: return "settled";
    case EventKind::SurfaceBound: return "surface_bound";
  }
  return "?";
}

void BodyParams::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("body: mass must be > 0");
  if (!(inertia.minCoeff() > 0.0)) throw std::invalid_argument("body: inertia must be > 0");
  if (!(thrust_moment_arm > 0.0)) throw std::invalid_argument("body: thrust_moment_arm must be > 0");
  if (!(drag_center_height > 0.0))
    throw std::invalid_argument("body: drag_center_height must be > 0");
  if (!(friction_coefficient > 0.0))
    throw std::invalid_argument("body: friction_coefficient must be > 0");
  if (!(gravity > 0.0)) throw std::invalid_argument("body: gravity must be > 0");
  if (!(yaw_contact_radius > 0.0))
    throw std::invalid_argument("body: yaw_contact_radius must be > 0");
  if (!(yaw_damping >= 0.0)) throw std::invalid_argument("body: yaw_damping must be >= 0");
}

void check_finite(const RobotState& s) {
  auto bad = [&](const char* what) {
    throw NumericalAbort(std::string("non-finite ") + what + " at t=" + std::to_string(s.time));
  };
  if (!s.position.allFinite()) bad("position");
  if (!s.velocity.allFinite()) bad("velocity");
  if (!s.attitude.allFinite()) bad("attitude");
  if (!s.body_rate.allFinite()) bad("body rate");
  if (!std::isfinite(s.time)) bad("time");
}

Matrix3d orthonormalize(const Matrix3d& r) {
  Matrix3d out;
  Vector3d c0 = r.col(0).normalized();
  Vector3d c1 = (r.col(1) - c0.dot(r.col(1)) * c0).normalized();
  out.col(0) = c0;
  out.col(1) = c1;
  out.col(2) = c0.cross(c1);
  return out;
}

double tilt_angle(const Matrix3d& attitude) {
  return std::acos(std::clamp(attitude(2, 2), -1.0, 1.0));
}

double yaw_angle(const Matrix3d& attitude) { return std::atan2(attitude(1, 0), attitude(0, 0)); }

Matrix3d yaw_rotation(double yaw) {
  return Eigen::AngleAxisd(yaw, Vector3d::UnitZ()).toRotationMatrix();
}

namespace {

Matrix3d skew(const Vector3d& w) {
  Matrix3d s;
  s << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
  return s;
}

struct Derivative {
  Vector3d dp;
  Vector3d dv;
  Matrix3d dr;
  Vector3d dw;
};

Derivative rigid_body_rates(const Vector3d& v, const Matrix3d& r, const Vector3d& w,
                            const Wrench& wrench, const BodyParams& p) {
  Derivative d;
  d.dp = v;
  d.dv = r * wrench.force / p.mass - Vector3d(0.0, 0.0, p.gravity);
  d.dr = r * skew(w);
  Vector3d torque = wrench.torque;
  torque.z() -= p.yaw_damping * w.z();
  const Vector3d iw = p.inertia.cwiseProduct(w);
  d.dw = (torque - w.cross(iw)).cwiseQuotient(p.inertia);
  return d;
}

void check_step(double dt) {
  if (!(dt > 0.0 && dt <= kMaxStep)) {
    throw std::invalid_argument("time step must lie in (0, 2e-4] s");
  }
}

}  // namespace

RobotState step(const RobotState& s, const Wrench& wrench, const BodyParams& p, double dt) {
  check_step(dt);
  const Derivative k1 = rigid_body_rates(s.velocity, s.attitude, s.body_rate, wrench, p);
  const Derivative k2 = rigid_body_rates(s.velocity + 0.5 * dt * k1.dv,
                                         s.attitude + 0.5 * dt * k1.dr,
                                         s.body_rate + 0.5 * dt * k1.dw, wrench, p);
  const Derivative k3 = rigid_body_rates(s.velocity + 0.5 * dt * k2.dv,
                                         s.attitude + 0.5 * dt * k2.dr,
                                         s.body_rate + 0.5 * dt * k2.dw, wrench, p);
  const Derivative k4 = rigid_body_rates(s.velocity + dt * k3.dv, s.attitude + dt * k3.dr,
                                         s.body_rate + dt * k3.dw, wrench, p);
  RobotState out = s;
  const double w = dt / 6.0;
  out.position += w * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  out.velocity += w * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
  out.attitude = orthonormalize(s.attitude + w * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr));
  out.body_rate += w * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw);
  out.time += dt;
  check_finite(out);
  return out;
}

namespace {

// One Coulomb stick-slip update of a planar velocity or a yaw rate.
// `threshold` is both the breakaway and the kinetic friction level.
template <class V, class Dot>
V stick_slip(const V& rate, const V& drive, double threshold, double inertia, double dt, Dot dot) {
  const double speed = std::sqrt(dot(rate, rate));
  if (speed > 0.0) {
    const V next = rate + dt * (drive - threshold * rate / speed) / inertia;
    // Friction never reverses motion; stop, then re-check breakaway next step.
    return dot(next, rate) > 0.0 ? next : V(rate * 0.0);
  }
  const double drive_mag = std::sqrt(dot(drive, drive));
  if (drive_mag > threshold) return dt * (drive - threshold * drive / drive_mag) / inertia;
  return rate * 0.0;
}

double scalar_dot(double a, double b) { return a * b; }
double planar_dot(const Vector2d& a, const Vector2d& b) { return a.dot(b); }

}  // namespace

RobotState ground_step(const RobotState& s, const PlanarLoad& load, const BodyParams& p,
                       double dt) {
  check_step(dt);
  if (s.mode != Mode::Ground) throw std::invalid_argument("ground_step: state is not in ground mode");
  const double yaw = yaw_angle(s.attitude);
  const Vector2d heading(std::cos(yaw), std::sin(yaw));
  const double normal = p.weight();
  const double f_static = p.friction_coefficient * normal;

  const Vector2d v = s.velocity.head<2>();
  const Vector2d drive = load.forward_force * heading;
  const Vector2d v_next = stick_slip<Vector2d>(v, drive, f_static, p.mass, dt, planar_dot);

  const double wz = s.body_rate.z();
  const double wz_next = stick_slip<double>(wz, load.yaw_torque, f_static * p.yaw_contact_radius,
                                            p.inertia.z(), dt, scalar_dot);

  RobotState out = s;
  out.velocity = Vector3d(v_next.x(), v_next.y(), 0.0);
  out.position.head<2>() += dt * v_next;
  out.position.z() = p.contact_height;
  out.body_rate = Vector3d(0.0, 0.0, wz_next);
  out.attitude = yaw_rotation(yaw + dt * wz_next);
  out.time += dt;
  check_finite(out);
  return out;
}

WaterStepResult water_step(const RobotState& s, const PlanarLoad& load, double vertical_thrust,
                           const FlotationReport& legs, const BodyParams& p, const WaterDrag& drag,
                           double dt) {
  check_step(dt);
  if (s.mode != Mode::WaterSurface)
    throw std::invalid_argument("water_step: state is not in water-surface mode");
  if (!(legs.flotation_margin > 0.0))
    throw std::invalid_argument("water_step: legs do not float this body");

  const double yaw = yaw_angle(s.attitude);
  const Vector2d heading(std::cos(yaw), std::sin(yaw));
  const Vector2d v = s.velocity.head<2>();
  const Vector2d v_next = v + dt * (load.forward_force * heading - drag.linear * v) / p.mass;
  const double wz = s.body_rate.z();
  const double wz_next = wz + dt * (load.yaw_torque - drag.yaw * wz) / p.inertia.z();

  WaterStepResult r;
  r.surface_bound = vertical_thrust > p.weight();
  r.state = s;
  r.state.velocity = Vector3d(v_next.x(), v_next.y(), 0.0);
  r.state.position.head<2>() += dt * v_next;
  r.state.position.z() = p.contact_height;
  r.state.body_rate = Vector3d(0.0, 0.0, wz_next);
  r.state.attitude = yaw_rotation(yaw + dt * wz_next);
  r.state.time += dt;
  check_finite(r.state);
  return r;
}

std::optional<ModeEvent> detect_mode_transition(const RobotState& s, const BodyParams& p,
                                                Surface surface, const TouchdownConfig& cfg,
                                                const FlotationReport* flotation) {
  if (s.mode != Mode::Airborne) return std::nullopt;
  if (s.position.z() > p.contact_height || s.velocity.z() >= 0.0) return std::nullopt;

  ModeEvent e;
  e.time = s.time;
  e.tilt = tilt_angle(s.attitude);
  e.vertical_speed = -s.velocity.z();
  if (surface == Surface::Ground) {
    const double limit = cfg.topple_threshold_deg * std::numbers::pi / 180.0;
    e.kind = e.tilt < limit ? EventKind::UprightLanding : EventKind::Toppled;
  } else {
    const bool floats = flotation != nullptr && flotation->flotation_margin > 0.0;
    e.kind = floats && e.vertical_speed < cfg.film_break_speed ? EventKind::WaterLanding
                                                                : EventKind::FilmBroken;
  }
  return e;
}

std::vector<ModeEvent> water_touchdown_sequence(const RobotState& at_contact,
                                                const LegGeometry& legs,
                                                const TouchdownConfig& cfg) {
  // Lowest point of each parallel leg, legs spread across body y.
  const int n = legs.leg_count;
  std::vector<double> lowest(n);
  for (int i = 0; i < n; ++i) {
    const double y = (i - 0.5 * (n - 1)) * legs.spacing;
    const double len = i < static_cast<int>(legs.segment_lengths.size())
                           ? legs.segment_lengths[i]
                           : legs.total_length() / n;
    const Vector3d a = at_contact.attitude * Vector3d(0.5 * len, y, 0.0);
    const Vector3d b = at_contact.attitude * Vector3d(-0.5 * len, y, 0.0);
    lowest[i] = std::min(a.z(), b.z());
  }
  const double first = *std::min_element(lowest.begin(), lowest.end());
  // Slow touchdowns are still carried through by the body's rotation.
  const double speed = std::max(std::abs(at_contact.velocity.z()), 0.05);

  std::vector<ModeEvent> events;
  for (int i = 0; i < n; ++i) {
    ModeEvent e;
    e.kind = EventKind::LegContact;
    e.leg = i;
    e.time = at_contact.time + (lowest[i] - first) / speed;
    e.tilt = tilt_angle(at_contact.attitude);
    e.vertical_speed = std::abs(at_contact.velocity.z());
    events.push_back(e);
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const ModeEvent& a, const ModeEvent& b) { return a.time < b.time; });
  ModeEvent settled;
  settled.kind = EventKind::Settled;
  settled.time = events.back().time + cfg.water_settle_time;
  events.push_back(settled);
  return events;
}

RobotState settle_on_surface(const RobotState& s, const BodyParams& p, Mode mode) {
  RobotState out = s;
  out.mode = mode;
  out.position.z() = p.contact_height;
  out.velocity.setZero();
  out.body_rate.setZero();
  out.attitude = yaw_rotation(yaw_angle(s.attitude));
  return out;
}

}  // namespace flapsim
