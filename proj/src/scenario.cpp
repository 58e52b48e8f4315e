#include "flapsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "flapsim/config.hpp"
#include "flapsim/csv_log.hpp"

namespace flapsim {

using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

namespace {

template <class F>
void collect(std::vector<std::string>& out, F&& check) {
  try {
    check();
  } catch (const std::exception& e) {
    out.emplace_back(e.what());
  }
}

DriveSignal make_signal(const Scenario& sc, const WingCommand& c) {
  return DriveSignal(sc.drive.offset_voltage, c.amplitude, c.mu, sc.drive.frequency,
                     sc.drive.envelope);
}

bool same(const WingCommand& a, const WingCommand& b) {
  return a.amplitude == b.amplitude && a.mu == b.mu;
}

Matrix3d initial_attitude(const Scenario& sc) {
  using Eigen::AngleAxisd;
  return (AngleAxisd(sc.initial_yaw, Vector3d::UnitZ()) *
          AngleAxisd(sc.initial_pitch, Vector3d::UnitY()) *
          AngleAxisd(sc.initial_roll, Vector3d::UnitX()))
      .toRotationMatrix();
}

bool involves_water(const Scenario& sc) {
  return sc.initial_mode == Mode::WaterSurface ||
         (sc.initial_mode == Mode::Airborne && sc.surface == Surface::Water);
}

}  // namespace

void Scenario::validate() const {
  std::vector<std::string> v;
  if (schema != kConfigSchema) v.push_back("schema: unsupported version " + std::to_string(schema));
  if (!(duration > 0.0)) v.push_back("duration: must be > 0");
  if (!(dt > 0.0 && dt <= kMaxStep)) v.push_back("dt: must lie in (0, 2e-4] s");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i].t > schedule[i - 1].t))
      v.push_back("setpoints: knot times must be strictly increasing (knot " + std::to_string(i) +
                  ")");
  for (const auto& k : schedule)
    if (!k.position.allFinite() || !std::isfinite(k.t)) v.push_back("setpoints: non-finite knot");
  collect(v, [&] { body.validate(); });
  collect(v, [&] { aero.validate(); });
  collect(v, [&] { wing.validate(); });
  collect(v, [&] { electrical.validate(); });
  collect(v, [&] { sensor.validate(); });
  collect(v, [&] { gains.validate(); });
  collect(v, [&] { limits.validate(); });
  collect(v, [&] { make_signal(*this, open_loop.left); });
  collect(v, [&] { make_signal(*this, open_loop.right); });
  if (!(drive.mu_limit >= 0.0 && drive.mu_limit <= kMaxSecondHarmonicRatio))
    v.push_back("drive.mu_limit: must lie in [0, 0.5]");
  if (std::abs(sensor.rate - limits.control_rate) > 1e-9)
    v.push_back("sensor.rate must equal controller.limits.control_rate");
  if (closed_loop && initial_mode != Mode::Airborne)
    v.push_back("controller: closed loop requires initial mode airborne");
  if (involves_water(*this)) {
    collect(v, [&] { legs.validate(); });
    collect(v, [&] { water.validate(); });
    if (v.empty() && !flotation_check(legs, water, body.mass).floats)
      v.push_back("legs: flotation margin is not positive for this mass");
    if (!(water_drag.linear > 0.0) || !(water_drag.yaw > 0.0))
      v.push_back("water.drag: coefficients must be > 0");
  }
  if (metrics.window_end >= 0.0 && !(metrics.window_end > metrics.window_start))
    v.push_back("metrics.window: end must exceed start");
  if (!(metrics.rms_window > 0.0)) v.push_back("metrics.rms_window: must be > 0");
  if (!v.empty()) throw ConfigError(std::move(v));
}

MixerContext Scenario::mixer_context() const {
  MixerContext ctx;
  ctx.body = body;
  ctx.aero = aero;
  ctx.wing = wing;
  ctx.flap_frequency = drive.frequency;
  ctx.offset_voltage = drive.offset_voltage;
  ctx.envelope = drive.envelope;
  ctx.mu_limit = drive.mu_limit;
  return ctx;
}

Setpoint Scenario::setpoint_at(double t) const {
  Setpoint sp;
  if (schedule.empty()) {
    sp.position = initial_position;
    return sp;
  }
  if (t <= schedule.front().t) {
    sp.position = schedule.front().position;
    return sp;
  }
  if (t >= schedule.back().t) {
    sp.position = schedule.back().position;
    return sp;
  }
  const auto hi = std::upper_bound(schedule.begin(), schedule.end(), t,
                                   [](double x, const SetpointKnot& k) { return x < k.t; });
  const auto lo = hi - 1;
  const double span = hi->t - lo->t;
  const double s = (t - lo->t) / span;
  sp.position = (1.0 - s) * lo->position + s * hi->position;
  if (velocity_feedforward)
    sp.lateral_velocity = (hi->position - lo->position).head<2>() / span;
  return sp;
}

namespace {

struct Simulator {
  const Scenario& sc;
  MixerContext ctx;
  FlotationReport flotation;
  RunResult result;
  RobotState state;

  WingCommand cached_left{-1.0, 0.0}, cached_right{-1.0, 0.0};
  Wrench cached_wrench;
  PlanarLoad cached_planar;

  explicit Simulator(const Scenario& s) : sc(s), ctx(s.mixer_context()) {
    if (involves_water(sc)) flotation = flotation_check(sc.legs, sc.water, sc.body.mass);
  }

  void refresh_cycle_means(const WingCommand& l, const WingCommand& r) {
    if (same(l, cached_left) && same(r, cached_right)) return;
    cached_left = l;
    cached_right = r;
    cached_wrench = wing_wrench(l, r, ctx);
    cached_planar.forward_force = cached_wrench.force.x();
    cached_planar.yaw_torque = cached_wrench.torque.z();
  }

  double vertical_thrust(const WingCommand& l, const WingCommand& r) const {
    return per_wing_thrust_per_volt(sc.aero, sc.drive.frequency) * (l.amplitude + r.amplitude);
  }

  void push(ModeEvent e) { result.events.push_back(e); }

  /// Returns true when the run should stop.
  bool touchdown(const ModeEvent& e) {
    push(e);
    result.summary.landing = e;
    if (e.kind == EventKind::Toppled || e.kind == EventKind::FilmBroken) return true;
    if (e.kind == EventKind::WaterLanding) {
      for (const auto& le : water_touchdown_sequence(state, sc.legs, sc.touchdown)) push(le);
      if (sc.stop_on_touchdown) return true;
      state = settle_on_surface(state, sc.body, Mode::WaterSurface);
      return false;
    }
    if (sc.stop_on_touchdown) return true;
    state = settle_on_surface(state, sc.body, Mode::Ground);
    return false;
  }

  RunResult run() {
    sc.validate();
    const double tc = 1.0 / sc.limits.control_rate;
    const int substeps = static_cast<int>(std::ceil(tc / sc.dt - 1e-9));
    const double h = tc / substeps;
    const long ticks = std::max<long>(1, std::lround(sc.duration / tc));
    const double fs = sc.electrical.sample_rate;

    state.position = sc.initial_position;
    state.velocity = sc.initial_velocity;
    state.attitude = initial_attitude(sc);
    state.mode = sc.initial_mode;
    if (state.mode != Mode::Airborne) state = settle_on_surface(state, sc.body, state.mode);

    MoCapEmulator mocap([&] {
      SensorConfig c = sc.sensor;
      c.seed = sc.seed;
      return c;
    }());
    std::optional<CascadedController> controller;
    if (sc.closed_loop) controller.emplace(sc.gains, sc.limits, ctx);

    const OpenLoopDrive surface_drive =
        sc.initial_mode == Mode::Airborne && sc.closed_loop ? OpenLoopDrive{} : sc.open_loop;

    long power_index = 0;
    bool stop = false;
    for (long k = 0; k <= ticks && !stop; ++k) {
      const double tk = k * tc;
      state.time = tk;
      const MoCapSample meas = mocap.tick(state);

      TrajectoryRow row;
      row.t = tk;
      row.truth = state;
      row.setpoint = sc.setpoint_at(tk);
      if (state.mode == Mode::Airborne && controller) {
        const ControlOutput out = controller->update(meas, row.setpoint);
        row.left = out.mix.left;
        row.right = out.mix.right;
        row.a_z = out.a_z;
        row.tau_x = out.tau_x;
        row.tau_y = out.tau_y;
        row.saturated = out.mix.saturated || out.mix.thrust_clamped;
        if (row.saturated) ++result.summary.saturation_count;
      } else if (state.mode == Mode::Airborne) {
        row.left = sc.open_loop.left;
        row.right = sc.open_loop.right;
      } else {
        row.left = surface_drive.left;
        row.right = surface_drive.right;
      }
      row.thrust = vertical_thrust(row.left, row.right);
      result.trajectory.push_back(row);
      if (k == ticks) break;

      const DriveSignal left = make_signal(sc, row.left);
      const DriveSignal right = make_signal(sc, row.right);
      for (;; ++power_index) {
        const double tp = power_index / fs;
        if (tp >= tk + tc - 1e-12) break;
        result.power.push(sample_power(sc.electrical, left, right, tp));
      }

      if (state.mode == Mode::Ground && row.thrust >= sc.body.weight()) {
        push({EventKind::Liftoff, tk, 0.0, 0.0, -1});
        result.summary.lifted_off = true;
        state.mode = Mode::Airborne;
      }
      if (state.mode != Mode::Ground) refresh_cycle_means(row.left, row.right);

      const double d = sc.body.thrust_moment_arm;
      for (int i = 0; i < substeps && !stop; ++i) {
        switch (state.mode) {
          case Mode::Airborne: {
            Wrench w = cached_wrench;
            w.torque.z() += sc.yaw_disturbance;
            state = step(state, w, sc.body, h);
            if (auto e = detect_mode_transition(state, sc.body, sc.surface, sc.touchdown,
                                                &flotation))
              stop = touchdown(*e);
            break;
          }
          case Mode::Ground: {
            const double fl = instantaneous_body_force(left, sc.wing, sc.aero, state.time);
            const double fr = instantaneous_body_force(right, sc.wing, sc.aero, state.time);
            state = ground_step(state, {fl + fr, d * (fr - fl)}, sc.body, h);
            break;
          }
          case Mode::WaterSurface: {
            const auto r = water_step(state, cached_planar, row.thrust, flotation, sc.body,
                                      sc.water_drag, h);
            state = r.state;
            if (r.surface_bound && !result.summary.surface_bound) {
              result.summary.surface_bound = true;
              push({EventKind::SurfaceBound, state.time, 0.0, 0.0, -1});
            }
            break;
          }
        }
      }
      if (stop) {
        TrajectoryRow last = row;
        last.t = state.time;
        last.truth = state;
        result.trajectory.push_back(last);
      }
    }
    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const ModeEvent& a, const ModeEvent& b) { return a.time < b.time; });
    summarize();
    return std::move(result);
  }

  void summarize() {
    RunSummary& s = result.summary;
    const auto& rows = result.trajectory;
    s.scenario = sc.name;
    s.final_state = rows.back().truth;
    const double t_end = rows.back().t;

    Vector3d sq = Vector3d::Zero();
    double z_sum = 0.0;
    int n = 0;
    for (const auto& r : rows) {
      const Vector3d e = r.truth.position - r.setpoint.position;
      if (s.reach_time < 0.0 && std::abs(e.z()) < sc.metrics.reach_tolerance) s.reach_time = r.t;
      if (r.t >= t_end - sc.metrics.rms_window - 1e-12) {
        sq += e.cwiseAbs2();
        z_sum += e.z();
        ++n;
      }
    }
    s.rms_error = (sq / std::max(n, 1)).cwiseSqrt();
    s.rms_lateral = std::sqrt((sq.x() + sq.y()) / std::max(n, 1));
    s.mean_z_error = z_sum / std::max(n, 1);

    const double w0 = sc.metrics.window_start;
    const double w1 = sc.metrics.window_end < 0.0 ? t_end : std::min(sc.metrics.window_end, t_end);
    std::vector<Vector3d> path;
    double yaw_total = 0.0, prev_yaw = 0.0;
    bool started = false;
    Vector2d p0 = Vector2d::Zero(), p1 = Vector2d::Zero();
    double t0 = 0.0, t1 = 0.0;
    for (const auto& r : rows) {
      if (r.t < w0 - 1e-12 || r.t > w1 + 1e-12) continue;
      const double yaw = yaw_angle(r.truth.attitude);
      if (!started) {
        p0 = r.truth.position.head<2>();
        t0 = r.t;
        started = true;
      } else {
        yaw_total += std::remainder(yaw - prev_yaw, 2.0 * std::numbers::pi);
      }
      prev_yaw = yaw;
      p1 = r.truth.position.head<2>();
      t1 = r.t;
      path.push_back(r.truth.position);
    }
    const double span = t1 - t0;
    s.displacement = p1 - p0;
    s.mean_speed = span > 0.0 ? s.displacement.norm() / span : 0.0;
    s.mean_yaw_rate = span > 0.0 ? yaw_total / span : 0.0;
    s.path_length = path_length(path);
    s.energy_rectified = result.power.energy_rectified(t0, t1);
    s.energy_signed = result.power.energy_signed(t0, t1);
    s.mean_power = span > 0.0 ? s.energy_rectified / span : 0.0;
    s.cot = cost_of_transport(s.energy_rectified, span, s.path_length, sc.metrics.min_cot_distance);
  }
};

}  // namespace

RunResult simulate(const Scenario& scenario) { return Simulator(scenario).run(); }

void write_outputs(const RunResult& result, const Scenario& scenario, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);
  if (scenario.output.trajectory) {
    std::ofstream os(root / "trajectory.csv");
    write_trajectory_csv(os, result.trajectory);
  }
  if (scenario.output.power) {
    std::ofstream os(root / "power.csv");
    write_power_csv(os, result.power);
  }
  if (scenario.output.events) {
    std::ofstream os(root / "events.csv");
    write_events_csv(os, result.events);
  }
  const RunSummary& s = result.summary;
  nlohmann::ordered_json j;
  j["scenario"] = s.scenario;
  j["final_time"] = s.final_state.time;
  j["final_position"] = {s.final_state.position.x(), s.final_state.position.y(),
                         s.final_state.position.z()};
  j["final_mode"] = to_string(s.final_state.mode);
  if (s.landing) {
    j["landing"] = {{"event", to_string(s.landing->kind)},
                    {"time", s.landing->time},
                    {"tilt_deg", s.landing->tilt * 180.0 / std::numbers::pi},
                    {"vertical_speed", s.landing->vertical_speed}};
  } else {
    j["landing"] = nullptr;
  }
  j["rms_error"] = {s.rms_error.x(), s.rms_error.y(), s.rms_error.z()};
  j["rms_lateral"] = s.rms_lateral;
  j["mean_z_error"] = s.mean_z_error;
  j["reach_time"] = s.reach_time;
  j["mean_speed"] = s.mean_speed;
  j["displacement"] = {s.displacement.x(), s.displacement.y()};
  j["mean_yaw_rate_deg"] = s.mean_yaw_rate * 180.0 / std::numbers::pi;
  j["path_length"] = s.path_length;
  j["energy_rectified"] = s.energy_rectified;
  j["energy_signed"] = s.energy_signed;
  j["mean_power"] = s.mean_power;
  j["cot_applicable"] = s.cot.applicable;
  j["cot_mj_per_mm"] = s.cot.millijoules_per_millimeter;
  j["saturation_count"] = s.saturation_count;
  j["surface_bound"] = s.surface_bound;
  j["lifted_off"] = s.lifted_off;
  std::ofstream os(root / "summary.json");
  // Fixed formatting of doubles keeps the file byte-stable.
  os << j.dump(2) << "\n";
}

std::vector<SpeedCell> ground_speed_sweep(const Scenario& base, const std::vector<double>& amplitudes,
                                          const std::vector<double>& frequencies) {
  std::vector<SpeedCell> cells;
  for (double a : amplitudes) {
    for (double f : frequencies) {
      SpeedCell c{a, f, 0.0, false};
      const double thrust = 2.0 * per_wing_thrust_per_volt(base.aero, f) * a;
      if (f >= base.aero.resonant_frequency || thrust >= base.body.weight()) {
        c.liftoff_regime = true;
        cells.push_back(c);
        continue;
      }
      Scenario sc = base;
      sc.initial_mode = Mode::Ground;
      sc.closed_loop = false;
      sc.drive.frequency = f;
      sc.open_loop.left.amplitude = a;
      sc.open_loop.right.amplitude = a;
      c.speed = simulate(sc).summary.mean_speed;
      cells.push_back(c);
    }
  }
  return cells;
}

bool speed_grid_monotone(const std::vector<SpeedCell>& cells, double slack) {
  for (const auto& a : cells) {
    if (a.liftoff_regime) continue;
    for (const auto& b : cells) {
      if (b.liftoff_regime || &a == &b) continue;
      const bool along_f = a.amplitude == b.amplitude && b.frequency > a.frequency;
      const bool along_a = a.frequency == b.frequency && b.amplitude > a.amplitude;
      if ((along_f || along_a) && b.speed + slack < a.speed) return false;
    }
  }
  return true;
}

std::vector<CotRow> cot_frequency_sweep(const Scenario& ground, double amplitude,
                                        const std::vector<double>& frequencies,
                                        const Scenario* hover) {
  std::vector<CotRow> rows;
  for (double f : frequencies) {
    Scenario sc = ground;
    sc.initial_mode = Mode::Ground;
    sc.closed_loop = false;
    sc.drive.frequency = f;
    sc.open_loop.left.amplitude = amplitude;
    sc.open_loop.right.amplitude = amplitude;
    const RunSummary s = simulate(sc).summary;
    rows.push_back({"ground", f, s.mean_speed, s.mean_power, s.cot});
  }
  if (hover) {
    const RunSummary s = simulate(*hover).summary;
    CotRow r{"hover", hover->drive.frequency, s.mean_speed, s.mean_power, s.cot};
    r.cot.applicable = false;
    r.cot.joules_per_meter = 0.0;
    r.cot.millijoules_per_millimeter = 0.0;
    rows.push_back(r);
  }
  return rows;
}

ClearanceResult clearance_check(double gap_height, const ClearanceGeometry& g) {
  ClearanceResult r;
  r.gap_height = gap_height;
  r.bounding_height = g.leg_height + std::max(g.airframe_height, g.wing_root_height);
  r.passes = gap_height >= r.bounding_height;
  return r;
}

WaterDrag calibrate_water_drag(const BodyParams& body, const AeroParams& aero,
                               const WingKinematicsMap& wing, const DriveConfig& drive,
                               const WaterCalibrationTargets& t) {
  auto mean_force = [&](double a, double mu, double f) {
    const DriveSignal s(drive.offset_voltage, a, mu, f, drive.envelope);
    return cycle_mean_horizontal_force(s, wing, aero);
  };
  WaterDrag d;
  d.linear = 2.0 * mean_force(t.line_amplitude, t.line_mu, t.line_frequency) / t.line_speed;
  const double torque = body.thrust_moment_arm *
                        (mean_force(t.turn_right_amplitude, t.turn_mu, t.turn_frequency) -
                         mean_force(t.turn_left_amplitude, t.turn_mu, t.turn_frequency));
  d.yaw = torque / (t.turn_rate_deg * std::numbers::pi / 180.0);
  return d;
}

double hover_cost(const RunSummary& s, double reach_deadline) {
  const bool late = s.reach_time < 0.0 || s.reach_time > reach_deadline;
  const bool crashed = s.landing.has_value();
  return s.rms_lateral + 2.0 * s.rms_error.z() + std::abs(s.mean_z_error) + (late ? 1.0 : 0.0) +
         (crashed ? 10.0 : 0.0);
}

TuneResult tune_gains(const Scenario& hover, const ControllerGains& start, int rounds) {
  TuneResult best;
  best.gains = start;
  auto score = [&](const ControllerGains& g) {
    Scenario sc = hover;
    sc.gains = g;
    ++best.evaluations;
    try {
      return hover_cost(simulate(sc).summary);
    } catch (const NumericalAbort&) {
      return 1e9;
    }
  };
  best.cost = score(best.gains);
  double* fields[] = {&best.gains.attitude_p, &best.gains.attitude_d, &best.gains.attitude_i,
                      &best.gains.lateral_p,  &best.gains.lateral_d,  &best.gains.altitude_p,
                      &best.gains.altitude_d, &best.gains.altitude_i};
  double scale = 0.5;
  for (int r = 0; r < rounds; ++r, scale *= 0.5) {
    for (double* field : fields) {
      for (double factor : {1.0 + scale, 1.0 / (1.0 + scale)}) {
        const double saved = *field;
        *field = saved * factor;
        const double c = score(best.gains);
        if (c < best.cost) {
          best.cost = c;
        } else {
          *field = saved;
        }
      }
    }
  }
  return best;
}

}  // namespace flapsim
