#include "flapsim/config.hpp"

#include <filesystem>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace flapsim {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s = "invalid configuration:";
  for (const auto& x : v) s += "\n  - " + x;
  return s;
}

constexpr double kDeg = std::numbers::pi / 180.0;

YAML::Node merge(const YAML::Node& base, const YAML::Node& over) {
  if (!base.IsMap() || !over.IsMap()) return YAML::Clone(over);
  YAML::Node out = YAML::Clone(base);
  for (const auto& kv : over) {
    const std::string key = kv.first.as<std::string>();
    out[key] = out[key] ? merge(out[key], kv.second) : YAML::Clone(kv.second);
  }
  return out;
}

YAML::Node load_with_includes(const std::filesystem::path& path, int depth,
                              std::vector<std::string>& errors) {
  if (depth > 8) {
    errors.push_back("include: nesting deeper than 8 at " + path.string());
    return YAML::Node(YAML::NodeType::Map);
  }
  YAML::Node own;
  try {
    own = YAML::LoadFile(path.string());
  } catch (const std::exception& e) {
    errors.push_back(path.string() + ": " + e.what());
    return YAML::Node(YAML::NodeType::Map);
  }
  if (!own.IsMap()) {
    errors.push_back(path.string() + ": top level must be a mapping");
    return YAML::Node(YAML::NodeType::Map);
  }
  YAML::Node merged(YAML::NodeType::Map);
  if (const YAML::Node inc = own["include"]) {
    std::vector<std::string> files;
    if (inc.IsScalar()) files.push_back(inc.as<std::string>());
    else if (inc.IsSequence())
      for (const auto& f : inc) files.push_back(f.as<std::string>());
    else errors.push_back(path.string() + ": include must be a path or a list of paths");
    for (const auto& f : files)
      merged = merge(merged, load_with_includes(path.parent_path() / f, depth + 1, errors));
    own.remove("include");
  }
  return merge(merged, own);
}

// Typed access with key checking; every problem is recorded, none throws.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void allow(const YAML::Node& node, const std::string& where, std::set<std::string> keys) {
    if (!node) return;
    if (!node.IsMap()) {
      errors_.push_back(where + ": must be a mapping");
      return;
    }
    for (const auto& kv : node) {
      const auto k = kv.first.as<std::string>();
      if (!keys.count(k)) errors_.push_back(where + (where.empty() ? "" : ".") + k + ": unknown key");
    }
  }

  template <class T>
  void get(const YAML::Node& node, const std::string& key, T& out, const std::string& where) {
    if (!node || !node.IsMap() || !node[key]) return;
    try {
      out = node[key].as<T>();
    } catch (const std::exception&) {
      errors_.push_back(where + "." + key + ": wrong type");
    }
  }

  void vec3(const YAML::Node& node, const std::string& key, Eigen::Vector3d& out,
            const std::string& where) {
    std::vector<double> v;
    if (!node || !node.IsMap() || !node[key]) return;
    get(node, key, v, where);
    if (v.size() != 3) {
      errors_.push_back(where + "." + key + ": expected 3 numbers");
      return;
    }
    out = {v[0], v[1], v[2]};
  }

  void degrees(const YAML::Node& node, const std::string& key, double& out_rad,
               const std::string& where) {
    double deg = out_rad / kDeg;
    get(node, key, deg, where);
    out_rad = deg * kDeg;
  }

  void wing_command(const YAML::Node& node, const std::string& key, WingCommand& out,
                    const std::string& where) {
    if (!node || !node[key]) return;
    const YAML::Node n = node[key];
    const std::string w = where + "." + key;
    allow(n, w, {"amplitude", "mu"});
    get(n, "amplitude", out.amplitude, w);
    get(n, "mu", out.mu, w);
  }

  void error(std::string msg) { errors_.push_back(std::move(msg)); }

 private:
  std::vector<std::string>& errors_;
};

Mode parse_mode(const std::string& s, Reader& r) {
  if (s == "airborne") return Mode::Airborne;
  if (s == "ground") return Mode::Ground;
  if (s == "water") return Mode::WaterSurface;
  r.error("mode: expected airborne, ground or water, got '" + s + "'");
  return Mode::Airborne;
}

Scenario from_node(const YAML::Node& root, std::vector<std::string>& errors) {
  Reader r(errors);
  Scenario sc;
  r.allow(root, "", {"schema", "name", "mode", "surface", "duration", "dt", "seed", "initial",
                     "body", "aero", "wing", "drive", "electrical", "sensor", "controller",
                     "setpoints", "water", "legs", "touchdown", "disturbance", "metrics",
                     "output"});
  if (!root["schema"]) r.error("schema: missing (expected " + std::to_string(kConfigSchema) + ")");
  r.get(root, "schema", sc.schema, "");
  r.get(root, "name", sc.name, "");
  std::string mode = "airborne", surface = "ground";
  r.get(root, "mode", mode, "");
  sc.initial_mode = parse_mode(mode, r);
  r.get(root, "surface", surface, "");
  if (surface == "ground") sc.surface = Surface::Ground;
  else if (surface == "water") sc.surface = Surface::Water;
  else r.error("surface: expected ground or water, got '" + surface + "'");
  r.get(root, "duration", sc.duration, "");
  r.get(root, "dt", sc.dt, "");
  r.get(root, "seed", sc.seed, "");

  if (const auto n = root["initial"]) {
    r.allow(n, "initial", {"position", "velocity", "yaw_deg", "roll_deg", "pitch_deg"});
    r.vec3(n, "position", sc.initial_position, "initial");
    r.vec3(n, "velocity", sc.initial_velocity, "initial");
    r.degrees(n, "yaw_deg", sc.initial_yaw, "initial");
    r.degrees(n, "roll_deg", sc.initial_roll, "initial");
    r.degrees(n, "pitch_deg", sc.initial_pitch, "initial");
  }
  if (const auto n = root["body"]) {
    r.allow(n, "body", {"mass", "inertia", "thrust_moment_arm", "drag_center_height",
                        "friction_coefficient", "gravity", "yaw_contact_radius", "contact_height",
                        "yaw_damping"});
    auto& b = sc.body;
    r.get(n, "mass", b.mass, "body");
    r.vec3(n, "inertia", b.inertia, "body");
    r.get(n, "thrust_moment_arm", b.thrust_moment_arm, "body");
    r.get(n, "drag_center_height", b.drag_center_height, "body");
    r.get(n, "friction_coefficient", b.friction_coefficient, "body");
    r.get(n, "gravity", b.gravity, "body");
    r.get(n, "yaw_contact_radius", b.yaw_contact_radius, "body");
    r.get(n, "contact_height", b.contact_height, "body");
    r.get(n, "yaw_damping", b.yaw_damping, "body");
  }
  if (const auto n = root["aero"]) {
    r.allow(n, "aero", {"drag_coefficient", "air_density", "wing_area", "thrust_per_volt",
                        "resonant_frequency", "resonance_damping"});
    auto& a = sc.aero;
    r.get(n, "drag_coefficient", a.drag_coefficient, "aero");
    r.get(n, "air_density", a.air_density, "aero");
    r.get(n, "wing_area", a.wing_area, "aero");
    r.get(n, "thrust_per_volt", a.thrust_per_volt, "aero");
    r.get(n, "resonant_frequency", a.resonant_frequency, "aero");
    r.get(n, "resonance_damping", a.resonance_damping, "aero");
  }
  if (const auto n = root["wing"]) {
    r.allow(n, "wing", {"stroke_gain", "max_stroke_amplitude_deg", "wing_length", "mean_chord",
                        "radius_fraction"});
    auto& w = sc.wing;
    r.get(n, "stroke_gain", w.stroke_gain, "wing");
    r.degrees(n, "max_stroke_amplitude_deg", w.max_stroke_amplitude, "wing");
    r.get(n, "wing_length", w.wing_length, "wing");
    r.get(n, "mean_chord", w.mean_chord, "wing");
    r.get(n, "radius_fraction", w.radius_fraction, "wing");
    w.drag_reference_area = w.wing_length * w.mean_chord;
  }
  if (const auto n = root["drive"]) {
    r.allow(n, "drive", {"frequency", "offset_voltage", "envelope", "mu_limit", "left", "right",
                         "both"});
    auto& d = sc.drive;
    r.get(n, "frequency", d.frequency, "drive");
    r.get(n, "offset_voltage", d.offset_voltage, "drive");
    r.get(n, "mu_limit", d.mu_limit, "drive");
    if (n["envelope"]) {
      std::vector<double> e;
      r.get(n, "envelope", e, "drive");
      if (e.size() == 2) d.envelope = {e[0], e[1]};
      else r.error("drive.envelope: expected [min, max]");
    }
    r.wing_command(n, "both", sc.open_loop.left, "drive");
    r.wing_command(n, "both", sc.open_loop.right, "drive");
    r.wing_command(n, "left", sc.open_loop.left, "drive");
    r.wing_command(n, "right", sc.open_loop.right, "drive");
  }
  if (const auto n = root["electrical"]) {
    r.allow(n, "electrical", {"capacitance", "sample_rate"});
    r.get(n, "capacitance", sc.electrical.capacitance, "electrical");
    r.get(n, "sample_rate", sc.electrical.sample_rate, "electrical");
  }
  if (const auto n = root["sensor"]) {
    r.allow(n, "sensor", {"rate", "position_noise", "orientation_noise", "latency_ticks"});
    r.get(n, "rate", sc.sensor.rate, "sensor");
    r.get(n, "position_noise", sc.sensor.position_noise, "sensor");
    r.get(n, "orientation_noise", sc.sensor.orientation_noise, "sensor");
    r.get(n, "latency_ticks", sc.sensor.latency_ticks, "sensor");
  }
  if (const auto n = root["controller"]) {
    r.allow(n, "controller", {"enabled", "gains", "limits", "velocity_feedforward"});
    r.get(n, "enabled", sc.closed_loop, "controller");
    r.get(n, "velocity_feedforward", sc.velocity_feedforward, "controller");
    if (const auto g = n["gains"]) {
      const std::string w = "controller.gains";
      r.allow(g, w, {"altitude_p", "altitude_d", "altitude_i", "lateral_p", "lateral_d",
                     "attitude_p", "attitude_d", "attitude_i"});
      auto& k = sc.gains;
      r.get(g, "altitude_p", k.altitude_p, w);
      r.get(g, "altitude_d", k.altitude_d, w);
      r.get(g, "altitude_i", k.altitude_i, w);
      r.get(g, "lateral_p", k.lateral_p, w);
      r.get(g, "lateral_d", k.lateral_d, w);
      r.get(g, "attitude_p", k.attitude_p, w);
      r.get(g, "attitude_d", k.attitude_d, w);
      r.get(g, "attitude_i", k.attitude_i, w);
    }
    if (const auto l = n["limits"]) {
      const std::string w = "controller.limits";
      r.allow(l, w, {"control_rate", "filter_cutoff", "max_inclination", "altitude_integral_limit",
                     "attitude_integral_limit"});
      auto& k = sc.limits;
      r.get(l, "control_rate", k.control_rate, w);
      r.get(l, "filter_cutoff", k.filter_cutoff, w);
      r.get(l, "max_inclination", k.max_inclination, w);
      r.get(l, "altitude_integral_limit", k.altitude_integral_limit, w);
      r.get(l, "attitude_integral_limit", k.attitude_integral_limit, w);
    }
  }
  if (const auto n = root["setpoints"]) {
    if (!n.IsSequence()) {
      r.error("setpoints: must be a list of {t, position}");
    } else {
      for (std::size_t i = 0; i < n.size(); ++i) {
        const std::string w = "setpoints[" + std::to_string(i) + "]";
        r.allow(n[i], w, {"t", "position"});
        SetpointKnot k;
        if (!n[i]["t"] || !n[i]["position"]) r.error(w + ": needs t and position");
        r.get(n[i], "t", k.t, w);
        r.vec3(n[i], "position", k.position, w);
        sc.schedule.push_back(k);
      }
    }
  }
  if (const auto n = root["water"]) {
    r.allow(n, "water", {"surface_tension", "density", "gravity", "drag"});
    r.get(n, "surface_tension", sc.water.surface_tension, "water");
    r.get(n, "density", sc.water.density, "water");
    r.get(n, "gravity", sc.water.gravity, "water");
    if (const auto d = n["drag"]) {
      r.allow(d, "water.drag", {"linear", "yaw"});
      r.get(d, "linear", sc.water_drag.linear, "water.drag");
      r.get(d, "yaw", sc.water_drag.yaw, "water.drag");
    }
  }
  if (const auto n = root["legs"]) {
    r.allow(n, "legs", {"count", "radius", "segment_lengths", "spacing", "linear_density",
                        "contact_angle_deg", "submerged_angle_deg"});
    auto& l = sc.legs;
    r.get(n, "count", l.leg_count, "legs");
    r.get(n, "radius", l.radius, "legs");
    r.get(n, "segment_lengths", l.segment_lengths, "legs");
    r.get(n, "spacing", l.spacing, "legs");
    r.get(n, "linear_density", l.linear_density, "legs");
    r.get(n, "contact_angle_deg", l.contact_angle_deg, "legs");
    r.get(n, "submerged_angle_deg", l.submerged_angle_deg, "legs");
  }
  if (const auto n = root["touchdown"]) {
    r.allow(n, "touchdown", {"topple_threshold_deg", "film_break_speed", "water_settle_time",
                             "stop"});
    r.get(n, "topple_threshold_deg", sc.touchdown.topple_threshold_deg, "touchdown");
    r.get(n, "film_break_speed", sc.touchdown.film_break_speed, "touchdown");
    r.get(n, "water_settle_time", sc.touchdown.water_settle_time, "touchdown");
    r.get(n, "stop", sc.stop_on_touchdown, "touchdown");
  }
  if (const auto n = root["disturbance"]) {
    r.allow(n, "disturbance", {"yaw_torque"});
    r.get(n, "yaw_torque", sc.yaw_disturbance, "disturbance");
  }
  if (const auto n = root["metrics"]) {
    r.allow(n, "metrics", {"window", "rms_window", "reach_tolerance", "min_cot_distance"});
    if (n["window"]) {
      std::vector<double> w;
      r.get(n, "window", w, "metrics");
      if (w.size() == 2) {
        sc.metrics.window_start = w[0];
        sc.metrics.window_end = w[1];
      } else {
        r.error("metrics.window: expected [start, end]");
      }
    }
    r.get(n, "rms_window", sc.metrics.rms_window, "metrics");
    r.get(n, "reach_tolerance", sc.metrics.reach_tolerance, "metrics");
    r.get(n, "min_cot_distance", sc.metrics.min_cot_distance, "metrics");
  }
  if (const auto n = root["output"]) {
    r.allow(n, "output", {"directory", "trajectory", "power", "events"});
    r.get(n, "directory", sc.output.directory, "output");
    r.get(n, "trajectory", sc.output.trajectory, "output");
    r.get(n, "power", sc.output.power, "output");
    r.get(n, "events", sc.output.events, "output");
  }
  return sc;
}

Scenario finish(const YAML::Node& root, std::vector<std::string>& errors) {
  Scenario sc = from_node(root, errors);
  // Key errors and value errors are reported together.
  try {
    sc.validate();
  } catch (const ConfigError& e) {
    errors.insert(errors.end(), e.violations().begin(), e.violations().end());
  }
  if (!errors.empty()) throw ConfigError(errors);
  return sc;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

Scenario load_scenario(const std::string& path) {
  std::vector<std::string> errors;
  const YAML::Node root = load_with_includes(path, 0, errors);
  return finish(root, errors);
}

Scenario parse_scenario(const std::string& yaml_text, const std::string& base_dir) {
  std::vector<std::string> errors;
  YAML::Node own;
  try {
    own = YAML::Load(yaml_text);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }
  if (!own.IsMap()) throw ConfigError({"top level must be a mapping"});
  YAML::Node merged(YAML::NodeType::Map);
  if (const YAML::Node inc = own["include"]) {
    std::vector<std::string> files;
    if (inc.IsSequence())
      for (const auto& f : inc) files.push_back(f.as<std::string>());
    else files.push_back(inc.as<std::string>());
    for (const auto& f : files)
      merged = merge(merged,
                     load_with_includes(std::filesystem::path(base_dir) / f, 1, errors));
    own.remove("include");
  }
  return finish(merge(merged, own), errors);
}

}  // namespace flapsim
