// flapsim command-line entry point.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical abort.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "flapsim/config.hpp"
#include "flapsim/csv_log.hpp"
#include "flapsim/energetics.hpp"
#include "flapsim/hydrostatics.hpp"
#include "flapsim/scenario.hpp"

namespace fs = std::filesystem;
using namespace flapsim;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

std::string output_root() {
  const char* env = std::getenv("FLAPSIM_OUTPUT_ROOT");
  return env && *env ? env : "out";
}

fs::path resolve_output(const Scenario& sc, const std::string& flag) {
  if (!flag.empty()) return flag;
  const std::string leaf = sc.output.directory.empty() ? sc.name : sc.output.directory;
  return fs::path(output_root()) / leaf;
}

Scenario load_with_overrides(const std::string& path, std::optional<std::uint64_t> seed,
                             std::optional<double> dt) {
  Scenario sc = load_scenario(path);
  if (seed) sc.seed = *seed;
  if (dt) sc.dt = *dt;
  sc.validate();
  return sc;
}

void print_summary(const RunSummary& s) {
  fmt::print("scenario        {}\n", s.scenario);
  fmt::print("final mode      {}  t={:.4f} s\n", to_string(s.final_state.mode), s.final_state.time);
  fmt::print("final position  ({:.5f}, {:.5f}, {:.5f}) m\n", s.final_state.position.x(),
             s.final_state.position.y(), s.final_state.position.z());
  if (s.landing)
    fmt::print("landing         {} (tilt {:.1f} deg, {:.3f} m/s)\n", to_string(s.landing->kind),
               s.landing->tilt * 180.0 / std::numbers::pi, s.landing->vertical_speed);
  else
    fmt::print("landing         none\n");
  fmt::print("rms error       x {:.4f}  y {:.4f}  z {:.4f} m\n", s.rms_error.x(), s.rms_error.y(),
             s.rms_error.z());
  fmt::print("reach time      {:.3f} s\n", s.reach_time);
  fmt::print("mean speed      {:.5f} m/s   yaw rate {:.2f} deg/s\n", s.mean_speed,
             s.mean_yaw_rate * 180.0 / std::numbers::pi);
  fmt::print("mean power      {:.2f} mW\n", s.mean_power * 1e3);
  if (s.cot.applicable)
    fmt::print("CoT             {:.4g} mJ/mm\n", s.cot.millijoules_per_millimeter);
  else
    fmt::print("CoT             not applicable\n");
  fmt::print("saturations     {}\n", s.saturation_count);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flapsim: multimodal insect-scale flapping robot simulator"};
  app.require_subcommand(1);

  std::string out_flag;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;

  // run
  auto* run = app.add_subcommand("run", "Run a scenario file and write its logs");
  std::string run_path;
  run->add_option("scenario", run_path, "Scenario .cfg file")->required();
  run->add_option("--out", out_flag, "Output directory");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--dt", dt, "Override the physics step (s)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Ground speed over an amplitude x frequency grid");
  std::string sweep_path;
  std::string amplitudes = "200,225,250", frequencies = "40,60,80,100,120,140";
  sweep->add_option("scenario", sweep_path, "Ground scenario supplying physics")->required();
  sweep->add_option("--amplitudes", amplitudes, "Comma-separated volts");
  sweep->add_option("--frequencies", frequencies, "Comma-separated Hz");
  sweep->add_option("--out", out_flag, "Output directory for sweep.csv");
  sweep->add_option("--dt", dt, "Override the physics step (s)");

  // legs
  auto* legs = app.add_subcommand("legs", "Flotation report for a leg design");
  double mass_mg = 95.0, sigma = 0.072, theta = 135.0, diameter_mm = 0.5, spacing_mm = 15.0;
  std::string lengths_mm = "25,12.5,12.5";
  bool as_json = false;
  legs->add_option("--mass-mg", mass_mg, "Total robot mass (mg)");
  legs->add_option("--surface-tension", sigma, "N/m");
  legs->add_option("--contact-angle", theta, "deg");
  legs->add_option("--diameter-mm", diameter_mm, "Leg diameter (mm)");
  legs->add_option("--lengths-mm", lengths_mm, "Comma-separated segment lengths (mm)");
  legs->add_option("--spacing-mm", spacing_mm, "Gap between adjacent legs (mm)");
  legs->add_flag("--json", as_json, "Machine-readable output");

  // energy
  auto* energy = app.add_subcommand("energy", "Cost of transport from logs or a frequency sweep");
  std::string traj_csv, power_csv, cot_ground, cot_hover;
  std::vector<double> window;
  double cot_amplitude = 250.0;
  std::string cot_freqs = "60,80,100,120";
  double min_distance = kDefaultMinCotDistance;
  energy->add_option("trajectory", traj_csv, "trajectory.csv");
  energy->add_option("power", power_csv, "power.csv");
  energy->add_option("--window", window, "Start and end time (s)")->expected(2);
  energy->add_option("--min-distance", min_distance, "Below this path length CoT is n/a (m)");
  energy->add_option("--sweep", cot_ground, "Ground scenario for a frequency sweep");
  energy->add_option("--hover", cot_hover, "Hover scenario added as a not-applicable row");
  energy->add_option("--amplitude", cot_amplitude, "Sweep amplitude (V)");
  energy->add_option("--frequencies", cot_freqs, "Comma-separated Hz");

  // clearance
  auto* clearance = app.add_subcommand("clearance", "Check that the robot fits under a gap");
  double gap_mm = 0.0;
  clearance->add_option("--gap-mm", gap_mm, "Gap height (mm)")->required();

  // tune
  auto* tune = app.add_subcommand("tune", "Coordinate-search the controller gains on a hover run");
  std::string tune_path;
  int rounds = 4;
  tune->add_option("scenario", tune_path, "Hover scenario")->required();
  tune->add_option("--rounds", rounds, "Search rounds (step halves each round)");

  // calibrate-water
  auto* calib = app.add_subcommand("calibrate-water", "Fit the water drag coefficients");
  std::string calib_path;
  calib->add_option("scenario", calib_path, "Water scenario supplying physics")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const Scenario sc = load_with_overrides(run_path, seed, dt);
      const RunResult r = simulate(sc);
      const fs::path dir = resolve_output(sc, out_flag);
      write_outputs(r, sc, dir.string());
      print_summary(r.summary);
      fmt::print("logs            {}\n", dir.string());
    } else if (*sweep) {
      Scenario sc = load_with_overrides(sweep_path, std::nullopt, dt);
      const auto cells = ground_speed_sweep(sc, parse_list(amplitudes), parse_list(frequencies));
      const fs::path dir = out_flag.empty() ? fs::path(output_root()) / "sweep" : fs::path(out_flag);
      fs::create_directories(dir);
      std::ofstream os(dir / "sweep.csv");
      os << "amplitude,frequency,speed,liftoff_regime\n";
      fmt::print("{:>9} {:>9} {:>12}\n", "A0 [V]", "f [Hz]", "v [mm/s]");
      for (const auto& c : cells) {
        os << fmt::format("{:.10g},{:.10g},{:.10g},{}\n", c.amplitude, c.frequency, c.speed,
                          c.liftoff_regime ? 1 : 0);
        if (c.liftoff_regime)
          fmt::print("{:9.1f} {:9.1f} {:>12}\n", c.amplitude, c.frequency, "liftoff");
        else
          fmt::print("{:9.1f} {:9.1f} {:12.4f}\n", c.amplitude, c.frequency, c.speed * 1e3);
      }
      fmt::print("monotone in amplitude and frequency: {}\n",
                 speed_grid_monotone(cells) ? "yes" : "no");
    } else if (*legs) {
      LegGeometry g;
      g.radius = 0.5 * diameter_mm * 1e-3;
      g.segment_lengths.clear();
      for (double l : parse_list(lengths_mm)) g.segment_lengths.push_back(l * 1e-3);
      g.spacing = spacing_mm * 1e-3;
      g.contact_angle_deg = theta;
      WaterProperties w;
      w.surface_tension = sigma;
      const FlotationReport r = flotation_check(g, w, mass_mg * 1e-6);
      if (as_json) {
        nlohmann::ordered_json j;
        j["capillary_length"] = r.capillary_length;
        j["bond_number"] = r.bond_number;
        j["max_curvature_force"] = r.max_curvature_force;
        j["curvature_force"] = r.curvature_force;
        j["buoyancy_ratio"] = r.buoyancy_ratio;
        j["weight"] = r.weight;
        j["flotation_margin"] = r.flotation_margin;
        j["liftoff_force"] = r.liftoff_force;
        j["lift_to_weight_ratio"] = r.lift_to_weight_ratio;
        j["floats"] = r.floats;
        j["buoyancy_negligible"] = r.buoyancy_negligible;
        j["spacing_ok"] = r.spacing_ok;
        j["notes"] = nlohmann::json::array();
        for (const auto& n : r.notes)
          j["notes"].push_back({{"key", n.key}, {"message", n.message}, {"value", n.value}});
        std::cout << j.dump(2) << "\n";
      } else {
        fmt::print("capillary length     {:10.4f} mm\n", r.capillary_length * 1e3);
        fmt::print("Bond number          {:10.5f}\n", r.bond_number);
        fmt::print("F_C,max              {:10.2f} mg-f\n", to_milligram_force(r.max_curvature_force));
        fmt::print("F_C at contact angle {:10.2f} mg-f\n", to_milligram_force(r.curvature_force));
        fmt::print("F_B/F_C (~w/l_c)     {:10.4f}\n", r.buoyancy_ratio);
        fmt::print("weight               {:10.2f} mg-f\n", to_milligram_force(r.weight));
        fmt::print("flotation margin     {:10.2f} mg-f  ({})\n",
                   to_milligram_force(r.flotation_margin), r.floats ? "floats" : "sinks");
        fmt::print("liftoff force F_L    {:10.2f} mg-f\n", to_milligram_force(r.liftoff_force));
        fmt::print("q = F_L/F_W          {:10.2f}  (biological reference {:.1f})\n",
                   r.lift_to_weight_ratio, kBiologicalLiftToWeight);
        fmt::print("leg spacing          {}\n", r.spacing_ok ? "ok" : "too close");
        for (const auto& n : r.notes) fmt::print("note [{}] {}\n", n.key, n.message);
      }
    } else if (*energy) {
      if (!cot_ground.empty()) {
        const Scenario ground = load_scenario(cot_ground);
        std::optional<Scenario> hover;
        if (!cot_hover.empty()) hover = load_scenario(cot_hover);
        const auto rows = cot_frequency_sweep(ground, cot_amplitude, parse_list(cot_freqs),
                                              hover ? &*hover : nullptr);
        fmt::print("{:>7} {:>8} {:>11} {:>11} {:>14}\n", "mode", "f [Hz]", "v [mm/s]", "P [mW]",
                   "CoT [mJ/mm]");
        for (const auto& r : rows) {
          const std::string cot =
              r.cot.applicable ? fmt::format("{:14.4g}", r.cot.millijoules_per_millimeter)
                               : fmt::format("{:>14}", "n/a");
          fmt::print("{:>7} {:8.1f} {:11.4f} {:11.3f} {}\n", r.label, r.frequency, r.speed * 1e3,
                     r.mean_power * 1e3, cot);
        }
      } else {
        if (traj_csv.empty() || power_csv.empty()) {
          std::cerr << "energy: give trajectory.csv and power.csv, or --sweep\n";
          return kExitConfig;
        }
        const auto traj = read_trajectory_csv(traj_csv);
        const EnergyTrace trace = read_power_csv(power_csv);
        const double t0 = window.empty() ? -1e300 : window[0];
        const double t1 = window.empty() ? 1e300 : window[1];
        std::vector<Eigen::Vector3d> path;
        double first = 0.0, last = 0.0;
        for (const auto& p : traj) {
          if (p.t < t0 || p.t > t1) continue;
          if (path.empty()) first = p.t;
          last = p.t;
          path.push_back(p.position);
        }
        const double span = path.empty() ? 0.0 : last - first;
        const double e_rect = trace.energy_rectified(first, last);
        const double e_signed = trace.energy_signed(first, last);
        const CostOfTransport c = cost_of_transport(e_rect, span, path_length(path), min_distance);
        fmt::print("duration          {:.4f} s\n", span);
        fmt::print("distance          {:.5f} m\n", c.distance);
        fmt::print("energy rectified  {:.6g} J\n", e_rect);
        fmt::print("energy signed     {:.6g} J\n", e_signed);
        fmt::print("mean power        {:.3f} mW\n", c.mean_power * 1e3);
        if (c.applicable)
          fmt::print("CoT               {:.5g} J/m = {:.5g} mJ/mm\n", c.joules_per_meter,
                     c.millijoules_per_millimeter);
        else
          fmt::print("CoT               not applicable (distance below {:.3g} m)\n", min_distance);
      }
    } else if (*clearance) {
      const ClearanceResult r = clearance_check(gap_mm * 1e-3);
      fmt::print("bounding height {:.2f} mm, gap {:.2f} mm: {}\n", r.bounding_height * 1e3,
                 r.gap_height * 1e3, r.passes ? "pass" : "fail");
      return r.passes ? 0 : 3;
    } else if (*tune) {
      const Scenario sc = load_scenario(tune_path);
      const TuneResult t = tune_gains(sc, sc.gains, rounds);
      const auto& g = t.gains;
      fmt::print("# cost {:.6f} after {} runs\n", t.cost, t.evaluations);
      fmt::print("controller:\n  gains:\n");
      fmt::print("    altitude_p: {:.6g}\n    altitude_d: {:.6g}\n    altitude_i: {:.6g}\n",
                 g.altitude_p, g.altitude_d, g.altitude_i);
      fmt::print("    lateral_p: {:.6g}\n    lateral_d: {:.6g}\n", g.lateral_p, g.lateral_d);
      fmt::print("    attitude_p: {:.6g}\n    attitude_d: {:.6g}\n    attitude_i: {:.6g}\n",
                 g.attitude_p, g.attitude_d, g.attitude_i);
    } else if (*calib) {
      const Scenario sc = load_scenario(calib_path);
      const WaterDrag d = calibrate_water_drag(sc.body, sc.aero, sc.wing, sc.drive);
      fmt::print("water:\n  drag:\n    linear: {:.6g}\n    yaw: {:.6g}\n", d.linear, d.yaw);
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
