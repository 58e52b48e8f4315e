// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failures (capped at 1).

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "flapsim/aero.hpp"
#include "flapsim/config.hpp"
#include "flapsim/energetics.hpp"
#include "flapsim/hydrostatics.hpp"
#include "flapsim/scenario.hpp"

using namespace flapsim;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = FLAPSIM_SCENARIO_DIR;
int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  fmt::print("[{}] criterion {}: {}\n", ok ? "PASS" : "FAIL", n, detail);
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

Scenario scenario(const std::string& name) { return load_scenario((kScenarios / name).string()); }

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

constexpr double g = 9.81;
double mg_weight(double milligrams) { return milligrams * 1e-6 * g; }

void hydrostatics_criteria() {
  const WaterProperties w;
  const double lc = capillary_length(w);
  report(1, within(lc, 2.6e-3, 2.75e-3), fmt::format("capillary length {:.4f} mm", lc * 1e3));

  const double lmin = min_leg_length_worst_case(mg_weight(80), w);
  report(2, within(lmin, 5.0e-3, 5.6e-3), fmt::format("worst-case L_min(80 mg) {:.3f} mm", lmin * 1e3));

  const HuFitResult h = recommended_leg_length_hu_fit(mg_weight(80), w);
  report(3, within(h.max_curvature_force_dynes, 570, 630) && within(h.leg_length, 0.040, 0.044),
         fmt::format("power-law max F_c {:.1f} dyn, L {:.3f} cm", h.max_curvature_force_dynes,
                     h.leg_length * 100));

  LegGeometry five;
  five.segment_lengths = {0.05};
  const LiftoffRequirement q = liftoff_requirement(five, w, mg_weight(80));
  const double fl_mg = to_milligram_force(q.liftoff_force);
  report(4, within(q.lift_to_weight_ratio, 9.0, 10.5) && within(fl_mg, 700, 820),
         fmt::format("q {:.2f}, F_L {:.1f} mg-force", q.lift_to_weight_ratio, fl_mg));

  const FlotationReport light = flotation_check(LegGeometry{}, w, 95e-6);
  const FlotationReport heavy = flotation_check(LegGeometry{}, w, 1e-3);
  bool sink_note = false;
  for (const auto& n : heavy.notes) sink_note |= n.key == "sinks";
  report(5, light.floats && light.flotation_margin > 0 && !heavy.floats && sink_note,
         fmt::format("95 mg margin {:.3e} N; 1 g margin {:.3e} N", light.flotation_margin,
                     heavy.flotation_margin));

  const double bo = bond_number(LegGeometry{}, w);
  const double expected = std::pow(LegGeometry{}.radius / lc, 2);
  bool note = false;
  for (const auto& n : light.notes) note |= n.key == "reported_bond_number" && n.value == 0.31;
  report(6, within(bo, 0.008, 0.010) && bo == expected && note,
         fmt::format("Bo {:.5f}; conflicting 0.31 note {}", bo, note ? "present" : "missing"));
}

void aero_criteria() {
  const auto t0 = std::chrono::steady_clock::now();
  const WingKinematicsMap map;
  const AeroParams aero;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> amp(1.0, 300.0), freq(10.0, 200.0), mu(0.01, 0.3);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const DriveSignal s(0.0, amp(rng), 0.0, freq(rng));
    const double ratio = std::abs(cycle_mean_horizontal_force(s, map, aero)) /
                         peak_horizontal_force(s, map, aero);
    worst = std::max(worst, ratio);
  }
  const double t7 = seconds_since(t0);
  report(7, worst < 1e-10 && t7 < 10.0,
         fmt::format("max |mean|/peak {:.2e} over 100 cases in {:.2f} s", worst, t7));

  double worst8 = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double m = mu(rng), f = freq(rng);
    const double a = std::min(amp(rng), max_amplitude_in_envelope(0.0, m, {}) * (1 - 1e-9));
    const double plus = cycle_mean_horizontal_force(DriveSignal(0.0, a, m, f), map, aero);
    const double minus = cycle_mean_horizontal_force(DriveSignal(0.0, a, -m, f), map, aero);
    worst8 = std::max(worst8, std::abs(plus + minus) / std::abs(plus));
  }
  report(8, worst8 <= 1e-9, fmt::format("max relative asymmetry {:.2e} over 100 cases", worst8));
}

struct BundledRun {
  RunResult result;
  bool identical = false;
  std::string mismatch;
};

std::map<std::string, BundledRun> run_bundled() {
  std::map<std::string, BundledRun> runs;
  const fs::path root = fs::temp_directory_path() / "flapsim_acceptance";
  fs::remove_all(root);
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".cfg") continue;
    const std::string name = entry.path().stem().string();
    const Scenario sc = load_scenario(entry.path().string());
    BundledRun b;
    const fs::path a = root / name / "a", c = root / name / "b";
    b.result = simulate(sc);
    write_outputs(b.result, sc, a.string());
    write_outputs(simulate(sc), sc, c.string());
    b.identical = true;
    for (const auto& f : fs::directory_iterator(a)) {
      const fs::path other = c / f.path().filename();
      if (!fs::exists(other) || slurp(f.path()) != slurp(other)) {
        b.identical = false;
        b.mismatch = f.path().filename().string();
      }
    }
    runs.emplace(name, std::move(b));
  }
  fs::remove_all(root);
  return runs;
}

}  // namespace

int main() {
  try {
    hydrostatics_criteria();
    aero_criteria();

    const auto runs = run_bundled();
    auto summary = [&](const std::string& n) -> const RunSummary& {
      return runs.at(n).result.summary;
    };

    {
      const RunSummary& s = summary("ground_rods");
      const Scenario sc = scenario("ground_rods.cfg");
      const auto& first = runs.at("ground_rods").result.trajectory.front().truth.position;
      const double moved = (summary("ground_rods").final_state.position - first).norm();
      report(9, moved < 1e-6 && sc.duration >= 5.0,
             fmt::format("rod replacement moved {:.3e} m over {:.1f} s (window {:.3e} m)", moved,
                         sc.duration, s.displacement.norm()));
    }

    {
      const auto t0 = std::chrono::steady_clock::now();
      const RunSummary s = simulate(scenario("hover.cfg")).summary;
      const double t = seconds_since(t0);
      const double lateral = s.rms_lateral, vertical = s.rms_error.z();
      report(10,
             s.reach_time >= 0 && s.reach_time <= 1.0 && lateral <= 0.02 && vertical <= 0.01 &&
                 t < 30.0,
             fmt::format("reach {:.3f} s, RMS lateral {:.2f} mm, vertical {:.2f} mm, {:.1f} s wall",
                         s.reach_time, lateral * 1e3, vertical * 1e3, t));
    }

    {
      const RunSummary& s = summary("land");
      const bool upright = s.landing && s.landing->kind == EventKind::UprightLanding;
      const double v = s.landing ? std::abs(s.landing->vertical_speed) : 1e9;
      report(11, upright && v < 0.1,
             fmt::format("landing event {}, touchdown speed {:.3f} m/s",
                         s.landing ? to_string(s.landing->kind) : "none", v));
    }

    {
      const Scenario base = scenario("ground_sweep.cfg");
      const std::vector<double> amps{200, 225, 250}, freqs{40, 60, 80, 100, 120};
      const auto cells = ground_speed_sweep(base, amps, freqs);
      bool simulated = true;
      std::string table;
      for (const auto& c : cells) {
        simulated &= !c.liftoff_regime;
        table += fmt::format(" {:.0f}V/{:.0f}Hz={:.2f}", c.amplitude, c.frequency, c.speed * 1e3);
      }
      report(12, simulated && speed_grid_monotone(cells), "speeds (mm/s):" + table);
    }

    {
      const RunSummary& sym = summary("water_symmetric");
      const auto& traj = runs.at("water_symmetric").result.trajectory;
      const double moved = (sym.final_state.position - traj.front().truth.position).norm();
      const double speed = summary("water_line").mean_speed;
      const double yaw = std::abs(summary("water_turn").mean_yaw_rate) * 180.0 / std::numbers::pi;
      report(13, moved < 1e-6 && within(speed, 2.5e-3, 1e-2) && within(yaw, 10.0, 40.0),
             fmt::format("symmetric drift {:.2e} m, line {:.2f} mm/s, turn {:.1f} deg/s", moved,
                         speed * 1e3, yaw));
    }

    {
      bool rect_ok = true;
      for (const auto& [name, b] : runs)
        rect_ok &= b.result.power.energy_rectified() >= b.result.power.energy_signed() &&
                   b.result.power.energy_rectified() >= std::abs(b.result.power.energy_signed());

      const ActuatorElectrical elec;
      std::vector<double> f, p;
      for (double fr = 30.0; fr <= 140.0; fr += 10.0) {
        const DriveSignal s(0.0, 250.0, 0.3, fr);
        EnergyTrace t;
        for (int j = 0; j <= static_cast<int>(elec.sample_rate); ++j)
          t.push(sample_power(elec, s, s, j / elec.sample_rate));
        f.push_back(fr);
        p.push_back(t.mean_power());
      }
      const double r2 = fit_line(f, p).r_squared;

      const std::vector<double> sweep_f{60, 80, 100, 120};
      const auto rows = cot_frequency_sweep(scenario("ground_sweep.cfg"), 250.0, sweep_f);
      std::vector<double> pf, pp;
      bool decreasing = true, applicable = true;
      double best_ground = 1e300;
      std::string table;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        applicable &= rows[i].cot.applicable;
        if (i > 0) decreasing &= rows[i].cot.joules_per_meter < rows[i - 1].cot.joules_per_meter;
        best_ground = std::min(best_ground, rows[i].cot.joules_per_meter);
        pf.push_back(rows[i].frequency);
        pp.push_back(rows[i].mean_power);
        table += fmt::format(" {:.0f}Hz={:.2f}", rows[i].frequency, rows[i].cot.millijoules_per_millimeter);
      }
      const double r2_runs = fit_line(pf, pp).r_squared;
      const CostOfTransport& flight = summary("flight_line").cot;
      const double ratio = flight.applicable ? best_ground / flight.joules_per_meter : 0.0;
      report(14,
             rect_ok && r2 > 0.999 && r2_runs > 0.999 && applicable && decreasing &&
                 flight.applicable && ratio >= 5.0,
             fmt::format("rectified>=signed on {} runs: {}; power R2 {:.6f} (waveform), {:.6f} "
                         "(ground runs); ground CoT mJ/mm:{}; flight {:.3f} mJ/mm, ratio {:.1f}",
                         runs.size(), rect_ok ? "yes" : "no", r2, r2_runs, table,
                         flight.millijoules_per_millimeter, ratio));
    }

    {
      bool all = true;
      std::string bad;
      for (const auto& [name, b] : runs) {
        all &= b.identical;
        if (!b.identical) bad += " " + name + "/" + b.mismatch;
      }
      report(15, all && runs.size() >= 12,
             fmt::format("{} bundled scenarios byte-identical across two runs{}", runs.size(),
                         bad.empty() ? "" : "; differing:" + bad));
    }
  } catch (const std::exception& e) {
    fmt::print("[FAIL] acceptance aborted: {}\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
