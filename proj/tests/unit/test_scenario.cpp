#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "flapsim/config.hpp"
#include "flapsim/scenario.hpp"

using namespace flapsim;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = FLAPSIM_SCENARIO_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

bool mentions(const ConfigError& e, const std::string& needle) {
  for (const auto& v : e.violations())
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

Scenario shortened(const std::string& file, double duration) {
  Scenario s = load_scenario((kScenarios / file).string());
  s.duration = duration;
  s.metrics.window_start = 0.5 * duration;
  s.metrics.window_end = -1.0;
  s.metrics.rms_window = 0.5 * duration;
  return s;
}

}  // namespace

TEST_CASE("include merges physics under the including file") {
  const Scenario s = parse_scenario(
      "schema: 1\nname: t\ninclude: physics/robot.cfg\nmode: ground\nduration: 0.1\n"
      "body: {mass: 80.0e-6}\ndrive: {frequency: 60.0, both: {amplitude: 100.0, mu: 0.1}}\n",
      kScenarios.string());
  CHECK(s.body.mass == doctest::Approx(80e-6));
  // Untouched keys from the include survive the merge.
  CHECK(s.body.thrust_moment_arm == doctest::Approx(6e-3));
  CHECK(s.aero.resonant_frequency == doctest::Approx(140.0));
  CHECK(s.electrical.capacitance == doctest::Approx(2.9e-9));
  CHECK(s.open_loop.left.amplitude == doctest::Approx(100.0));
  CHECK(s.open_loop.right.mu == doctest::Approx(0.1));
  CHECK(s.initial_mode == Mode::Ground);
}

TEST_CASE("config violations are all reported") {
  try {
    parse_scenario(
        "schema: 1\nname: bad\ninclude: physics/robot.cfg\nduration: -1\nbogus: 3\n"
        "body: {mas: 1.0}\n"
        "setpoints:\n  - {t: 1.0, position: [0, 0, 0.04]}\n  - {t: 0.5, position: [0, 0, 0.04]}\n",
        kScenarios.string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() >= 4);
    CHECK(mentions(e, "bogus"));
    CHECK(mentions(e, "mas"));
    CHECK(mentions(e, "duration"));
    CHECK(mentions(e, "setpoints"));
  }
}

TEST_CASE("schema is required and versioned") {
  CHECK_THROWS_AS(parse_scenario("name: x\nduration: 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("schema: 2\nname: x\nduration: 0.1\n"), ConfigError);
  CHECK_THROWS_AS(load_scenario((kScenarios / "missing.cfg").string()), ConfigError);
}

TEST_CASE("every bundled scenario loads and validates") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_scenario(entry.path().string()));
    ++count;
  }
  CHECK(count >= 12);
}

TEST_CASE("setpoint schedule") {
  Scenario s;
  s.schedule = {{0.0, {0, 0, 0.04}}, {1.0, {0.1, 0, 0.04}}, {2.0, {0.1, 0, 0.0}}};
  CHECK(s.setpoint_at(0.5).position.isApprox(Eigen::Vector3d(0.05, 0, 0.04)));
  CHECK(s.setpoint_at(0.5).lateral_velocity.x() == doctest::Approx(0.1));
  CHECK(s.setpoint_at(1.5).position.z() == doctest::Approx(0.02));
  CHECK(s.setpoint_at(5.0).position.isApprox(Eigen::Vector3d(0.1, 0, 0.0)));
  CHECK(s.setpoint_at(5.0).lateral_velocity.norm() == 0.0);
  s.velocity_feedforward = false;
  CHECK(s.setpoint_at(0.5).lateral_velocity.norm() == 0.0);
}

TEST_CASE("runs are deterministic down to the output bytes") {
  Scenario s = shortened("hover.cfg", 0.3);
  const fs::path a = fs::temp_directory_path() / "flapsim_det_a";
  const fs::path b = fs::temp_directory_path() / "flapsim_det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  write_outputs(simulate(s), s, a.string());
  write_outputs(simulate(s), s, b.string());
  for (const char* f : {"trajectory.csv", "power.csv", "events.csv", "summary.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  s.seed += 1;
  s.sensor.seed = s.seed;
  const fs::path c = fs::temp_directory_path() / "flapsim_det_c";
  fs::remove_all(c);
  write_outputs(simulate(s), s, c.string());
  CHECK(slurp(a / "trajectory.csv") != slurp(c / "trajectory.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST_CASE("trajectory has one row per control tick") {
  const Scenario s = shortened("ground_line.cfg", 0.5);
  const RunResult r = simulate(s);
  CHECK(r.trajectory.size() == doctest::Approx(0.5 * s.sensor.rate).epsilon(0.01));
  CHECK(r.power.duration() == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("clearance check") {
  CHECK(clearance_check(30e-3).passes);
  CHECK_FALSE(clearance_check(0.0).passes);
  const ClearanceResult edge = clearance_check(ClearanceGeometry{}.leg_height + ClearanceGeometry{}.airframe_height);
  CHECK(edge.bounding_height == doctest::Approx(14e-3));
  CHECK(edge.passes);
  CHECK_FALSE(clearance_check(13.9e-3).passes);
}

TEST_CASE("frozen water drag matches calibration") {
  const Scenario s = load_scenario((kScenarios / "water_line.cfg").string());
  const WaterDrag cal = calibrate_water_drag(s.body, s.aero, s.wing, s.drive);
  const WaterDrag frozen;
  CHECK(frozen.linear == doctest::Approx(cal.linear).epsilon(1e-4));
  CHECK(frozen.yaw == doctest::Approx(cal.yaw).epsilon(1e-4));
}

TEST_CASE("sweep cell matches a direct run") {
  Scenario base = shortened("ground_line.cfg", 1.5);
  const auto cells = ground_speed_sweep(base, {210.0}, {60.0, 140.0});
  REQUIRE(cells.size() == 2);
  CHECK_FALSE(cells[0].liftoff_regime);
  CHECK(cells[0].speed == doctest::Approx(simulate(base).summary.mean_speed).epsilon(1e-12));
  CHECK(cells[1].liftoff_regime);
  CHECK(speed_grid_monotone(cells));
}
