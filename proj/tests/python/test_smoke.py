import math
import pathlib

import pytest

import flapsim

SCENARIOS = pathlib.Path(__file__).resolve().parents[2] / "scenarios"


def test_hydrostatics_values():
    assert 2.6e-3 <= flapsim.capillary_length() <= 2.75e-3
    weight = 80e-6 * 9.81
    fit = flapsim.recommended_leg_length_hu_fit(weight)
    assert 570 <= fit["max_curvature_force_dynes"] <= 630
    assert fit["leg_length"] >= flapsim.min_leg_length_worst_case(weight)
    report = flapsim.flotation_check(flapsim.LegGeometry(), flapsim.WaterProperties(), 95e-6)
    assert report.floats
    assert "reported_bond_number" in {n.key for n in report.notes}


def test_drive_and_force_symmetry():
    sig = flapsim.DriveSignal(0.0, 250.0, 0.0, 100.0)
    assert abs(flapsim.cycle_mean_horizontal_force(sig)) < 1e-10 * flapsim.peak_horizontal_force(sig)
    plus = flapsim.cycle_mean_horizontal_force(flapsim.DriveSignal(0.0, 200.0, 0.3, 100.0))
    minus = flapsim.cycle_mean_horizontal_force(flapsim.DriveSignal(0.0, 200.0, -0.3, 100.0))
    assert plus > 0
    assert minus == pytest.approx(-plus, rel=1e-9)
    assert sig.voltage(0.25 / 100.0) == pytest.approx(250.0)
    with pytest.raises(ValueError):
        flapsim.DriveSignal(0.0, 500.0, 0.0, 100.0)


def test_cot_and_clearance():
    c = flapsim.cost_of_transport(1.0, 1.0, 1.0)
    assert c["applicable"] and c["joules_per_meter"] == pytest.approx(1.0)
    assert not flapsim.cost_of_transport(0.05, 1.0, 0.0)["applicable"]
    ok, height = flapsim.clearance_check(0.03)
    assert ok and height == pytest.approx(0.014)
    assert not flapsim.clearance_check(0.0)[0]


def test_short_hover_run(tmp_path):
    sc = flapsim.load_scenario(str(SCENARIOS / "hover.cfg"))
    sc.duration = 0.5
    summary = flapsim.run_to_directory(sc, str(tmp_path))
    assert summary["reach_time"] is not None and summary["reach_time"] < 0.5
    assert summary["energy_rectified"] >= summary["energy_signed"]
    assert (tmp_path / "trajectory.csv").read_text().startswith("t,x,y,z,")
    again = flapsim.simulate(sc)
    assert again["final_position"].tolist() == summary["final_position"].tolist()


def test_bad_config_raises():
    with pytest.raises(flapsim.ConfigError) as err:
        flapsim.parse_scenario("schema: 1\nname: x\nduration: -1\nbogus: 1\n")
    assert "bogus" in str(err.value)
    assert "duration" in str(err.value)
