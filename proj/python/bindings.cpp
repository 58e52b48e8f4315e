#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flapsim/aero.hpp"
#include "flapsim/config.hpp"
#include "flapsim/energetics.hpp"
#include "flapsim/hydrostatics.hpp"
#include "flapsim/scenario.hpp"
#include "flapsim/waveform.hpp"

namespace py = pybind11;
using namespace flapsim;

namespace {

py::dict summary_dict(const RunSummary& s) {
  py::dict d;
  d["scenario"] = s.scenario;
  d["final_position"] = s.final_state.position;
  d["final_mode"] = std::string(to_string(s.final_state.mode));
  d["rms_error"] = s.rms_error;
  d["rms_lateral"] = s.rms_lateral;
  d["mean_z_error"] = s.mean_z_error;
  d["reach_time"] = s.reach_time < 0.0 ? py::object(py::none()) : py::object(py::float_(s.reach_time));
  d["mean_speed"] = s.mean_speed;
  d["displacement"] = s.displacement;
  d["mean_yaw_rate"] = s.mean_yaw_rate;
  d["path_length"] = s.path_length;
  d["energy_rectified"] = s.energy_rectified;
  d["energy_signed"] = s.energy_signed;
  d["mean_power"] = s.mean_power;
  d["cot_applicable"] = s.cot.applicable;
  d["cot_mj_per_mm"] = s.cot.millijoules_per_millimeter;
  d["saturation_count"] = s.saturation_count;
  d["surface_bound"] = s.surface_bound;
  d["lifted_off"] = s.lifted_off;
  if (s.landing) {
    py::dict l;
    l["event"] = std::string(to_string(s.landing->kind));
    l["time"] = s.landing->time;
    l["tilt"] = s.landing->tilt;
    l["vertical_speed"] = s.landing->vertical_speed;
    d["landing"] = l;
  } else {
    d["landing"] = py::none();
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulator for an insect-scale flapping-wing robot that flies, walks and skims water";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_ArithmeticError);

  py::class_<VoltageEnvelope>(m, "VoltageEnvelope")
      .def(py::init<>())
      .def(py::init([](double lo, double hi) { return VoltageEnvelope{lo, hi}; }))
      .def_readwrite("min_volts", &VoltageEnvelope::min_volts)
      .def_readwrite("max_volts", &VoltageEnvelope::max_volts);

  py::class_<DriveSignal>(m, "DriveSignal")
      .def(py::init<double, double, double, double, VoltageEnvelope>(), py::arg("offset_voltage"),
           py::arg("amplitude"), py::arg("mu"), py::arg("frequency"),
           py::arg("envelope") = VoltageEnvelope{})
      .def_property_readonly("amplitude", &DriveSignal::amplitude)
      .def_property_readonly("mu", &DriveSignal::second_harmonic_ratio)
      .def_property_readonly("frequency", &DriveSignal::flap_frequency)
      .def_property_readonly("period", &DriveSignal::period)
      .def("peak_deviation", &DriveSignal::peak_deviation)
      .def("warnings", &DriveSignal::warnings)
      .def("voltage", [](const DriveSignal& s, double t) { return voltage_at(s, t); })
      .def("voltage_rate", [](const DriveSignal& s, double t) { return voltage_rate_at(s, t); });

  m.def("max_amplitude_in_envelope", &max_amplitude_in_envelope, py::arg("offset_voltage"),
        py::arg("mu"), py::arg("envelope") = VoltageEnvelope{});

  m.def(
      "cycle_mean_horizontal_force",
      [](const DriveSignal& s) { return cycle_mean_horizontal_force(s, {}, {}); },
      "Per-wing period-mean fore/aft force (N) with the default wing and air model.");
  m.def(
      "peak_horizontal_force", [](const DriveSignal& s) { return peak_horizontal_force(s, {}, {}); });
  m.def("rectification_factor", [](double mu) { return rectification_factor(mu); }, py::arg("mu"));
  m.def(
      "cycle_mean_thrust",
      [](double amplitude, double frequency) { return cycle_mean_thrust(AeroParams{}, amplitude, frequency); },
      py::arg("amplitude"), py::arg("frequency"));

  py::class_<WaterProperties>(m, "WaterProperties")
      .def(py::init<>())
      .def_readwrite("surface_tension", &WaterProperties::surface_tension)
      .def_readwrite("density", &WaterProperties::density)
      .def_readwrite("gravity", &WaterProperties::gravity);

  py::class_<LegGeometry>(m, "LegGeometry")
      .def(py::init<>())
      .def_readwrite("leg_count", &LegGeometry::leg_count)
      .def_readwrite("radius", &LegGeometry::radius)
      .def_readwrite("segment_lengths", &LegGeometry::segment_lengths)
      .def_readwrite("spacing", &LegGeometry::spacing)
      .def_readwrite("linear_density", &LegGeometry::linear_density)
      .def_readwrite("contact_angle_deg", &LegGeometry::contact_angle_deg)
      .def("total_length", &LegGeometry::total_length);

  py::class_<ReportNote>(m, "ReportNote")
      .def_readonly("key", &ReportNote::key)
      .def_readonly("message", &ReportNote::message)
      .def_readonly("value", &ReportNote::value);

  py::class_<FlotationReport>(m, "FlotationReport")
      .def_readonly("capillary_length", &FlotationReport::capillary_length)
      .def_readonly("bond_number", &FlotationReport::bond_number)
      .def_readonly("max_curvature_force", &FlotationReport::max_curvature_force)
      .def_readonly("curvature_force", &FlotationReport::curvature_force)
      .def_readonly("weight", &FlotationReport::weight)
      .def_readonly("flotation_margin", &FlotationReport::flotation_margin)
      .def_readonly("liftoff_force", &FlotationReport::liftoff_force)
      .def_readonly("lift_to_weight_ratio", &FlotationReport::lift_to_weight_ratio)
      .def_readonly("floats", &FlotationReport::floats)
      .def_readonly("buoyancy_negligible", &FlotationReport::buoyancy_negligible)
      .def_readonly("spacing_ok", &FlotationReport::spacing_ok)
      .def_readonly("notes", &FlotationReport::notes);

  m.def("capillary_length", &capillary_length, py::arg("water") = WaterProperties{});
  m.def("bond_number", &bond_number, py::arg("legs") = LegGeometry{},
        py::arg("water") = WaterProperties{});
  m.def("min_leg_length_worst_case", &min_leg_length_worst_case, py::arg("weight"),
        py::arg("water") = WaterProperties{});
  m.def(
      "recommended_leg_length_hu_fit",
      [](double weight, const WaterProperties& w) {
        const HuFitResult r = recommended_leg_length_hu_fit(weight, w);
        return py::dict(py::arg("max_curvature_force_dynes") = r.max_curvature_force_dynes,
                        py::arg("max_curvature_force") = r.max_curvature_force,
                        py::arg("leg_length") = r.leg_length);
      },
      py::arg("weight"), py::arg("water") = WaterProperties{});
  m.def(
      "liftoff_requirement",
      [](const LegGeometry& l, const WaterProperties& w, double weight) {
        const LiftoffRequirement r = liftoff_requirement(l, w, weight);
        return py::make_tuple(r.liftoff_force, r.lift_to_weight_ratio);
      },
      py::arg("legs"), py::arg("water"), py::arg("weight"));
  m.def("flotation_check", &flotation_check, py::arg("legs"), py::arg("water"),
        py::arg("total_mass"));
  m.def("to_milligram_force", &to_milligram_force, py::arg("newtons"), py::arg("gravity") = 9.81);

  m.def(
      "clearance_check",
      [](double gap) {
        const ClearanceResult r = clearance_check(gap);
        return py::make_tuple(r.passes, r.bounding_height);
      },
      py::arg("gap_height"));

  m.def(
      "cost_of_transport",
      [](double energy, double duration, double distance, double min_distance) {
        const CostOfTransport c = cost_of_transport(energy, duration, distance, min_distance);
        return py::dict(py::arg("applicable") = c.applicable,
                        py::arg("joules_per_meter") = c.joules_per_meter,
                        py::arg("mean_power") = c.mean_power);
      },
      py::arg("energy"), py::arg("duration"), py::arg("distance"),
      py::arg("min_distance") = kDefaultMinCotDistance);

  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("name", &Scenario::name)
      .def_readwrite("duration", &Scenario::duration)
      .def_readwrite("dt", &Scenario::dt)
      .def_readwrite("seed", &Scenario::seed);

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("parse_scenario", &parse_scenario, py::arg("yaml_text"), py::arg("base_dir") = ".");
  m.def(
      "simulate",
      [](const Scenario& sc) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = simulate(sc);
        }
        return summary_dict(r.summary);
      },
      py::arg("scenario"), "Run a scenario and return its summary as a dict.");
  m.def(
      "run_to_directory",
      [](const Scenario& sc, const std::string& dir) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = simulate(sc);
          write_outputs(r, sc, dir);
        }
        return summary_dict(r.summary);
      },
      py::arg("scenario"), py::arg("directory"));
}
