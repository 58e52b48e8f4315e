#include "flapsim/csv_log.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "flapsim/sensors.hpp"

namespace flapsim {

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows) {
  os << "t,x,y,z,qw,qx,qy,qz,wx,wy,wz,mode,x_d,y_d,z_d,"
        "amp_left,mu_left,amp_right,mu_right,thrust,a_z,tau_x,tau_y,saturated\n";
  for (const auto& r : rows) {
    const auto& s = r.truth;
    const Eigen::Quaterniond q = rotation_to_quaternion(s.attitude);
    const auto& p = r.setpoint.position;
    fmt::print(os,
               "{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},"
               "{:.10g},{},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},"
               "{:.10g},{:.10g},{}\n",
               r.t, s.position.x(), s.position.y(), s.position.z(), q.w(), q.x(), q.y(), q.z(),
               s.body_rate.x(), s.body_rate.y(), s.body_rate.z(), to_string(s.mode), p.x(), p.y(),
               p.z(), r.left.amplitude, r.left.mu, r.right.amplitude, r.right.mu, r.thrust, r.a_z,
               r.tau_x, r.tau_y, r.saturated ? 1 : 0);
  }
}

void write_power_csv(std::ostream& os, const EnergyTrace& trace) {
  os << "t,v_left,i_left,v_right,i_right,p_rect,p_signed\n";
  for (const auto& s : trace.samples())
    fmt::print(os, "{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g}\n", s.t, s.v_left,
               s.i_left, s.v_right, s.i_right, s.p_rectified, s.p_signed);
}

void write_events_csv(std::ostream& os, const std::vector<ModeEvent>& events) {
  os << "t,event,tilt_deg,vertical_speed,leg\n";
  for (const auto& e : events)
    fmt::print(os, "{:.10g},{},{:.10g},{:.10g},{}\n", e.time, to_string(e.kind),
               e.tilt * 180.0 / 3.14159265358979323846, e.vertical_speed, e.leg);
}

namespace {

std::vector<std::vector<std::string>> read_rows(const std::string& path,
                                                std::vector<std::string>& header) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error(path + ": empty file");
  header = split(line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line))
    if (!line.empty()) rows.push_back(split(line));
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name,
                   const std::string& path) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::runtime_error(path + ": missing column '" + name + "'");
}

}  // namespace

std::vector<TrajectoryPoint> read_trajectory_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_rows(path, header);
  const std::size_t ct = column(header, "t", path), cx = column(header, "x", path),
                    cy = column(header, "y", path), cz = column(header, "z", path);
  std::vector<TrajectoryPoint> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    TrajectoryPoint p;
    p.t = std::stod(r.at(ct));
    p.position = {std::stod(r.at(cx)), std::stod(r.at(cy)), std::stod(r.at(cz))};
    out.push_back(p);
  }
  return out;
}

EnergyTrace read_power_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_rows(path, header);
  const char* names[] = {"t", "v_left", "i_left", "v_right", "i_right", "p_rect", "p_signed"};
  std::size_t idx[7];
  for (int i = 0; i < 7; ++i) idx[i] = column(header, names[i], path);
  EnergyTrace trace;
  for (const auto& r : rows) {
    PowerSample s;
    s.t = std::stod(r.at(idx[0]));
    s.v_left = std::stod(r.at(idx[1]));
    s.i_left = std::stod(r.at(idx[2]));
    s.v_right = std::stod(r.at(idx[3]));
    s.i_right = std::stod(r.at(idx[4]));
    s.p_rectified = std::stod(r.at(idx[5]));
    s.p_signed = std::stod(r.at(idx[6]));
    trace.push(s);
  }
  return trace;
}

}  // namespace flapsim
