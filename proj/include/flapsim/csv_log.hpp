#pragma once

// Stable CSV schemas for simulation output.
//
// trajectory.csv  t,x,y,z,qw,qx,qy,qz,wx,wy,wz,mode,x_d,y_d,z_d,
//                 amp_left,mu_left,amp_right,mu_right,thrust,a_z,tau_x,tau_y,saturated
// power.csv       t,v_left,i_left,v_right,i_right,p_rect,p_signed
// events.csv      t,event,tilt_deg,vertical_speed,leg

#include <ostream>
#include <string>
#include <vector>

#include "flapsim/dynamics.hpp"
#include "flapsim/energetics.hpp"
#include "flapsim/scenario.hpp"

namespace flapsim {

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows);
void write_power_csv(std::ostream& os, const EnergyTrace& trace);
void write_events_csv(std::ostream& os, const std::vector<ModeEvent>& events);

struct TrajectoryPoint {
  double t = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

/// Reads t,x,y,z from a trajectory.csv; other columns are ignored.
std::vector<TrajectoryPoint> read_trajectory_csv(const std::string& path);
EnergyTrace read_power_csv(const std::string& path);

}  // namespace flapsim
