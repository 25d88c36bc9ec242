#pragma once

#include "llgmid/integrator.hpp"
#include "llgmid/sweep.hpp"

#include <string>

namespace llgmid {

/// Shortest representation that round-trips a double exactly (17 significant
/// digits).
std::string format_g17(double x);

/// Columns: step,time,energy,dissipation_increment,identity_residual,
/// iterations,max_dev,min_dev. Header-only file for an empty trajectory.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

void write_cfl_points_csv(const CflSweepResult& result, const std::string& path);
void write_cfl_thresholds_csv(const CflSweepResult& result, const std::string& path);
void write_eps_points_csv(const EpsSweepResult& result, const std::string& path);
void write_fits_csv(const std::vector<std::pair<std::string, LineFit>>& fits,
                    const std::string& path);

/// Legacy VTK ASCII unstructured grid (CELL type 10) with one point-data
/// vector field.
void write_vtk_snapshot(const Mesh& mesh, const NodalField& m, const std::string& path);

}  // namespace llgmid
