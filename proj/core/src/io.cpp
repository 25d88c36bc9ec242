#include "llgmid/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace llgmid {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    auto out = open_or_throw(path);
    out << "step,time,energy,dissipation_increment,identity_residual,iterations,max_dev,min_dev\n";
    for (const auto& r : traj.records) {
        out << r.index << ',' << format_g17(r.time) << ',' << format_g17(r.energy) << ','
            << format_g17(r.dissipation_increment) << ',' << format_g17(r.identity_residual)
            << ',' << r.iterations << ',' << format_g17(r.max_dev) << ','
            << format_g17(r.min_dev) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_cfl_points_csv(const CflSweepResult& result, const std::string& path) {
    auto out = open_or_throw(path);
    out << "solver,h,j,k,feasible,iterations\n";
    for (const auto& p : result.points) {
        out << solver_name(result.solver) << ',' << format_g17(p.h) << ',' << p.j << ','
            << format_g17(p.k) << ',' << (p.feasible ? 1 : 0) << ',' << p.iterations << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_cfl_thresholds_csv(const CflSweepResult& result, const std::string& path) {
    auto out = open_or_throw(path);
    out << "solver,h,k_last_feasible,k_first_infeasible,k_thresh,bracketed\n";
    for (const auto& t : result.thresholds) {
        out << solver_name(result.solver) << ',' << format_g17(t.h) << ','
            << format_g17(t.k_last_feasible) << ',' << format_g17(t.k_first_infeasible) << ','
            << format_g17(t.k_thresh) << ',' << (t.bracketed ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_eps_points_csv(const EpsSweepResult& result, const std::string& path) {
    auto out = open_or_throw(path);
    out << "solver,h,k,eps,dev_above,dev_below,steps,feasible\n";
    for (const auto& p : result.points) {
        out << solver_name(result.solver) << ',' << format_g17(p.h) << ',' << format_g17(p.k)
            << ',' << format_g17(p.eps) << ',' << format_g17(p.dev_above) << ','
            << format_g17(p.dev_below) << ',' << p.steps << ',' << (p.feasible ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_fits_csv(const std::vector<std::pair<std::string, LineFit>>& fits,
                    const std::string& path) {
    auto out = open_or_throw(path);
    out << "label,slope,intercept,rms_residual,points\n";
    for (const auto& [label, fit] : fits) {
        out << label << ',' << format_g17(fit.slope) << ',' << format_g17(fit.intercept) << ','
            << format_g17(fit.residual) << ',' << fit.points << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_vtk_snapshot(const Mesh& mesh, const NodalField& m, const std::string& path) {
    if (m.mesh != &mesh) throw std::invalid_argument("write_vtk_snapshot: mesh mismatch");
    auto out = open_or_throw(path);
    out << "# vtk DataFile Version 3.0\n"
        << "magnetization snapshot\n"
        << "ASCII\n"
        << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.n_vertices() << " double\n";
    for (const auto& v : mesh.vertices)
        out << format_g17(v.x()) << ' ' << format_g17(v.y()) << ' ' << format_g17(v.z()) << '\n';
    out << "CELLS " << mesh.n_tets() << ' ' << 5 * mesh.n_tets() << '\n';
    for (const auto& t : mesh.tetrahedra)
        out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
    out << "CELL_TYPES " << mesh.n_tets() << '\n';
    for (int t = 0; t < mesh.n_tets(); ++t) out << "10\n";
    out << "POINT_DATA " << mesh.n_vertices() << '\n';
    out << "VECTORS m double\n";
    for (const auto& v : m.values)
        out << format_g17(v.x()) << ' ' << format_g17(v.y()) << ' ' << format_g17(v.z()) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace llgmid
