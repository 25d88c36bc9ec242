#include "llgmid/sweep.hpp"

#include <cmath>
#include <stdexcept>

namespace llgmid {

const char* solver_name(SolverKind kind) {
    return kind == SolverKind::FixedPoint ? "fixedpoint" : "newton";
}

namespace {

SchemeMode mode_for(SolverKind kind, double eps) {
    return kind == SolverKind::FixedPoint ? SchemeMode::fixed_point(eps)
                                          : SchemeMode::newton(eps);
}

}  // namespace

CflSweepResult cfl_sweep(const std::vector<int>& N_list, const KSchedule& schedule, double eps,
                         SolverKind solver, const SolverOptions& opts) {
    if (!(eps > 0.0)) throw std::invalid_argument("cfl_sweep: eps must be > 0");
    CflSweepResult result;
    result.solver = solver;
    result.eps = eps;

    for (int N : N_list) {
        const Mesh mesh = build_unit_cube_mesh(N);
        const MaterialModel model = exchange_only(1.0);
        const System sys = prepare_system(mesh, model);
        const NodalField m0 = hedgehog_initial(mesh);
        const double h = 1.0 / N;

        CflThreshold th;
        th.h = h;
        int first_bad = -1;
        for (int j = 0; j <= schedule.jmax; ++j) {
            const double k = schedule.c * std::pow(schedule.q, j);
            const StepProblem problem = make_step_problem(sys, m0, m0, k);
            const SolverReport rep = solver == SolverKind::FixedPoint
                                         ? fixed_point_solve(problem, eps, opts)
                                         : newton_solve(problem, eps, opts);
            result.points.push_back({h, k, j, rep.converged, rep.iterations});
            if (!rep.converged && first_bad < 0) first_bad = j;
        }
        if (first_bad > 0) {
            th.k_last_feasible = schedule.c * std::pow(schedule.q, first_bad - 1);
            th.k_first_infeasible = schedule.c * std::pow(schedule.q, first_bad);
            th.k_thresh = std::sqrt(th.k_last_feasible * th.k_first_infeasible);
            th.bracketed = true;
        }
        result.thresholds.push_back(th);
    }

    std::vector<double> lx, ly;
    for (const auto& th : result.thresholds)
        if (th.bracketed) {
            lx.push_back(std::log(th.h));
            ly.push_back(std::log(th.k_thresh));
        }
    if (lx.size() >= 2) {
        result.fit = fit_line(lx, ly);
        result.fit_valid = true;
    }
    return result;
}

std::vector<double> default_eps_list(int jmax) {
    std::vector<double> eps;
    for (int j = 0; j <= jmax; ++j) eps.push_back(std::pow(10.0, -0.5 * j));
    return eps;
}

EpsSweepResult eps_sweep(const std::vector<int>& N_list, const std::vector<double>& k_list,
                         const std::vector<double>& eps_list, double T, SolverKind solver,
                         const SolverOptions& opts) {
    if (N_list.size() != k_list.size())
        throw std::invalid_argument("eps_sweep: N_list and k_list must have equal length");

    EpsSweepResult result;
    result.solver = solver;
    RunOptions ro;
    ro.solver = opts;

    for (std::size_t i = 0; i < N_list.size(); ++i) {
        const Mesh mesh = build_unit_cube_mesh(N_list[i]);
        const MaterialModel model = exchange_only(1.0);
        const System sys = prepare_system(mesh, model);
        const NodalField m0 = hedgehog_initial(mesh);
        const double h = 1.0 / N_list[i];

        std::vector<double> lx, ly;
        for (double eps : eps_list) {
            const Trajectory traj = run(sys, m0, k_list[i], T, mode_for(solver, eps), ro);
            EpsPoint p;
            p.h = h;
            p.k = k_list[i];
            p.eps = eps;
            p.steps = static_cast<int>(traj.records.size());
            p.feasible = traj.feasible;
            if (traj.feasible) {
                const auto dev = unit_length_deviation(traj.final_state);
                p.dev_above = dev.first;
                p.dev_below = dev.second;
                const double d = std::max(p.dev_above, p.dev_below);
                if (solver == SolverKind::Newton && d > 1e-13) {
                    lx.push_back(std::log10(eps));
                    ly.push_back(std::log10(d));
                }
            }
            result.points.push_back(p);
        }
        if (solver == SolverKind::Newton && lx.size() >= 2)
            result.fits.emplace_back(h, fit_line(lx, ly));
    }
    return result;
}

}  // namespace llgmid
