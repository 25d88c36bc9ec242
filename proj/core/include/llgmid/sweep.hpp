#pragma once

#include "llgmid/integrator.hpp"

namespace llgmid {

enum class SolverKind { FixedPoint, Newton };

const char* solver_name(SolverKind kind);

/// Geometric time-step schedule k_j = c * q^j, j = 0..jmax.
struct KSchedule {
    double c = 0.00016;
    double q = 1.25;
    int jmax = 27;
};

struct CflPoint {
    double h = 0.0;  // h_min = 1/N of the structured family
    double k = 0.0;
    int j = 0;
    bool feasible = false;
    int iterations = 0;
};

/// Threshold estimate per mesh size: geometric mean of the last feasible and
/// first infeasible step size of the schedule.
struct CflThreshold {
    double h = 0.0;
    double k_last_feasible = 0.0;
    double k_first_infeasible = 0.0;
    double k_thresh = 0.0;
    bool bracketed = false;
};

struct CflSweepResult {
    SolverKind solver = SolverKind::FixedPoint;
    double eps = 0.0;
    std::vector<CflPoint> points;
    std::vector<CflThreshold> thresholds;
    LineFit fit;  // log k_thresh vs log h over bracketed mesh sizes
    bool fit_valid = false;
};

/// Classifies feasibility of (h, k) pairs by whether the selected nonlinear
/// solver converges within the iteration cap on the first time-step of the
/// hedgehog relaxation (exchange preset, lex = alpha = 1).
CflSweepResult cfl_sweep(const std::vector<int>& N_list, const KSchedule& schedule, double eps,
                         SolverKind solver, const SolverOptions& opts = {});

struct EpsPoint {
    double h = 0.0;
    double k = 0.0;
    double eps = 0.0;
    double dev_above = 0.0;  // max_z |m(T,z)| - 1
    double dev_below = 0.0;  // 1 - min_z |m(T,z)|
    int steps = 0;
    bool feasible = false;
};

struct EpsSweepResult {
    SolverKind solver = SolverKind::FixedPoint;
    std::vector<EpsPoint> points;
    /// Per mesh size: log10 deviation vs log10 eps (Newton only; points with
    /// deviation at the roundoff floor are excluded from the fit).
    std::vector<std::pair<double, LineFit>> fits;
};

/// Accuracies 10^{-j/2}, j = 0..jmax.
std::vector<double> default_eps_list(int jmax = 24);

/// Relaxes the hedgehog state to time T for every (N, k) pair and solver
/// accuracy and records the final unit-length deviations.
EpsSweepResult eps_sweep(const std::vector<int>& N_list, const std::vector<double>& k_list,
                         const std::vector<double>& eps_list, double T, SolverKind solver,
                         const SolverOptions& opts = {});

}  // namespace llgmid
