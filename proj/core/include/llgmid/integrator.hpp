#pragma once

#include "llgmid/solvers.hpp"

#include <functional>

namespace llgmid {

/// Nonlinear-solver selection for the midpoint update. Ideal is the
/// fixed-point iteration driven to eps_tight (default 1e-12); with pi = 0
/// (no IMEX error) this realizes the unmodified midpoint scheme up to
/// linearization roundoff.
struct SchemeMode {
    enum class Kind { FixedPoint, Newton, Ideal };
    Kind kind = Kind::Newton;
    double eps = 1e-8;

    static SchemeMode fixed_point(double eps) { return {Kind::FixedPoint, eps}; }
    static SchemeMode newton(double eps) { return {Kind::Newton, eps}; }
    static SchemeMode ideal(double eps_tight = 1e-12) { return {Kind::Ideal, eps_tight}; }
};

/// Per-time-step diagnostics. `energy` is E(m^i) at the step start,
/// `dissipation_increment` = alpha k ||d_t m^{i+1}||_h^2,
/// `correction_term` the pairing
///   (r + I_h[m^{i+1/2} x P_h(pi(m^{i+1/2}) - Pi_h)], P_h h_eff(m^{i+1/2}) - alpha d_t m^{i+1})_h,
/// and `identity_residual` the cumulative energy-identity defect
///   E(m^{i+1}) + sum diss - E(m^0) + k sum corr  after this step.
struct StepRecord {
    int index = 0;
    double time = 0.0;
    double energy = 0.0;
    double dissipation_increment = 0.0;
    double identity_residual = 0.0;
    double correction_term = 0.0;
    int iterations = 0;
    double max_dev = 0.0;  // max_z |m^{i+1}(z)| - 1
    double min_dev = 0.0;  // 1 - min_z |m^{i+1}(z)|
};

struct Trajectory {
    std::vector<StepRecord> records;
    NodalField final_state;
    double final_energy = 0.0;
    bool feasible = true;
    int infeasible_step = -1;  // index of the first failed step, -1 if none
    std::string config_echo;
};

struct RunOptions {
    SolverOptions solver;
    /// Invoked after every accepted step with (step index, new state).
    std::function<void(int, const NodalField&)> on_step;
};

/// Initial state m0(z) = z/|z| with the node nearest the origin (ties broken
/// lexicographically) set to e_3. Requires a centered mesh.
NodalField hedgehog_initial(const Mesh& mesh);

struct StepResult {
    NodalField m_next;
    SolverReport report;
};

/// One midpoint update m^i -> m^{i+1} = 2 eta - m^i with the selected solver;
/// Pi is extrapolated from (m_i, m_im1).
StepResult midpoint_step(const System& sys, const NodalField& m_i, const NodalField& m_im1,
                         double k, const SchemeMode& mode, const SolverOptions& opts = {});

/// Time integration over ceil(T/k) steps seeded with m^{-1} := m^0.
/// The first non-converged step truncates the trajectory and marks it
/// infeasible. Throws if m0 violates the nodal unit-length constraint
/// (tolerance 1e-12).
Trajectory run(const System& sys, const NodalField& m0, double k, double T,
               const SchemeMode& mode, const RunOptions& opts = {});

/// Cumulative energy-identity residuals after each step, as recorded by run().
std::vector<double> energy_identity_residual(const Trajectory& trajectory);

/// (max_z |m(z)| - 1, 1 - min_z |m(z)|).
std::pair<double, double> unit_length_deviation(const NodalField& m);

}  // namespace llgmid
