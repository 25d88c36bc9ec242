#pragma once

#include "llgmid/model.hpp"

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <string>

namespace llgmid {

/// Data of one nonlinear time-step system: find eta with
///   (eta,phi)_h + k/2 (eta x P_h h_eff,loc(eta), phi)_h
///     + k/2 (eta x P_h Pi, phi)_h + alpha (eta x m_i, phi)_h = (m_i, phi)_h.
struct StepProblem {
    const System* system = nullptr;
    NodalField m_i;       // current magnetization
    NodalField pi_field;  // Pi_h(m_i, m_{i-1}), the IMEX extrapolation
    double k = 0.0;
    double alpha = 1.0;
};

StepProblem make_step_problem(const System& sys, const NodalField& m_i,
                              const NodalField& m_im1, double k);

struct SolverOptions {
    int iteration_cap = 100;     // nonlinear iterations; also the feasibility classifier
    double linear_tol = 1e-14;   // inner GMRES relative tolerance
    int linear_max_iter = 1000;
    // A GMRES solve that stagnates at its double-precision floor is accepted
    // when the reached residual is within this factor of linear_tol; genuine
    // stagnation far from the tolerance still fails the step.
    double linear_stall_accept = 100.0;
};

/// Outcome of one nonlinear solve. `eta` is the accepted midpoint iterate,
/// `r_field` the correction entering the discrete energy identity
/// (fixed-point: I_h[eta x P_h(h_eff,loc(eta^{l+1}) - h_eff,loc(eta^l))];
/// Newton: I_h[u x P_h(h_eff,loc(u) - f)] of the last update).
struct SolverReport {
    NodalField eta;
    int iterations = 0;  // number of sweeps / Newton updates performed (ell* + 1)
    double residual_norm = std::numeric_limits<double>::quiet_NaN();
    NodalField r_field;
    bool converged = false;
    std::vector<double> residual_history;   // stopping quantity per iteration
    std::vector<double> increment_history;  // ||eta^{l+1} - eta^l||_h per sweep
    std::string failure;
};

struct GmresResult {
    Eigen::VectorXd x;
    int iterations = 0;
    double rel_residual = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    bool stalled = false;  // residual estimate stopped improving (roundoff floor)
};

/// Full (non-restarted) GMRES with modified Gram-Schmidt; stops when the
/// Arnoldi residual estimate drops below rel_tol * ||rhs||, on stagnation of
/// the estimate, or at max_iter; the best iterate and its residual are
/// always returned.
GmresResult gmres_solve(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& apply,
                        const Eigen::VectorXd& rhs, double rel_tol, int max_iter);

/// Constraint-preserving fixed-point iteration. Each sweep is a nodewise
/// exact 3x3 solve (every term is node-local under the lumped product);
/// the iterate bound |eta(z)| <= |m_i(z)| is asserted after each sweep.
SolverReport fixed_point_solve(const StepProblem& problem, double eps,
                               const SolverOptions& opts = {});

/// F(x) = M_lumped (x - m_i + I_h[k/2 x x P_h(h_eff,loc(x) + Pi) + alpha x x m_i])
/// as a nodal vector.
std::vector<Vec3> newton_residual(const StepProblem& problem, const NodalField& x);

/// Action of the Jacobian of F at x on u (mass-scaled nodal vector): one
/// a_loc apply and one lumped Riesz per call.
std::vector<Vec3> jacobian_apply(const StepProblem& problem, const NodalField& x,
                                 const NodalField& u);

/// Newton iteration on F = 0 with initial guess m_i; each update solves the
/// lumped-mass-preconditioned Jacobian system with GMRES.
SolverReport newton_solve(const StepProblem& problem, double eps,
                          const SolverOptions& opts = {});

/// Reference solver: globally damped Newton on the densely assembled
/// Jacobian with backtracking line search on ||F||_2, driven to
/// ||F||_2 <= 1e-13. Restricted to small problems (<= 125 nodes). Throws
/// std::runtime_error on line-search stagnation.
NodalField dense_oracle_solve(const StepProblem& problem);

}  // namespace llgmid
