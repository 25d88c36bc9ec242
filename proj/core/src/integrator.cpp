#include "llgmid/integrator.hpp"

#include <cmath>
#include <stdexcept>

namespace llgmid {

namespace {

SolverReport dispatch_solve(const StepProblem& problem, const SchemeMode& mode,
                            const SolverOptions& opts) {
    switch (mode.kind) {
        case SchemeMode::Kind::FixedPoint:
        case SchemeMode::Kind::Ideal:
            return fixed_point_solve(problem, mode.eps, opts);
        case SchemeMode::Kind::Newton:
            return newton_solve(problem, mode.eps, opts);
    }
    throw std::logic_error("unknown scheme mode");
}

}  // namespace

NodalField hedgehog_initial(const Mesh& mesh) {
    if ((mesh.box_lo + mesh.box_hi).norm() > 1e-14)
        throw std::invalid_argument("hedgehog_initial: mesh must be centered at the origin");

    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int z = 0; z < mesh.n_vertices(); ++z) {
        const double d2 = mesh.vertices[z].squaredNorm();
        if (d2 < best) {
            best = d2;
            nearest = z;
        } else if (d2 == best) {
            const Vec3& a = mesh.vertices[z];
            const Vec3& b = mesh.vertices[nearest];
            const bool lex_smaller = std::lexicographical_compare(a.data(), a.data() + 3,
                                                                  b.data(), b.data() + 3);
            if (lex_smaller) nearest = z;
        }
    }

    NodalField m(mesh);
    for (int z = 0; z < mesh.n_vertices(); ++z)
        m[z] = (z == nearest) ? Vec3::UnitZ() : mesh.vertices[z].normalized();
    return m;
}

StepResult midpoint_step(const System& sys, const NodalField& m_i, const NodalField& m_im1,
                         double k, const SchemeMode& mode, const SolverOptions& opts) {
    if (!(k > 0.0)) throw std::invalid_argument("midpoint_step: k must be > 0");
    const StepProblem problem = make_step_problem(sys, m_i, m_im1, k);
    StepResult res;
    res.report = dispatch_solve(problem, mode, opts);
    if (res.report.converged) {
        res.m_next = NodalField(*sys.mesh);
        for (int z = 0; z < m_i.size(); ++z)
            res.m_next[z] = 2.0 * res.report.eta[z] - m_i[z];
    }
    return res;
}

Trajectory run(const System& sys, const NodalField& m0, double k, double T,
               const SchemeMode& mode, const RunOptions& opts) {
    if (!(k > 0.0) || !(T >= 0.0)) throw std::invalid_argument("run: need k > 0 and T >= 0");
    if (m0.mesh != sys.mesh) throw std::invalid_argument("run: m0 on wrong mesh");
    for (int z = 0; z < m0.size(); ++z)
        if (std::abs(m0[z].norm() - 1.0) > 1e-12)
            throw std::invalid_argument("run: initial state violates the nodal unit-length constraint");

    const int steps = static_cast<int>(std::ceil(T / k));
    const bool has_pi = sys.model->pi.kind != PiKind::Zero;

    Trajectory traj;
    traj.records.reserve(steps);
    NodalField m_prev = m0;  // m^{-1} := m^0
    NodalField m_curr = m0;
    double e_curr = sys.energy(m_curr);
    traj.final_energy = e_curr;

    const double e0 = e_curr;
    double diss_sum = 0.0;
    double corr_sum = 0.0;

    for (int i = 0; i < steps; ++i) {
        const StepProblem problem = make_step_problem(sys, m_curr, m_prev, k);
        const SolverReport rep = dispatch_solve(problem, mode, opts.solver);
        if (!rep.converged) {
            traj.feasible = false;
            traj.infeasible_step = i;
            break;
        }
        const NodalField& eta = rep.eta;  // m^{i+1/2}
        NodalField m_next(*sys.mesh);
        NodalField d_t(*sys.mesh);
        for (int z = 0; z < m_curr.size(); ++z) {
            m_next[z] = 2.0 * eta[z] - m_curr[z];
            d_t[z] = (m_next[z] - m_curr[z]) / k;
        }

        const double diss = sys.model->alpha * k *
                            mass_lumped_inner(sys.weights, d_t, d_t);

        // correction pairing of the discrete energy identity
        NodalField heff_mid = sys.heff(eta);
        NodalField r_plus = rep.r_field;
        if (has_pi) {
            NodalField dpi = pi_apply(*sys.model, *sys.mesh, eta) - problem.pi_field;
            const NodalField ph_dpi = sys.ph_of_l2(dpi);
            for (int z = 0; z < r_plus.size(); ++z)
                r_plus[z] += eta[z].cross(ph_dpi[z]);
        }
        double corr = 0.0;
        for (int z = 0; z < r_plus.size(); ++z)
            corr += sys.weights.beta[z] *
                    r_plus[z].dot(heff_mid[z] - sys.model->alpha * d_t[z]);

        const double e_next = sys.energy(m_next);
        diss_sum += diss;
        corr_sum += k * corr;

        StepRecord rec;
        rec.index = i;
        rec.time = i * k;
        rec.energy = e_curr;
        rec.dissipation_increment = diss;
        rec.correction_term = corr;
        rec.identity_residual = e_next + diss_sum - e0 + corr_sum;
        rec.iterations = rep.iterations;
        const auto dev = unit_length_deviation(m_next);
        rec.max_dev = dev.first;
        rec.min_dev = dev.second;
        traj.records.push_back(rec);

        m_prev = std::move(m_curr);
        m_curr = std::move(m_next);
        e_curr = e_next;
        if (opts.on_step) opts.on_step(i, m_curr);
    }

    traj.final_state = std::move(m_curr);
    traj.final_energy = e_curr;
    return traj;
}

std::vector<double> energy_identity_residual(const Trajectory& trajectory) {
    std::vector<double> res;
    res.reserve(trajectory.records.size());
    for (const auto& rec : trajectory.records) res.push_back(rec.identity_residual);
    return res;
}

std::pair<double, double> unit_length_deviation(const NodalField& m) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& v : m.values) {
        const double n = v.norm();
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    return {hi - 1.0, 1.0 - lo};
}

}  // namespace llgmid
