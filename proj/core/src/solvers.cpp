#include "llgmid/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace llgmid {

namespace {

// Solves (I - [a]x) eta = m, the nodal block of every fixed-point sweep.
inline Vec3 solve_node(const Vec3& a, const Vec3& m) {
    return (m + a.cross(m) + a.dot(m) * a) / (1.0 + a.squaredNorm());
}

// P_h h_eff,loc(m) into `out` using the cached a_loc matrix.
void heffloc_into(const System& sys, const std::vector<Vec3>& m, std::vector<Vec3>& scratch,
                  std::vector<Vec3>& out) {
    sys.aloc.apply(m, scratch);
    const auto& beta = sys.weights.beta;
    out.resize(m.size());
    if (sys.model->has_f()) {
        for (std::size_t z = 0; z < m.size(); ++z)
            out[z] = (sys.f_dual.coeffs[z] - scratch[z]) / beta[z];
    } else {
        for (std::size_t z = 0; z < m.size(); ++z) out[z] = -scratch[z] / beta[z];
    }
}

double lumped_norm_raw(const std::vector<double>& beta, const std::vector<Vec3>& v) {
    double s = 0.0;
    for (std::size_t z = 0; z < v.size(); ++z) s += beta[z] * v[z].squaredNorm();
    return std::sqrt(s);
}

NodalField precompute_ph_pi(const StepProblem& p) {
    if (p.system->model->pi.kind == PiKind::Zero) return NodalField(*p.system->mesh);
    return p.system->ph_of_l2(p.pi_field);
}

void check_problem(const StepProblem& p) {
    if (p.system == nullptr) throw std::invalid_argument("StepProblem: missing system");
    if (p.m_i.mesh != p.system->mesh || p.pi_field.mesh != p.system->mesh)
        throw std::invalid_argument("StepProblem: fields on wrong mesh");
}

}  // namespace

StepProblem make_step_problem(const System& sys, const NodalField& m_i,
                              const NodalField& m_im1, double k) {
    StepProblem p;
    p.system = &sys;
    p.m_i = m_i;
    p.pi_field = imex_extrapolate(*sys.model, *sys.mesh, m_i, m_im1);
    p.k = k;
    p.alpha = sys.model->alpha;
    return p;
}

GmresResult gmres_solve(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& apply,
                        const Eigen::VectorXd& rhs, double rel_tol, int max_iter) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;

    const auto n = rhs.size();
    GmresResult res;
    res.x = VectorXd::Zero(n);
    const double beta = rhs.norm();
    if (beta == 0.0) {
        res.converged = true;
        res.rel_residual = 0.0;
        return res;
    }
    max_iter = std::min<int>(max_iter, static_cast<int>(n));

    MatrixXd V(n, max_iter + 1);
    MatrixXd H = MatrixXd::Zero(max_iter + 1, max_iter);
    VectorXd cs = VectorXd::Zero(max_iter), sn = VectorXd::Zero(max_iter);
    VectorXd g = VectorXd::Zero(max_iter + 1);
    V.col(0) = rhs / beta;
    g(0) = beta;

    VectorXd w(n);
    int m = 0;
    double rel = 1.0;
    constexpr int stall_window = 40;
    double stall_ref = std::numeric_limits<double>::infinity();
    for (int j = 0; j < max_iter; ++j) {
        apply(V.col(j), w);
        for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
            H(i, j) = w.dot(V.col(i));
            w -= H(i, j) * V.col(i);
        }
        H(j + 1, j) = w.norm();
        const bool breakdown = (H(j + 1, j) == 0.0);
        if (!breakdown) V.col(j + 1) = w / H(j + 1, j);

        for (int i = 0; i < j; ++i) {  // apply stored Givens rotations
            const double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
            H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
            H(i, j) = t;
        }
        const double denom = std::hypot(H(j, j), H(j + 1, j));
        cs(j) = H(j, j) / denom;
        sn(j) = H(j + 1, j) / denom;
        H(j, j) = denom;
        H(j + 1, j) = 0.0;
        g(j + 1) = -sn(j) * g(j);
        g(j) = cs(j) * g(j);

        m = j + 1;
        rel = std::abs(g(j + 1)) / beta;
        if (rel <= rel_tol || breakdown) break;
        if (m % stall_window == 0) {  // estimate no longer improving
            if (rel > 0.9 * stall_ref) {
                res.stalled = true;
                break;
            }
            stall_ref = rel;
        }
    }

    VectorXd y = H.topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(g.head(m));
    res.x = V.leftCols(m) * y;
    res.iterations = m;
    res.rel_residual = rel;
    res.converged = (rel <= rel_tol) && std::isfinite(rel);
    return res;
}

SolverReport fixed_point_solve(const StepProblem& problem, double eps, const SolverOptions& opts) {
    check_problem(problem);
    if (!(eps > 0.0)) throw std::invalid_argument("fixed_point_solve: eps must be > 0");
    const System& sys = *problem.system;
    const auto& beta = sys.weights.beta;
    const auto nz = static_cast<std::size_t>(sys.mesh->n_vertices());
    const auto& m = problem.m_i.values;

    const NodalField ph_pi = precompute_ph_pi(problem);
    const double half_k = 0.5 * problem.k;

    SolverReport rep;
    rep.eta = problem.m_i;  // eta^{i,0} := m_i
    std::vector<Vec3> eta = problem.m_i.values;
    std::vector<Vec3> eta_next(nz), scratch(nz), h_prev(nz), h_next(nz), r(nz);
    heffloc_into(sys, eta, scratch, h_prev);

    for (int sweep = 0; sweep < opts.iteration_cap; ++sweep) {
        for (std::size_t z = 0; z < nz; ++z) {
            const Vec3 a = half_k * (h_prev[z] + ph_pi.values[z]) + problem.alpha * m[z];
            eta_next[z] = solve_node(a, m[z]);
        }
        for (std::size_t z = 0; z < nz; ++z) {
            // every sweep contracts the nodal length: |eta(z)| <= |m_i(z)|
            if (eta_next[z].norm() > m[z].norm() * (1.0 + 1e-10))
                throw std::logic_error("fixed_point_solve: nodal length bound violated");
        }

        heffloc_into(sys, eta_next, scratch, h_next);
        for (std::size_t z = 0; z < nz; ++z) r[z] = eta_next[z].cross(h_next[z] - h_prev[z]);
        const double s = lumped_norm_raw(beta, r);

        double inc = 0.0;
        for (std::size_t z = 0; z < nz; ++z) inc += beta[z] * (eta_next[z] - eta[z]).squaredNorm();
        rep.increment_history.push_back(std::sqrt(inc));
        rep.residual_history.push_back(s);

        eta.swap(eta_next);
        if (!std::isfinite(s)) {
            rep.failure = "fixed-point iteration produced a non-finite stopping quantity";
            break;
        }
        if (s <= eps) {
            rep.converged = true;
            rep.iterations = sweep + 1;
            rep.residual_norm = s;
            rep.eta.values = eta;
            rep.r_field = NodalField(*sys.mesh);
            rep.r_field.values = r;
            return rep;
        }
        h_prev.swap(h_next);
    }
    rep.iterations = opts.iteration_cap;
    rep.residual_norm = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
    rep.eta.values = eta;
    if (rep.failure.empty()) rep.failure = "fixed-point iteration cap exceeded";
    return rep;
}

std::vector<Vec3> newton_residual(const StepProblem& problem, const NodalField& x) {
    check_problem(problem);
    if (x.mesh != problem.system->mesh)
        throw std::invalid_argument("newton_residual: field on wrong mesh");
    const System& sys = *problem.system;
    const auto nz = static_cast<std::size_t>(sys.mesh->n_vertices());
    const NodalField ph_pi = precompute_ph_pi(problem);

    std::vector<Vec3> scratch(nz), h(nz), F(nz);
    heffloc_into(sys, x.values, scratch, h);
    const double half_k = 0.5 * problem.k;
    for (std::size_t z = 0; z < nz; ++z) {
        const Vec3 a = half_k * (h[z] + ph_pi.values[z]) + problem.alpha * problem.m_i.values[z];
        F[z] = sys.weights.beta[z] * (x.values[z] - problem.m_i.values[z] + x.values[z].cross(a));
    }
    return F;
}

std::vector<Vec3> jacobian_apply(const StepProblem& problem, const NodalField& x,
                                 const NodalField& u) {
    check_problem(problem);
    if (x.mesh != problem.system->mesh || u.mesh != problem.system->mesh)
        throw std::invalid_argument("jacobian_apply: field on wrong mesh");
    const System& sys = *problem.system;
    const auto nz = static_cast<std::size_t>(sys.mesh->n_vertices());
    const NodalField ph_pi = precompute_ph_pi(problem);

    std::vector<Vec3> scratch(nz), h(nz), g(nz), y(nz);
    heffloc_into(sys, x.values, scratch, h);
    heffloc_into(sys, u.values, scratch, g);  // P_h(h_eff,loc(u) - f): drop the f part
    if (sys.model->has_f()) {
        for (std::size_t z = 0; z < nz; ++z)
            g[z] -= sys.f_dual.coeffs[z] / sys.weights.beta[z];
    }
    const double half_k = 0.5 * problem.k;
    for (std::size_t z = 0; z < nz; ++z) {
        const Vec3 a = half_k * (h[z] + ph_pi.values[z]) + problem.alpha * problem.m_i.values[z];
        y[z] = sys.weights.beta[z] *
               (u.values[z] + u.values[z].cross(a) + half_k * x.values[z].cross(g[z]));
    }
    return y;
}

SolverReport newton_solve(const StepProblem& problem, double eps, const SolverOptions& opts) {
    check_problem(problem);
    if (!(eps > 0.0)) throw std::invalid_argument("newton_solve: eps must be > 0");
    const System& sys = *problem.system;
    const auto& beta = sys.weights.beta;
    const auto nz = static_cast<std::size_t>(sys.mesh->n_vertices());
    const auto n = static_cast<Eigen::Index>(3 * nz);
    const auto& m = problem.m_i.values;
    const NodalField ph_pi = precompute_ph_pi(problem);
    const double half_k = 0.5 * problem.k;

    SolverReport rep;
    rep.eta = problem.m_i;  // eta^{i,0} := m_i
    std::vector<Vec3> eta = problem.m_i.values;
    std::vector<Vec3> scratch(nz), h(nz), a(nz), g(nz), u(nz), w(nz);
    heffloc_into(sys, eta, scratch, h);

    Eigen::VectorXd rhs(n), y(n);
    auto as_nodes = [nz](const Eigen::VectorXd& v, std::vector<Vec3>& out) {
        for (std::size_t z = 0; z < nz; ++z) out[z] = v.segment<3>(3 * static_cast<Eigen::Index>(z));
    };
    auto as_vector = [nz](const std::vector<Vec3>& nodes, Eigen::VectorXd& out) {
        for (std::size_t z = 0; z < nz; ++z) out.segment<3>(3 * static_cast<Eigen::Index>(z)) = nodes[z];
    };

    for (int ell = 0; ell < opts.iteration_cap; ++ell) {
        for (std::size_t z = 0; z < nz; ++z)
            a[z] = half_k * (h[z] + ph_pi.values[z]) + problem.alpha * m[z];
        for (std::size_t z = 0; z < nz; ++z) w[z] = -(eta[z] - m[z] + eta[z].cross(a[z]));
        as_vector(w, rhs);

        if (rhs.norm() == 0.0) {
            std::fill(u.begin(), u.end(), Vec3::Zero());
        } else {
            // mass-preconditioned Jacobian: u + u x a + k/2 eta x P_h(h_eff,loc(u) - f)
            auto apply = [&](const Eigen::VectorXd& vin, Eigen::VectorXd& vout) {
                as_nodes(vin, u);
                heffloc_into(sys, u, scratch, g);
                if (sys.model->has_f())
                    for (std::size_t z = 0; z < nz; ++z) g[z] -= sys.f_dual.coeffs[z] / beta[z];
                for (std::size_t z = 0; z < nz; ++z)
                    w[z] = u[z] + u[z].cross(a[z]) + half_k * eta[z].cross(g[z]);
                as_vector(w, vout);
            };
            const GmresResult lin = gmres_solve(apply, rhs, opts.linear_tol, opts.linear_max_iter);
            const bool floor_accept = lin.stalled && std::isfinite(lin.rel_residual) &&
                                      lin.rel_residual <= opts.linear_stall_accept * opts.linear_tol;
            if (!lin.converged && !floor_accept) {
                rep.iterations = ell + 1;
                rep.eta.values = eta;
                rep.failure = "inner GMRES did not reach tolerance (residual " +
                              std::to_string(lin.rel_residual) + ")";
                return rep;
            }
            as_nodes(lin.x, u);
        }

        // stopping quantity ||I_h[u x P_h(h_eff,loc(u) - f)]||_h
        heffloc_into(sys, u, scratch, g);
        if (sys.model->has_f())
            for (std::size_t z = 0; z < nz; ++z) g[z] -= sys.f_dual.coeffs[z] / beta[z];
        for (std::size_t z = 0; z < nz; ++z) w[z] = u[z].cross(g[z]);
        const double s = lumped_norm_raw(beta, w);
        rep.residual_history.push_back(s);

        for (std::size_t z = 0; z < nz; ++z) eta[z] += u[z];

        if (s <= eps) {
            rep.converged = true;
            rep.iterations = ell + 1;
            rep.residual_norm = s;
            rep.eta.values = eta;
            rep.r_field = NodalField(*sys.mesh);
            rep.r_field.values = w;
            return rep;
        }
        if (!std::isfinite(s) || s > 1e12) {
            rep.iterations = ell + 1;
            rep.eta.values = eta;
            rep.failure = "Newton iteration diverged";
            return rep;
        }
        heffloc_into(sys, eta, scratch, h);
    }
    rep.iterations = opts.iteration_cap;
    rep.residual_norm = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
    rep.eta.values = eta;
    rep.failure = "Newton iteration cap exceeded";
    return rep;
}

NodalField dense_oracle_solve(const StepProblem& problem) {
    check_problem(problem);
    const System& sys = *problem.system;
    const Mesh& mesh = *sys.mesh;
    const int nz = mesh.n_vertices();
    if (nz > 125)
        throw std::invalid_argument("dense_oracle_solve: restricted to meshes with <= 125 nodes");
    const auto n = static_cast<Eigen::Index>(3 * nz);

    // Independent evaluation path: standalone assembly and Riesz map, no
    // reuse of the production solve loops.
    const MaterialModel& model = *sys.model;
    const LumpedWeights weights = lumped_weights(mesh);
    const SparseBlockMatrix aloc = assemble_local_form(mesh, model);
    const NodalField ph_pi = [&] {
        if (model.pi.kind == PiKind::Zero) return NodalField(mesh);
        return riesz_lumped(weights, consistent_mass_apply(mesh, problem.pi_field));
    }();
    const DualVector f_dual = model.has_f() ? consistent_mass_apply(mesh, model.f) : DualVector(mesh);
    const double half_k = 0.5 * problem.k;

    auto heff_loc = [&](const std::vector<Vec3>& x, bool with_f) {
        std::vector<Vec3> ax;
        aloc.apply(x, ax);
        std::vector<Vec3> h(nz);
        for (int z = 0; z < nz; ++z) {
            Vec3 d = -ax[z];
            if (with_f && model.has_f()) d += f_dual.coeffs[z];
            h[z] = d / weights.beta[z];
        }
        return h;
    };
    auto eval_F = [&](const std::vector<Vec3>& x) {
        const auto h = heff_loc(x, true);
        Eigen::VectorXd F(n);
        for (int z = 0; z < nz; ++z) {
            const Vec3 a = half_k * (h[z] + ph_pi.values[z]) + problem.alpha * problem.m_i.values[z];
            F.segment<3>(3 * z) =
                weights.beta[z] * (x[z] - problem.m_i.values[z] + x[z].cross(a));
        }
        return F;
    };

    std::vector<Vec3> x = problem.m_i.values;
    Eigen::VectorXd F = eval_F(x);
    double nF = F.norm();

    for (int it = 0; it < 200; ++it) {
        if (nF <= 1e-13) {
            NodalField out(mesh);
            out.values = x;
            return out;
        }
        const auto h = heff_loc(x, true);
        Eigen::MatrixXd Jac(n, n);
        std::vector<Vec3> u(nz, Vec3::Zero());
        for (Eigen::Index col = 0; col < n; ++col) {
            u[col / 3][col % 3] = 1.0;
            const auto g = heff_loc(u, false);
            for (int z = 0; z < nz; ++z) {
                const Vec3 a =
                    half_k * (h[z] + ph_pi.values[z]) + problem.alpha * problem.m_i.values[z];
                Jac.block<3, 1>(3 * z, col) =
                    weights.beta[z] * (u[z] + u[z].cross(a) + half_k * x[z].cross(g[z]));
            }
            u[col / 3][col % 3] = 0.0;
        }
        const Eigen::VectorXd delta = Jac.partialPivLu().solve(-F);

        double t = 1.0;
        std::vector<Vec3> xt(nz);
        while (true) {
            for (int z = 0; z < nz; ++z) xt[z] = x[z] + t * delta.segment<3>(3 * z);
            const Eigen::VectorXd Ft = eval_F(xt);
            if (Ft.norm() <= (1.0 - 1e-4 * t) * nF) {
                x = xt;
                F = Ft;
                nF = Ft.norm();
                break;
            }
            t *= 0.5;
            if (t < 1e-12)
                throw std::runtime_error("dense_oracle_solve: line search stagnation");
        }
    }
    throw std::runtime_error("dense_oracle_solve: iteration cap exceeded");
}

}  // namespace llgmid
