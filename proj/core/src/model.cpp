#include "llgmid/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace llgmid {

namespace {

Mat3 cross_matrix(const Vec3& v) {
    Mat3 m;
    m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return m;
}

// 4x4 block of 3x3 matrices for one element: contribution of psi at local
// node a to the dual coefficient at local node b,
//   B_ba = sum_d [ |K| g_a^d g_b^d A_d
//                  - |K|/4 (g_a^d A_d J_d^T... ) see below
//                  + M_ab J_d^T A_d J_d ],
// where the gradient term is exact, the mixed terms use the element mean of
// the P1 factor, and M_ab is the consistent P1 mass.
void element_block(const Mesh& mesh, const MaterialModel& model, int t,
                   std::array<std::array<Mat3, 4>, 4>& B) {
    const auto g = element_gradients(mesh, t);
    const double vol = mesh.volumes[t];
    const auto A = model.A_at(t);
    const auto J = model.J_at(t);

    std::array<Mat3, 3> JtAJ;
    std::array<Mat3, 3> AJ;
    for (int d = 0; d < 3; ++d) {
        AJ[d] = A[d] * J[d];
        JtAJ[d] = J[d].transpose() * AJ[d];
    }

    for (int b = 0; b < 4; ++b)
        for (int a = 0; a < 4; ++a) {
            Mat3 block = Mat3::Zero();
            const double mass = (a == b) ? vol / 10.0 : vol / 20.0;
            for (int d = 0; d < 3; ++d) {
                block += (vol * g[a][d] * g[b][d]) * A[d];
                block -= (vol / 4.0 * g[a][d]) * AJ[d].transpose();  // J_d^T A_d
                block -= (vol / 4.0 * g[b][d]) * AJ[d];
                block += mass * JtAJ[d];
            }
            B[b][a] = block;
        }
}

}  // namespace

MaterialModel exchange_only(double lex) {
    MaterialModel m;
    for (int d = 0; d < 3; ++d) m.A[d] = lex * lex * Mat3::Identity();
    m.preset = PresetKind::ExchangeOnly;
    m.lex = lex;
    return m;
}

MaterialModel exchange_dmi(double lex, double ldm, bool paper_literal_pi) {
    MaterialModel m;
    const double c = ldm / (2.0 * lex * lex);
    for (int d = 0; d < 3; ++d) {
        m.A[d] = lex * lex * Mat3::Identity();
        m.J[d] = c * cross_matrix(Vec3::Unit(d));
    }
    m.pi = PiSpec::scaling(paper_literal_pi ? c : ldm * c);
    m.preset = PresetKind::ExchangeDMI;
    m.lex = lex;
    m.ldm = ldm;
    m.paper_literal_pi = paper_literal_pi;
    return m;
}

double min_a_eigenvalue(const MaterialModel& model) {
    double a0 = std::numeric_limits<double>::infinity();
    auto scan = [&a0](const std::array<Mat3, 3>& A) {
        for (int d = 0; d < 3; ++d) {
            Eigen::SelfAdjointEigenSolver<Mat3> es(A[d]);
            a0 = std::min(a0, es.eigenvalues().minCoeff());
        }
    };
    if (model.A_elem.empty()) {
        scan(model.A);
    } else {
        for (const auto& A : model.A_elem) scan(A);
    }
    return a0;
}

void validate_model(const MaterialModel& model) {
    auto check_sym = [](const std::array<Mat3, 3>& A) {
        for (int d = 0; d < 3; ++d)
            if (((A[d] - A[d].transpose()).cwiseAbs().maxCoeff()) > 1e-14)
                throw std::invalid_argument("MaterialModel: A_d is not symmetric");
    };
    if (model.A_elem.empty()) {
        check_sym(model.A);
    } else {
        for (const auto& A : model.A_elem) check_sym(A);
    }
    if (!(min_a_eigenvalue(model) > 0.0))
        throw std::invalid_argument("MaterialModel: A_d is not positive definite");
    if (!(model.alpha > 0.0)) throw std::invalid_argument("MaterialModel: alpha must be > 0");
}

SparseBlockMatrix assemble_local_form(const Mesh& mesh, const MaterialModel& model) {
    std::vector<std::array<int, 2>> idx;
    std::vector<Mat3> blocks;
    idx.reserve(static_cast<std::size_t>(mesh.n_tets()) * 16);
    blocks.reserve(idx.capacity());

    std::array<std::array<Mat3, 4>, 4> B;
    for (int t = 0; t < mesh.n_tets(); ++t) {
        element_block(mesh, model, t, B);
        const auto& tet = mesh.tetrahedra[t];
        for (int b = 0; b < 4; ++b)
            for (int a = 0; a < 4; ++a) {
                idx.push_back({tet[b], tet[a]});
                blocks.push_back(B[b][a]);
            }
    }
    return SparseBlockMatrix::from_triplets(mesh.n_vertices(), mesh.n_vertices(),
                                            std::move(idx), std::move(blocks));
}

DualVector aloc_apply(const MaterialModel& model, const Mesh& mesh, const NodalField& psi) {
    if (psi.mesh != &mesh) throw std::invalid_argument("aloc_apply: mesh mismatch");
    DualVector d(mesh);
    assemble_local_form(mesh, model).apply(psi.values, d.coeffs);
    return d;
}

double a_eval(const MaterialModel& model, const Mesh& mesh, const NodalField& psi,
              const NodalField& phi) {
    require_same_mesh(psi, phi);
    const double local = pairing(aloc_apply(model, mesh, psi), phi);
    if (model.pi.kind == PiKind::Zero) return local;
    return local - l2_inner(mesh, pi_apply(model, mesh, psi), phi);
}

NodalField pi_apply(const MaterialModel& model, const Mesh& mesh, const NodalField& m) {
    if (m.mesh != &mesh) throw std::invalid_argument("pi_apply: mesh mismatch");
    NodalField r(mesh);
    for (int z = 0; z < m.size(); ++z) r[z] = model.pi(m[z]);
    return r;
}

NodalField imex_extrapolate(const MaterialModel& model, const Mesh& mesh,
                            const NodalField& m_i, const NodalField& m_im1) {
    require_same_mesh(m_i, m_im1);
    NodalField r(mesh);
    for (int z = 0; z < m_i.size(); ++z)
        r[z] = 1.5 * model.pi(m_i[z]) - 0.5 * model.pi(m_im1[z]);
    return r;
}

double energy(const MaterialModel& model, const Mesh& mesh, const NodalField& m) {
    double e = energy_local(model, mesh, m);
    if (model.pi.kind != PiKind::Zero)
        e -= 0.5 * l2_inner(mesh, pi_apply(model, mesh, m), m);
    return e;
}

double energy_local(const MaterialModel& model, const Mesh& mesh, const NodalField& m) {
    double e = 0.5 * pairing(aloc_apply(model, mesh, m), m);
    if (model.has_f()) e -= l2_inner(mesh, model.f, m);
    return e;
}

NodalField heffloc_field(const MaterialModel& model, const Mesh& mesh,
                         const LumpedWeights& weights, const NodalField& m, bool include_f) {
    DualVector d = aloc_apply(model, mesh, m);
    for (auto& c : d.coeffs) c = -c;
    if (include_f && model.has_f()) {
        const DualVector df = consistent_mass_apply(mesh, model.f);
        for (int z = 0; z < mesh.n_vertices(); ++z) d.coeffs[z] += df.coeffs[z];
    }
    return riesz_lumped(weights, d);
}

double dmi_curl_form(const Mesh& mesh, double lex, double ldm, const NodalField& psi,
                     const NodalField& phi) {
    require_same_mesh(psi, phi);
    if (psi.mesh != &mesh) throw std::invalid_argument("dmi_curl_form: mesh mismatch");
    double grad_term = 0.0, mixed = 0.0;
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const auto g = element_gradients(mesh, t);
        const auto& tet = mesh.tetrahedra[t];
        Mat3 gpsi = Mat3::Zero(), gphi = Mat3::Zero();
        Vec3 mpsi = Vec3::Zero(), mphi = Vec3::Zero();
        for (int a = 0; a < 4; ++a) {
            gpsi += psi[tet[a]] * g[a].transpose();
            gphi += phi[tet[a]] * g[a].transpose();
            mpsi += psi[tet[a]];
            mphi += phi[tet[a]];
        }
        mpsi /= 4.0;  // element mean of the P1 factor
        mphi /= 4.0;
        const Vec3 curl_psi(gpsi(2, 1) - gpsi(1, 2), gpsi(0, 2) - gpsi(2, 0),
                            gpsi(1, 0) - gpsi(0, 1));
        const Vec3 curl_phi(gphi(2, 1) - gphi(1, 2), gphi(0, 2) - gphi(2, 0),
                            gphi(1, 0) - gphi(0, 1));
        const double vol = mesh.volumes[t];
        grad_term += vol * (gpsi.array() * gphi.array()).sum();
        mixed += vol * (curl_psi.dot(mphi) + mpsi.dot(curl_phi));
    }
    return -lex * lex * grad_term - 0.5 * ldm * mixed;
}

std::pair<double, double> completed_square_identity(const std::array<Mat3, 3>& A,
                                                    const std::array<Mat3, 3>& K,
                                                    const Vec3& s, const Mat3& xi) {
    double lhs = 0.0, rhs = 0.0;
    for (int d = 0; d < 3; ++d) {
        const Vec3 xd = xi.col(d);
        lhs += 0.5 * (xd.dot(A[d] * xd) - 2.0 * xd.dot(K[d] * s));

        Eigen::FullPivLU<Mat3> lu(A[d]);
        if (!lu.isInvertible())
            throw std::invalid_argument("completed_square_identity: singular A_d");
        const Vec3 shift = lu.solve(K[d] * s);
        const Vec3 w = xd - shift;
        rhs += 0.5 * w.dot(A[d] * w) + 0.5 * s.dot(K[d] * shift);
    }
    return {lhs, rhs};
}

NodalField System::heffloc(const NodalField& m, bool include_f) const {
    std::vector<Vec3> am;
    aloc.apply(m.values, am);
    NodalField h(*mesh);
    if (include_f && model->has_f()) {
        for (int z = 0; z < h.size(); ++z) h[z] = (f_dual.coeffs[z] - am[z]) / weights.beta[z];
    } else {
        for (int z = 0; z < h.size(); ++z) h[z] = -am[z] / weights.beta[z];
    }
    return h;
}

NodalField System::ph_of_l2(const NodalField& u) const {
    return riesz_lumped(weights, consistent_mass_apply(*mesh, u));
}

NodalField System::heff(const NodalField& m) const {
    NodalField h = heffloc(m, true);
    if (model->pi.kind != PiKind::Zero) {
        const NodalField pm = ph_of_l2(pi_apply(*model, *mesh, m));
        for (int z = 0; z < h.size(); ++z) h[z] += pm[z];
    }
    return h;
}

double System::energy(const NodalField& m) const {
    std::vector<Vec3> am;
    aloc.apply(m.values, am);
    double e = 0.0;
    for (int z = 0; z < m.size(); ++z) e += am[z].dot(m[z]);
    e *= 0.5;
    if (model->pi.kind != PiKind::Zero)
        e -= 0.5 * l2_inner(*mesh, pi_apply(*model, *mesh, m), m);
    if (model->has_f())
        for (int z = 0; z < m.size(); ++z) e -= f_dual.coeffs[z].dot(m[z]);
    return e;
}

System prepare_system(const Mesh& mesh, const MaterialModel& model) {
    validate_model(model);
    System s;
    s.mesh = &mesh;
    s.model = &model;
    s.weights = lumped_weights(mesh);
    s.aloc = assemble_local_form(mesh, model);
    if (model.has_f()) s.f_dual = consistent_mass_apply(mesh, model.f);
    else s.f_dual = DualVector(mesh);
    return s;
}

}  // namespace llgmid
