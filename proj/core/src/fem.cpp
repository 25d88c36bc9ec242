#include "llgmid/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace llgmid {

void require_same_mesh(const NodalField& a, const NodalField& b) {
    if (a.mesh == nullptr || a.mesh != b.mesh)
        throw std::invalid_argument("fields live on different meshes");
}

LumpedWeights lumped_weights(const Mesh& mesh) {
    LumpedWeights w;
    w.mesh = &mesh;
    w.beta.assign(static_cast<std::size_t>(mesh.n_vertices()), 0.0);
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const double q = mesh.volumes[t] / 4.0;
        for (int a = 0; a < 4; ++a) w.beta[mesh.tetrahedra[t][a]] += q;
    }
    return w;
}

double mass_lumped_inner(const LumpedWeights& w, const NodalField& u, const NodalField& v) {
    require_same_mesh(u, v);
    if (w.mesh != u.mesh) throw std::invalid_argument("weights/field mesh mismatch");
    double s = 0.0;
    for (int z = 0; z < u.size(); ++z) s += w.beta[z] * u[z].dot(v[z]);
    return s;
}

double lumped_norm(const LumpedWeights& w, const NodalField& u) {
    return std::sqrt(mass_lumped_inner(w, u, u));
}

double l2_inner(const Mesh& mesh, const NodalField& u, const NodalField& v) {
    require_same_mesh(u, v);
    if (u.mesh != &mesh) throw std::invalid_argument("l2_inner: field mesh mismatch");
    // int_K phi_a phi_b = |K|/20 for a != b and |K|/10 for a == b, so the
    // element contribution collapses to |K|/20 ((sum u_a).(sum v_b) + sum u_a.v_a).
    double s = 0.0;
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const auto& tet = mesh.tetrahedra[t];
        Vec3 su = Vec3::Zero(), sv = Vec3::Zero();
        double diag = 0.0;
        for (int a = 0; a < 4; ++a) {
            su += u[tet[a]];
            sv += v[tet[a]];
            diag += u[tet[a]].dot(v[tet[a]]);
        }
        s += mesh.volumes[t] / 20.0 * (su.dot(sv) + diag);
    }
    return s;
}

double l2_norm(const Mesh& mesh, const NodalField& u) {
    return std::sqrt(l2_inner(mesh, u, u));
}

DualVector consistent_mass_apply(const Mesh& mesh, const NodalField& u) {
    if (u.mesh != &mesh) throw std::invalid_argument("consistent_mass_apply: mesh mismatch");
    DualVector d(mesh);
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const auto& tet = mesh.tetrahedra[t];
        Vec3 su = Vec3::Zero();
        for (int a = 0; a < 4; ++a) su += u[tet[a]];
        const double q = mesh.volumes[t] / 20.0;
        for (int a = 0; a < 4; ++a) d.coeffs[tet[a]] += q * (su + u[tet[a]]);
    }
    return d;
}

double pairing(const DualVector& d, const NodalField& u) {
    if (d.mesh != u.mesh) throw std::invalid_argument("pairing: mesh mismatch");
    double s = 0.0;
    for (int z = 0; z < u.size(); ++z) s += d.coeffs[z].dot(u[z]);
    return s;
}

NodalField nodal_interpolate(const Mesh& mesh, const std::function<Vec3(const Vec3&)>& g) {
    NodalField f(mesh);
    for (int z = 0; z < mesh.n_vertices(); ++z) {
        f[z] = g(mesh.vertices[z]);
        if (!f[z].allFinite())
            throw std::invalid_argument("nodal_interpolate: non-finite value at a node");
    }
    return f;
}

NodalField nodal_cross(const NodalField& u, const NodalField& v) {
    require_same_mesh(u, v);
    NodalField w(*u.mesh);
    for (int z = 0; z < u.size(); ++z) w[z] = u[z].cross(v[z]);
    return w;
}

NodalField riesz_lumped(const LumpedWeights& w, const DualVector& d) {
    if (w.mesh != d.mesh) throw std::invalid_argument("riesz_lumped: mesh mismatch");
    NodalField f(*w.mesh);
    for (int z = 0; z < f.size(); ++z) f[z] = d.coeffs[z] / w.beta[z];
    return f;
}

std::array<Vec3, 4> element_gradients(const Mesh& mesh, int t) {
    const auto& tet = mesh.tetrahedra[t];
    Mat3 edges;
    edges.col(0) = mesh.vertices[tet[1]] - mesh.vertices[tet[0]];
    edges.col(1) = mesh.vertices[tet[2]] - mesh.vertices[tet[0]];
    edges.col(2) = mesh.vertices[tet[3]] - mesh.vertices[tet[0]];
    const Mat3 gt = edges.inverse();  // rows are grad lambda_1..3
    std::array<Vec3, 4> g;
    g[1] = gt.row(0);
    g[2] = gt.row(1);
    g[3] = gt.row(2);
    g[0] = -(g[1] + g[2] + g[3]);
    return g;
}

double h1_seminorm_sq(const Mesh& mesh, const NodalField& u) {
    if (u.mesh != &mesh) throw std::invalid_argument("h1_seminorm_sq: mesh mismatch");
    double s = 0.0;
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const auto g = element_gradients(mesh, t);
        const auto& tet = mesh.tetrahedra[t];
        Mat3 grad = Mat3::Zero();  // grad(u)_{cd} = d_d u_c, constant on K
        for (int a = 0; a < 4; ++a) grad += u[tet[a]] * g[a].transpose();
        s += mesh.volumes[t] * grad.squaredNorm();
    }
    return s;
}

NodalField operator+(const NodalField& a, const NodalField& b) {
    require_same_mesh(a, b);
    NodalField r(*a.mesh);
    for (int z = 0; z < a.size(); ++z) r[z] = a[z] + b[z];
    return r;
}

NodalField operator-(const NodalField& a, const NodalField& b) {
    require_same_mesh(a, b);
    NodalField r(*a.mesh);
    for (int z = 0; z < a.size(); ++z) r[z] = a[z] - b[z];
    return r;
}

NodalField operator*(double s, const NodalField& a) {
    NodalField r(*a.mesh);
    for (int z = 0; z < a.size(); ++z) r[z] = s * a[z];
    return r;
}

}  // namespace llgmid
