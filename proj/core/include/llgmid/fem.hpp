#pragma once

#include "llgmid/mesh.hpp"

#include <functional>

namespace llgmid {

/// Vector-valued P1 finite element function, one 3-vector per mesh node.
struct NodalField {
    const Mesh* mesh = nullptr;
    std::vector<Vec3> values;

    NodalField() = default;
    explicit NodalField(const Mesh& m)
        : mesh(&m), values(static_cast<std::size_t>(m.n_vertices()), Vec3::Zero()) {}

    bool empty() const { return values.empty(); }
    int size() const { return static_cast<int>(values.size()); }
    Vec3& operator[](int i) { return values[i]; }
    const Vec3& operator[](int i) const { return values[i]; }
};

/// Coefficients of an H^1-dual functional restricted to V_h, stored so that
/// <d, phi_h> = sum_z d(z) . phi_h(z).
struct DualVector {
    const Mesh* mesh = nullptr;
    std::vector<Vec3> coeffs;

    DualVector() = default;
    explicit DualVector(const Mesh& m)
        : mesh(&m), coeffs(static_cast<std::size_t>(m.n_vertices()), Vec3::Zero()) {}
};

/// Mass-lumping weights beta_z = integral of the hat function of node z.
struct LumpedWeights {
    const Mesh* mesh = nullptr;
    std::vector<double> beta;
};

LumpedWeights lumped_weights(const Mesh& mesh);

/// (u, v)_h = sum_z beta_z u(z).v(z).
double mass_lumped_inner(const LumpedWeights& w, const NodalField& u, const NodalField& v);
double lumped_norm(const LumpedWeights& w, const NodalField& u);

/// Exact L2 product of two P1 fields (consistent P1 x P1 element formulas).
double l2_inner(const Mesh& mesh, const NodalField& u, const NodalField& v);
double l2_norm(const Mesh& mesh, const NodalField& u);

/// Action of the consistent mass matrix: coefficients of phi -> (u, phi)_L2.
DualVector consistent_mass_apply(const Mesh& mesh, const NodalField& u);

/// <d, u> = sum_z d(z).u(z).
double pairing(const DualVector& d, const NodalField& u);

/// Nodal interpolant I_h g. Throws on a non-finite nodal value.
NodalField nodal_interpolate(const Mesh& mesh, const std::function<Vec3(const Vec3&)>& g);

/// I_h[u x v]: node-wise cross product.
NodalField nodal_cross(const NodalField& u, const NodalField& v);

/// Lumped Riesz map: field z -> d(z)/beta_z, the representative of d in
/// (V_h, (.,.)_h).
NodalField riesz_lumped(const LumpedWeights& w, const DualVector& d);

/// |u|_{H^1}^2 = sum_K |K| |grad u|_K|^2 with the element-wise constant
/// gradient of the affine map.
double h1_seminorm_sq(const Mesh& mesh, const NodalField& u);

/// Gradients of the four barycentric hat functions on element t.
std::array<Vec3, 4> element_gradients(const Mesh& mesh, int t);

// Field arithmetic helpers (all node-wise).
NodalField operator+(const NodalField& a, const NodalField& b);
NodalField operator-(const NodalField& a, const NodalField& b);
NodalField operator*(double s, const NodalField& a);

void require_same_mesh(const NodalField& a, const NodalField& b);

}  // namespace llgmid
