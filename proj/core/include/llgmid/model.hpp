#pragma once

#include "llgmid/fem.hpp"

#include <optional>
#include <string>
#include <utility>

namespace llgmid {

enum class PiKind { Zero, Scaling, UniaxialAnisotropy };

/// Lower-order operator pi: m -> pi(m). Linear, bounded, self-adjoint by
/// construction for every kind.
struct PiSpec {
    PiKind kind = PiKind::Zero;
    double scale = 0.0;               // c in Scaling / UniaxialAnisotropy
    Vec3 axis = Vec3(0.0, 0.0, 1.0);  // unit axis a for UniaxialAnisotropy

    static PiSpec zero() { return {}; }
    static PiSpec scaling(double c) { return {PiKind::Scaling, c, Vec3(0, 0, 1)}; }
    static PiSpec uniaxial(double c, const Vec3& a) {
        return {PiKind::UniaxialAnisotropy, c, a.normalized()};
    }

    Vec3 operator()(const Vec3& m) const {
        switch (kind) {
            case PiKind::Zero: return Vec3::Zero();
            case PiKind::Scaling: return scale * m;
            case PiKind::UniaxialAnisotropy: return scale * axis.dot(m) * axis;
        }
        return Vec3::Zero();
    }

    /// Operator norm on L2 (exact for these pointwise instances).
    double norm() const { return kind == PiKind::Zero ? 0.0 : std::abs(scale); }
};

enum class PresetKind { ExchangeOnly, ExchangeDMI, General };

/// Coefficient bundle of the generalized energy
///   E(m) = 1/2 a(m,m) - (f,m),
///   a(psi,phi) = sum_d (A_d(d_d psi - J_d psi), d_d phi - J_d phi) - (pi(psi), phi).
/// A_d symmetric positive definite, J_d general (antisymmetric in the DMI
/// preset). Coefficients are spatially constant unless per-element overrides
/// are supplied. Immutable in use; all operations on it are pure.
struct MaterialModel {
    std::array<Mat3, 3> A{Mat3::Identity(), Mat3::Identity(), Mat3::Identity()};
    std::array<Mat3, 3> J{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
    // Optional piecewise-constant coefficients, one triple per element;
    // when non-empty they override the constant matrices above.
    std::vector<std::array<Mat3, 3>> A_elem;
    std::vector<std::array<Mat3, 3>> J_elem;
    PiSpec pi;
    NodalField f;  // empty field means f = 0
    double alpha = 1.0;

    PresetKind preset = PresetKind::General;
    double lex = 1.0;
    double ldm = 0.0;
    bool paper_literal_pi = false;

    std::array<Mat3, 3> A_at(int element) const {
        return A_elem.empty() ? A : A_elem[element];
    }
    std::array<Mat3, 3> J_at(int element) const {
        return J_elem.empty() ? J : J_elem[element];
    }
    bool has_f() const { return !f.empty(); }
};

/// Small-particle limit: A_d = lex^2 Id, J_d = 0, pi = 0, f = 0.
MaterialModel exchange_only(double lex);

/// Chiral (DMI) preset: A_d = lex^2 Id, J_d = ldm/(2 lex^2) [e_d]x.
/// By default pi = ldm^2/(2 lex^2) id, the value for which the generalized
/// form coincides with the curl pairing of dmi_curl_form(); with
/// paper_literal_pi the scaling is ldm/(2 lex^2) instead, which leaves a
/// zeroth-order gap of ((ldm^2 - ldm)/(2 lex^2)) (psi, phi)_L2.
MaterialModel exchange_dmi(double lex, double ldm, bool paper_literal_pi = false);

/// Smallest eigenvalue over d of A_d (the ellipticity constant A_0).
double min_a_eigenvalue(const MaterialModel& model);

/// Checks the coefficient invariants (A_d symmetric to 1e-14, A_0 > 0,
/// alpha > 0); throws std::invalid_argument on violation.
void validate_model(const MaterialModel& model);

/// Assembles the local bilinear form a_loc into a sparse node-block matrix,
/// using exact closed-form P1 element integrals (piecewise-constant
/// gradients, consistent mass for the zeroth-order parts).
SparseBlockMatrix assemble_local_form(const Mesh& mesh, const MaterialModel& model);

/// d with <d, phi> = a_loc(psi, phi) for all phi_h.
DualVector aloc_apply(const MaterialModel& model, const Mesh& mesh, const NodalField& psi);

/// a(psi,phi) = a_loc(psi,phi) - (pi(psi), phi)_L2.
double a_eval(const MaterialModel& model, const Mesh& mesh, const NodalField& psi,
              const NodalField& phi);

/// Nodal application pi_h := I_h o pi.
NodalField pi_apply(const MaterialModel& model, const Mesh& mesh, const NodalField& m);

/// IMEX extrapolation Pi_h(m_i, m_{i-1}) = 3/2 pi_h(m_i) - 1/2 pi_h(m_{i-1}).
NodalField imex_extrapolate(const MaterialModel& model, const Mesh& mesh,
                            const NodalField& m_i, const NodalField& m_im1);

/// E(m) = a(m,m)/2 - (f,m)_L2.
double energy(const MaterialModel& model, const Mesh& mesh, const NodalField& m);

/// E_loc(m) = a_loc(m,m)/2 - (f,m)_L2 = E(m) + (pi(m), m)_L2 / 2.
double energy_local(const MaterialModel& model, const Mesh& mesh, const NodalField& m);

/// P_h h_eff,loc(m): lumped Riesz representative of
/// phi -> (f,phi)_L2 - a_loc(m,phi); with include_f = false the f term is
/// dropped (the linearized quantity h_eff,loc(u) - f).
NodalField heffloc_field(const MaterialModel& model, const Mesh& mesh,
                         const LumpedWeights& weights, const NodalField& m,
                         bool include_f = true);

/// Curl-based pairing -lex^2 (grad psi, grad phi) - ldm/2 (curl psi, phi)
/// - ldm/2 (psi, curl phi), evaluated exactly (P1 curls are piecewise
/// constant; mixed terms use the element mean of the P1 factor).
double dmi_curl_form(const Mesh& mesh, double lex, double ldm, const NodalField& psi,
                     const NodalField& phi);

/// Both sides of the completed-square identity for the energy density
///   1/2 sum_d (A_d xi_d.xi_d - 2 K_d s.xi_d)
///     = 1/2 sum_d A_d(xi_d - A_d^-1 K_d s).(xi_d - A_d^-1 K_d s)
///       + 1/2 sum_d K_d A_d^-1 K_d s.s,
/// returned as (lhs, rhs) for equality testing. Throws on singular A_d.
std::pair<double, double> completed_square_identity(const std::array<Mat3, 3>& A,
                                                    const std::array<Mat3, 3>& K,
                                                    const Vec3& s,
                                                    const Mat3& xi);

/// Mesh-bound operator cache for one (mesh, model) pair: lumped weights, the
/// assembled a_loc matrix, and the consistent-mass action of f. Everything a
/// time-step solve needs that does not change between steps.
struct System {
    const Mesh* mesh = nullptr;
    const MaterialModel* model = nullptr;
    LumpedWeights weights;
    SparseBlockMatrix aloc;
    DualVector f_dual;  // coefficients of phi -> (f, phi)_L2

    /// P_h h_eff,loc(m) via the cached matrix; one SpMV per call.
    NodalField heffloc(const NodalField& m, bool include_f = true) const;

    /// P_h of the L2 pairing of a nodal field u: riesz of consistent mass.
    NodalField ph_of_l2(const NodalField& u) const;

    /// P_h h_eff(m) = P_h h_eff,loc(m) + P_h pi_h(m).
    NodalField heff(const NodalField& m) const;

    double energy(const NodalField& m) const;
};

System prepare_system(const Mesh& mesh, const MaterialModel& model);

}  // namespace llgmid
