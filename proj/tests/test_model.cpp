#include "llgmid/model.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace llgmid;
using namespace llgmid::testing;

TEST_CASE("local form: exchange preset basics") {
    const Mesh m = build_unit_cube_mesh(2, false);
    const MaterialModel model = exchange_only(1.0);

    NodalField c(m);
    for (auto& v : c.values) v = Vec3(0.2, -0.4, 1.0);
    const DualVector dz = aloc_apply(model, m, c);
    for (const auto& d : dz.coeffs) CHECK(d.norm() <= 1e-14);

    const NodalField id = nodal_interpolate(m, [](const Vec3& x) { return x; });
    CHECK(pairing(aloc_apply(model, m, id), id) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("local form agrees with per-element quadrature on general coefficients") {
    const Mesh m = build_unit_cube_mesh(2);
    std::mt19937_64 rng(29);
    const MaterialModel model = rng_general_model(rng);
    for (int s = 0; s < 10; ++s) {
        const NodalField psi = rng_field(m, rng);
        const NodalField phi = rng_field(m, rng);
        const double direct = pairing(aloc_apply(model, m, psi), phi);
        const double oracle = quadrature_aloc(m, model, psi, phi);
        CHECK(direct == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("piecewise-constant coefficients override the constant matrices") {
    const Mesh m = build_unit_cube_mesh(1, false);
    std::mt19937_64 rng(31);
    MaterialModel model = exchange_only(1.0);
    model.A_elem.assign(m.n_tets(), model.A);
    model.J_elem.assign(m.n_tets(), model.J);
    for (int t = 0; t < m.n_tets(); ++t)
        for (int d = 0; d < 3; ++d) {
            model.A_elem[t][d] = rng_spd(rng);
            model.J_elem[t][d] = rng_mat(rng);
        }
    const NodalField psi = rng_field(m, rng);
    const NodalField phi = rng_field(m, rng);
    CHECK(pairing(aloc_apply(model, m, psi), phi) ==
          doctest::Approx(quadrature_aloc(m, model, psi, phi)).epsilon(1e-12));
}

TEST_CASE("full bilinear form") {
    const Mesh m = build_unit_cube_mesh(2);
    std::mt19937_64 rng(37);

    MaterialModel ex = exchange_only(1.0);
    const NodalField psi = rng_field(m, rng);
    const NodalField phi = rng_field(m, rng);
    CHECK(a_eval(ex, m, psi, phi) ==
          doctest::Approx(pairing(aloc_apply(ex, m, psi), phi)).epsilon(1e-14));

    MaterialModel scaled = exchange_only(1.0);
    scaled.pi = PiSpec::scaling(0.7);
    NodalField u(m);
    for (auto& v : u.values) v = Vec3(1, -2, 0.5);
    CHECK(a_eval(scaled, m, u, u) ==
          doctest::Approx(pairing(aloc_apply(scaled, m, u), u) -
                          0.7 * u[0].squaredNorm() * 1.0)
              .epsilon(1e-13));

    const MaterialModel dmi = exchange_dmi(1.0, 0.8);
    for (int s = 0; s < 50; ++s) {
        const NodalField a = rng_field(m, rng);
        const NodalField b = rng_field(m, rng);
        const double ab = a_eval(dmi, m, a, b);
        const double ba = a_eval(dmi, m, b, a);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    }
}

TEST_CASE("pi application and IMEX extrapolation") {
    const Mesh m = build_unit_cube_mesh(1);
    MaterialModel model = exchange_only(1.0);

    std::mt19937_64 rng(41);
    const NodalField u = rng_field(m, rng);

    model.pi = PiSpec::zero();
    for (const auto& v : pi_apply(model, m, u).values) CHECK(v.norm() == 0.0);

    model.pi = PiSpec::scaling(2.0);
    const NodalField two = pi_apply(model, m, u);
    for (int z = 0; z < u.size(); ++z) CHECK((two[z] - 2.0 * u[z]).norm() == 0.0);

    model.pi = PiSpec::uniaxial(1.0, Vec3(0, 0, 1));
    NodalField diag(m);
    for (auto& v : diag.values) v = Vec3(1, 1, 1) / std::sqrt(3.0);
    const NodalField proj = pi_apply(model, m, diag);
    for (const auto& v : proj.values)
        CHECK((v - Vec3(0, 0, 1.0 / std::sqrt(3.0))).norm() <= 1e-15);

    // extrapolation weights 3/2 and -1/2
    model.pi = PiSpec::scaling(1.0);
    const NodalField same = imex_extrapolate(model, m, u, u);
    for (int z = 0; z < u.size(); ++z) CHECK((same[z] - u[z]).norm() <= 1e-15);
    const NodalField zero(m);
    const NodalField extr = imex_extrapolate(model, m, u, zero);
    for (int z = 0; z < u.size(); ++z) CHECK((extr[z] - 1.5 * u[z]).norm() <= 1e-15);
}

TEST_CASE("energies") {
    const Mesh m = build_unit_cube_mesh(2, false);
    const MaterialModel ex = exchange_only(1.0);

    NodalField c(m);
    for (auto& v : c.values) v = Vec3(0, 1, 0);
    CHECK(energy(ex, m, c) == doctest::Approx(0.0).epsilon(1e-15));

    const NodalField id = nodal_interpolate(m, [](const Vec3& x) { return x; });
    CHECK(energy(ex, m, id) == doctest::Approx(1.5).epsilon(1e-13));

    // zeroth-order terms cancel for constant unit fields in the chiral preset
    const MaterialModel dmi = exchange_dmi(1.0, 0.7);
    NodalField unit(m);
    for (auto& v : unit.values) v = Vec3(1, 2, -1).normalized();
    CHECK(std::abs(energy(dmi, m, unit)) <= 1e-14);
    CHECK(std::abs(-0.5 * dmi_curl_form(m, 1.0, 0.7, unit, unit)) <= 1e-14);

    // E = E_loc - (pi(m), m)/2
    std::mt19937_64 rng(43);
    const NodalField u = rng_field(m, rng);
    CHECK(energy(dmi, m, u) ==
          doctest::Approx(energy_local(dmi, m, u) -
                          0.5 * l2_inner(m, pi_apply(dmi, m, u), u))
              .epsilon(1e-13));
}

TEST_CASE("effective-field representative") {
    const Mesh m = build_unit_cube_mesh(2);
    const LumpedWeights w = lumped_weights(m);
    std::mt19937_64 rng(47);

    MaterialModel ex = exchange_only(1.0);
    NodalField c(m);
    for (auto& v : c.values) v = Vec3(1, 0, 0);
    for (const auto& v : heffloc_field(ex, m, w, c).values) CHECK(v.norm() <= 1e-14);

    // constant m: only the f functional remains
    MaterialModel with_f = exchange_only(1.0);
    with_f.f = rng_field(m, rng);
    const NodalField hf = heffloc_field(with_f, m, w, c);
    const NodalField pf = riesz_lumped(w, consistent_mass_apply(m, with_f.f));
    for (int z = 0; z < m.n_vertices(); ++z) CHECK((hf[z] - pf[z]).norm() <= 1e-13);

    // (P_h h_eff,loc(m), phi)_h = (f,phi) - a_loc(m,phi)
    const NodalField mfield = rng_field(m, rng);
    const NodalField h = heffloc_field(with_f, m, w, mfield);
    for (int s = 0; s < 20; ++s) {
        const NodalField phi = rng_field(m, rng);
        const double lhs = mass_lumped_inner(w, h, phi);
        const double rhs =
            l2_inner(m, with_f.f, phi) - pairing(aloc_apply(with_f, m, mfield), phi);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }

    // the f-free variant drops the source term
    const NodalField hn = heffloc_field(with_f, m, w, mfield, false);
    for (int s = 0; s < 5; ++s) {
        const NodalField phi = rng_field(m, rng);
        CHECK(mass_lumped_inner(w, hn, phi) ==
              doctest::Approx(-pairing(aloc_apply(with_f, m, mfield), phi)).epsilon(1e-12));
    }
}

TEST_CASE("curl pairing") {
    const Mesh m = build_unit_cube_mesh(2);
    NodalField c(m);
    for (auto& v : c.values) v = Vec3(1, 2, 3);
    CHECK(std::abs(dmi_curl_form(m, 1.0, 0.9, c, c)) <= 1e-14);

    // psi = (-y, x, 0): |grad|^2 = 2 and curl psi is orthogonal to psi
    const NodalField rot = nodal_interpolate(m, [](const Vec3& x) {
        return Vec3(-x.y(), x.x(), 0.0);
    });
    CHECK(dmi_curl_form(m, 1.0, 123.0, rot, rot) == doctest::Approx(-2.0).epsilon(1e-13));

    // equivalence with the generalized form under the cancelling pi
    std::mt19937_64 rng(53);
    const MaterialModel dmi = exchange_dmi(1.3, -0.6);
    for (int s = 0; s < 20; ++s) {
        const NodalField psi = rng_field(m, rng);
        const NodalField phi = rng_field(m, rng);
        const double general = a_eval(dmi, m, psi, phi);
        const double curl = -dmi_curl_form(m, 1.3, -0.6, psi, phi);
        CHECK(general == doctest::Approx(curl).epsilon(1e-12));
    }
}

TEST_CASE("completed square identity") {
    std::mt19937_64 rng(59);
    const Vec3 s(0.3, -1.2, 0.8);
    Mat3 xi = rng_mat(rng);

    std::array<Mat3, 3> A{rng_spd(rng), rng_spd(rng), rng_spd(rng)};
    std::array<Mat3, 3> Kzero{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
    const auto [l0, r0] = completed_square_identity(A, Kzero, s, xi);
    double expect = 0.0;
    for (int d = 0; d < 3; ++d) expect += 0.5 * xi.col(d).dot(A[d] * xi.col(d));
    CHECK(l0 == doctest::Approx(expect).epsilon(1e-14));
    CHECK(r0 == doctest::Approx(expect).epsilon(1e-13));

    // at the minimizer the quadratic term vanishes
    std::array<Mat3, 3> K{rng_antisym(rng), rng_antisym(rng), rng_antisym(rng)};
    Mat3 xmin;
    double rest = 0.0;
    for (int d = 0; d < 3; ++d) {
        xmin.col(d) = A[d].inverse() * (K[d] * s);
        rest += 0.5 * s.dot(K[d] * (A[d].inverse() * (K[d] * s)));
    }
    const auto [lm, rm] = completed_square_identity(A, K, s, xmin);
    CHECK(lm == doctest::Approx(rest).epsilon(1e-12));
    CHECK(rm == doctest::Approx(rest).epsilon(1e-12));

    for (int t = 0; t < 100; ++t) {
        std::array<Mat3, 3> At{rng_spd(rng), rng_spd(rng), rng_spd(rng)};
        std::array<Mat3, 3> Kt{rng_antisym(rng), rng_antisym(rng), rng_antisym(rng)};
        const Vec3 st = Vec3::Random();
        const Mat3 xt = rng_mat(rng);
        const auto [lhs, rhs] = completed_square_identity(At, Kt, st, xt);
        CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(lhs)));
    }

    std::array<Mat3, 3> singular{Mat3::Zero(), Mat3::Identity(), Mat3::Identity()};
    CHECK_THROWS_AS(completed_square_identity(singular, K, s, xi), std::invalid_argument);
}

TEST_CASE("model validation") {
    MaterialModel bad_sym = exchange_only(1.0);
    bad_sym.A[0](0, 1) += 1e-6;
    CHECK_THROWS_AS(validate_model(bad_sym), std::invalid_argument);

    MaterialModel bad_spd = exchange_only(1.0);
    bad_spd.A[1] = -Mat3::Identity();
    CHECK_THROWS_AS(validate_model(bad_spd), std::invalid_argument);

    MaterialModel bad_alpha = exchange_only(1.0);
    bad_alpha.alpha = 0.0;
    CHECK_THROWS_AS(validate_model(bad_alpha), std::invalid_argument);

    CHECK(min_a_eigenvalue(exchange_only(2.0)) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("pi is self-adjoint in L2") {
    const Mesh m = build_unit_cube_mesh(2);
    std::mt19937_64 rng(61);
    for (const PiSpec& pi :
         {PiSpec::zero(), PiSpec::scaling(-0.4), PiSpec::uniaxial(1.3, Vec3(1, 1, 0))}) {
        MaterialModel model = exchange_only(1.0);
        model.pi = pi;
        for (int s = 0; s < 20; ++s) {
            const NodalField u = rng_field(m, rng);
            const NodalField v = rng_field(m, rng);
            CHECK(l2_inner(m, pi_apply(model, m, u), v) ==
                  doctest::Approx(l2_inner(m, u, pi_apply(model, m, v))).epsilon(1e-12));
        }
    }
}

TEST_CASE("cached system operators match the standalone operations") {
    const Mesh m = build_unit_cube_mesh(2);
    std::mt19937_64 rng(67);
    MaterialModel model = exchange_dmi(1.0, 0.5);
    model.f = rng_field(m, rng);
    const System sys = prepare_system(m, model);
    const LumpedWeights w = lumped_weights(m);

    const NodalField u = rng_field(m, rng);
    const NodalField h1 = sys.heffloc(u);
    const NodalField h2 = heffloc_field(model, m, w, u);
    for (int z = 0; z < m.n_vertices(); ++z) CHECK((h1[z] - h2[z]).norm() <= 1e-13);
    CHECK(sys.energy(u) == doctest::Approx(energy(model, m, u)).epsilon(1e-13));
}
