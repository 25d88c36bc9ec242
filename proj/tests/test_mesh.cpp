#include "llgmid/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace llgmid;

TEST_CASE("unit cube counts and element volumes") {
    const Mesh m1 = build_unit_cube_mesh(1);
    CHECK(m1.n_vertices() == 8);
    CHECK(m1.n_tets() == 6);
    for (int t = 0; t < 6; ++t) CHECK(element_volume(m1, t) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    const Mesh m2 = build_unit_cube_mesh(2);
    CHECK(m2.n_vertices() == 27);
    CHECK(m2.n_tets() == 48);
    for (int t = 0; t < m2.n_tets(); ++t)
        CHECK(element_volume(m2, t) == doctest::Approx(1.0 / 48.0).epsilon(1e-14));

    // determinant of the edge matrix by hand for one element
    const auto& tet = m2.tetrahedra[0];
    const Vec3 e1 = m2.vertices[tet[1]] - m2.vertices[tet[0]];
    const Vec3 e2 = m2.vertices[tet[2]] - m2.vertices[tet[0]];
    const Vec3 e3 = m2.vertices[tet[3]] - m2.vertices[tet[0]];
    CHECK(std::abs(e1.dot(e2.cross(e3))) / 6.0 == doctest::Approx(1.0 / 48.0).epsilon(1e-14));
}

TEST_CASE("builder rejects N = 0 and bad element indices") {
    CHECK_THROWS_AS(build_unit_cube_mesh(0), std::invalid_argument);
    const Mesh m = build_unit_cube_mesh(1);
    CHECK_THROWS_AS(element_volume(m, -1), std::out_of_range);
    CHECK_THROWS_AS(element_volume(m, 6), std::out_of_range);
}

TEST_CASE("degenerate tetrahedron has zero volume") {
    Mesh m = build_unit_cube_mesh(1);
    auto tet = m.tetrahedra[0];
    tet[1] = tet[0];  // repeated vertex
    m.tetrahedra.push_back(tet);
    m.volumes.push_back(0.0);
    CHECK(element_volume(m, m.n_tets() - 1) == 0.0);
}

TEST_CASE("mesh stats of the structured family") {
    const Mesh m1 = build_unit_cube_mesh(1);
    const auto s1 = mesh_stats(m1);
    CHECK(s1.h_max == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(s1.h_min == doctest::Approx(1.0).epsilon(1e-15));

    CHECK(mesh_stats(build_unit_cube_mesh(4)).h_min == doctest::Approx(0.25).epsilon(1e-15));

    const double kappa2 = mesh_stats(build_unit_cube_mesh(2)).kappa_estimate;
    const double kappa8 = mesh_stats(build_unit_cube_mesh(8)).kappa_estimate;
    CHECK(std::abs(kappa2 - kappa8) <= 1e-12);
}

TEST_CASE("refinement halves mesh sizes exactly on dyadic N") {
    for (int N : {1, 2, 4}) {
        const auto coarse = mesh_stats(build_unit_cube_mesh(N));
        const auto fine = mesh_stats(build_unit_cube_mesh(2 * N));
        CHECK(fine.h_max == coarse.h_max / 2.0);
        CHECK(fine.h_min == coarse.h_min / 2.0);
    }
}

TEST_CASE("volumes partition the box") {
    for (int N = 1; N <= 8; ++N) {
        const Mesh m = build_unit_cube_mesh(N);
        double sum = 0.0;
        for (double v : m.volumes) {
            CHECK(v > 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("face conformity: interior faces shared by 2 elements, boundary by 1") {
    const int N = 3;
    const Mesh m = build_unit_cube_mesh(N);
    std::map<std::array<int, 3>, int> faces;
    for (const auto& tet : m.tetrahedra)
        for (int skip = 0; skip < 4; ++skip) {
            std::array<int, 3> f;
            int w = 0;
            for (int i = 0; i < 4; ++i)
                if (i != skip) f[w++] = tet[i];
            std::sort(f.begin(), f.end());
            ++faces[f];
        }
    int boundary = 0;
    for (const auto& [f, count] : faces) {
        CHECK((count == 1 || count == 2));
        if (count == 1) ++boundary;
    }
    CHECK(boundary == 12 * N * N);
}

TEST_CASE("node numbering is lexicographic with x fastest; centered flag shifts the box") {
    const Mesh c = build_unit_cube_mesh(2, true);
    CHECK((c.vertices[1] - c.vertices[0] - Vec3(0.5, 0, 0)).norm() == 0.0);
    CHECK(c.box_lo == Vec3::Constant(-0.5));
    CHECK(c.box_hi == Vec3::Constant(0.5));
    bool has_corner = false;
    for (const auto& v : c.vertices)
        if ((v - Vec3::Constant(0.5)).norm() == 0.0) has_corner = true;
    CHECK(has_corner);

    const Mesh u = build_unit_cube_mesh(2, false);
    CHECK(u.box_lo == Vec3::Zero());
    CHECK(u.vertices[0] == Vec3::Zero());
}
