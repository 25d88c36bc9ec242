#include "llgmid/mesh.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace llgmid {

namespace {

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    Mat3 edges;
    edges.col(0) = b - a;
    edges.col(1) = c - a;
    edges.col(2) = d - a;
    return edges.determinant() / 6.0;
}

}  // namespace

Mesh build_unit_cube_mesh(int N, bool centered) {
    if (N < 1) throw std::invalid_argument("build_unit_cube_mesh: N must be >= 1");

    Mesh mesh;
    mesh.subdivision = N;
    const double shift = centered ? 0.5 : 0.0;
    mesh.box_lo = Vec3::Constant(-shift);
    mesh.box_hi = Vec3::Constant(1.0 - shift);

    const int M = N + 1;
    mesh.vertices.reserve(static_cast<std::size_t>(M) * M * M);
    for (int l = 0; l < M; ++l)
        for (int j = 0; j < M; ++j)
            for (int i = 0; i < M; ++i)
                mesh.vertices.emplace_back(double(i) / N - shift, double(j) / N - shift,
                                           double(l) / N - shift);

    auto vid = [M](int i, int j, int l) { return i + M * (j + M * l); };

    // The 6 tets of a subcube are the vertex chains (0,0,0) -> (1,1,1) along
    // the axis orders sigma in S3; odd permutations are reordered to keep the
    // signed volume positive.
    constexpr int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                 {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    constexpr bool odd[6] = {false, false, false, true, true, true};

    mesh.tetrahedra.reserve(static_cast<std::size_t>(6) * N * N * N);
    for (int l = 0; l < N; ++l)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i)
                for (int p = 0; p < 6; ++p) {
                    int c[3] = {i, j, l};
                    std::array<int, 4> tet;
                    tet[0] = vid(c[0], c[1], c[2]);
                    for (int step = 0; step < 3; ++step) {
                        ++c[perms[p][step]];
                        tet[step + 1] = vid(c[0], c[1], c[2]);
                    }
                    if (odd[p]) std::swap(tet[2], tet[3]);
                    mesh.tetrahedra.push_back(tet);
                }

    mesh.volumes.reserve(mesh.tetrahedra.size());
    for (const auto& t : mesh.tetrahedra) {
        const double v = signed_volume(mesh.vertices[t[0]], mesh.vertices[t[1]],
                                       mesh.vertices[t[2]], mesh.vertices[t[3]]);
        if (!(v > 0.0)) throw std::logic_error("build_unit_cube_mesh: non-positive element");
        mesh.volumes.push_back(v);
    }
    return mesh;
}

double element_volume(const Mesh& mesh, int tet_index) {
    if (tet_index < 0 || tet_index >= mesh.n_tets())
        throw std::out_of_range("element_volume: tetrahedron index out of range");
    const auto& t = mesh.tetrahedra[tet_index];
    return std::abs(signed_volume(mesh.vertices[t[0]], mesh.vertices[t[1]],
                                  mesh.vertices[t[2]], mesh.vertices[t[3]]));
}

MeshStats mesh_stats(const Mesh& mesh) {
    if (mesh.n_tets() == 0) throw std::invalid_argument("mesh_stats: empty mesh");
    MeshStats s;
    s.h_min = std::numeric_limits<double>::infinity();
    double min_vol = std::numeric_limits<double>::infinity();
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const auto& tet = mesh.tetrahedra[t];
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                const double e = (mesh.vertices[tet[a]] - mesh.vertices[tet[b]]).norm();
                s.h_max = std::max(s.h_max, e);
                s.h_min = std::min(s.h_min, e);
            }
        min_vol = std::min(min_vol, mesh.volumes[t]);
    }
    s.kappa_estimate = s.h_max / std::cbrt(min_vol);
    return s;
}

}  // namespace llgmid
