#pragma once

#include "llgmid/la.hpp"

#include <array>
#include <vector>

namespace llgmid {

/// Structured tetrahedral triangulation of an axis-aligned box.
///
/// The unit-cube builder produces the Kuhn split: every subcube is cut into
/// the 6 tetrahedra that share its main diagonal (local corner (0,0,0) to
/// (1,1,1)), giving (N+1)^3 vertices and 6N^3 congruent, positively oriented
/// elements. Immutable after construction; safe to share across threads.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> tetrahedra;
    std::vector<double> volumes;
    Vec3 box_lo = Vec3::Zero();
    Vec3 box_hi = Vec3::Zero();
    int subdivision = 0;  // N, cells per axis

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_tets() const { return static_cast<int>(tetrahedra.size()); }
};

struct MeshStats {
    double h_max = 0.0;            // largest element diameter
    double h_min = 0.0;            // shortest edge length
    double kappa_estimate = 0.0;   // h_max / min_K vol(K)^(1/3)
};

/// Kuhn triangulation of the cube [0,1]^3 (or [-1/2,1/2]^3 when centered)
/// with N cells per axis. Node numbering is lexicographic with x fastest.
/// Throws std::invalid_argument for N == 0.
Mesh build_unit_cube_mesh(int N, bool centered = true);

/// |K| for one element, from the signed volume of its edge matrix.
/// Throws std::out_of_range for an invalid index.
double element_volume(const Mesh& mesh, int tet_index);

MeshStats mesh_stats(const Mesh& mesh);

}  // namespace llgmid
