#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace latentgp {

// 2D mesh of 4-node quadrilaterals. Element connectivity is
// counter-clockwise. Degrees of freedom interleave as
// (ux0, uy0, ux1, uy1, ...), so dof(ux of node n) = 2n.
struct Mesh2D {
    Eigen::Matrix<double, Eigen::Dynamic, 2> node_coords;
    std::vector<std::array<int, 4>> elements;
    std::vector<int> fixed_dofs;  // sorted, unique

    // Nodes where point loads may be applied, with the arc-length
    // distance of each from the fixed boundary.
    std::vector<int> loadable_nodes;
    std::vector<double> loadable_distance;

    int n_nodes() const { return static_cast<int>(node_coords.rows()); }
    int n_dofs() const { return 2 * n_nodes(); }
    int n_elements() const { return static_cast<int>(elements.size()); }

    std::vector<char> fixed_mask() const;

    // Throws ShapeError on inconsistent connectivity or dof lists.
    void validate() const;
};

// Structured cantilever description; the canonical test geometry.
// Left edge (x = 0) is fully fixed; loads attach along the top edge,
// parameterized by distance from the fixed edge. The fixed corner
// itself is not loadable.
struct MeshSpec {
    double length = 2.0;
    double height = 0.5;
    int nx = 16;
    int ny = 4;

    Mesh2D build() const;
};

// Snaps a requested attachment distance to the nearest loadable node
// (ties resolve to the lower node index). Throws ConfigError when the
// mesh has no loadable nodes.
int node_for_distance(const Mesh2D& mesh, double distance);

}  // namespace latentgp
