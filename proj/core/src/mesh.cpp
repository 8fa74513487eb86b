#include "latentgp/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "latentgp/errors.hpp"
#include "latentgp/text.hpp"

namespace latentgp {

std::vector<char> Mesh2D::fixed_mask() const {
    std::vector<char> mask(static_cast<std::size_t>(n_dofs()), 0);
    for (int d : fixed_dofs)
        mask[static_cast<std::size_t>(d)] = 1;
    return mask;
}

void Mesh2D::validate() const {
    const int nn = n_nodes();
    if (nn == 0)
        throw ShapeError("mesh has no nodes");
    for (std::size_t e = 0; e < elements.size(); ++e) {
        const auto& conn = elements[e];
        for (int n : conn)
            if (n < 0 || n >= nn)
                throw ShapeError("element " + format_int(static_cast<long long>(e)) +
                                 " references node " + format_int(n) + " outside [0, " +
                                 format_int(nn) + ")");
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (conn[a] == conn[b])
                    throw ShapeError("element " + format_int(static_cast<long long>(e)) +
                                     " has a repeated node");
    }
    for (std::size_t i = 0; i < fixed_dofs.size(); ++i) {
        if (fixed_dofs[i] < 0 || fixed_dofs[i] >= n_dofs())
            throw ShapeError("fixed dof " + format_int(fixed_dofs[i]) + " out of range");
        if (i > 0 && fixed_dofs[i] <= fixed_dofs[i - 1])
            throw ShapeError("fixed dof list must be strictly increasing");
    }
    if (loadable_nodes.size() != loadable_distance.size())
        throw ShapeError("loadable node and distance lists differ in length");
    for (int n : loadable_nodes)
        if (n < 0 || n >= nn)
            throw ShapeError("loadable node " + format_int(n) + " out of range");
}

Mesh2D MeshSpec::build() const {
    if (length <= 0.0 || height <= 0.0 || nx < 1 || ny < 1)
        throw ConfigError("beam mesh requires positive dimensions and at least one element "
                          "per direction");

    Mesh2D mesh;
    const int nnx = nx + 1;
    const int nny = ny + 1;
    mesh.node_coords.resize(nnx * nny, 2);
    const double dx = length / nx;
    const double dy = height / ny;
    for (int iy = 0; iy < nny; ++iy)
        for (int ix = 0; ix < nnx; ++ix) {
            int n = iy * nnx + ix;
            mesh.node_coords(n, 0) = ix * dx;
            mesh.node_coords(n, 1) = iy * dy;
        }

    mesh.elements.reserve(static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            int n00 = iy * nnx + ix;
            int n10 = n00 + 1;
            int n01 = n00 + nnx;
            int n11 = n01 + 1;
            mesh.elements.push_back({n00, n10, n11, n01});
        }

    // Clamp the whole left edge.
    for (int iy = 0; iy < nny; ++iy) {
        int n = iy * nnx;
        mesh.fixed_dofs.push_back(2 * n);
        mesh.fixed_dofs.push_back(2 * n + 1);
    }
    std::sort(mesh.fixed_dofs.begin(), mesh.fixed_dofs.end());

    // Top edge carries the loads; skip the node shared with the fixed edge.
    for (int ix = 1; ix < nnx; ++ix) {
        int n = ny * nnx + ix;
        mesh.loadable_nodes.push_back(n);
        mesh.loadable_distance.push_back(ix * dx);
    }

    mesh.validate();
    return mesh;
}

int node_for_distance(const Mesh2D& mesh, double distance) {
    if (mesh.loadable_nodes.empty())
        throw ConfigError("mesh has no loadable nodes");
    std::size_t best = 0;
    double best_gap = std::abs(mesh.loadable_distance[0] - distance);
    for (std::size_t i = 1; i < mesh.loadable_nodes.size(); ++i) {
        double gap = std::abs(mesh.loadable_distance[i] - distance);
        if (gap < best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    return mesh.loadable_nodes[best];
}

}  // namespace latentgp
