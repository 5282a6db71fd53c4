#pragma once

// Structured quadrilateral meshes on a rectangle. Corner nodes are numbered
// row by row from the bottom-left, elements likewise, each with its corners
// listed counterclockwise starting bottom-left.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "poromech/tensor2.hpp"

namespace poromech::fem {

/// Element sides, in the order of their first corner.
enum Side : int { Bottom = 0, Right = 1, Top = 2, Left = 3 };

struct BoundaryEdge {
    int element = 0;
    int side = 0;
    std::array<int, 2> nodes{};  ///< corner nodes, counterclockwise with respect to the element
};

struct Mesh {
    int nx = 0;
    int ny = 0;
    double Lx = 0.0;
    double Ly = 0.0;
    std::vector<Vec2<double>> nodes;
    std::vector<std::array<int, 4>> elements;
    std::map<std::string, std::vector<BoundaryEdge>> tags;

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_elements() const { return static_cast<int>(elements.size()); }
    int node_index(int i, int j) const { return j * (nx + 1) + i; }
    int element_index(int ex, int ey) const { return ey * nx + ex; }

    /// Edges carrying `tag`; throws UnknownBoundaryTag.
    const std::vector<BoundaryEdge>& edges(const std::string& tag) const;
    bool has_tag(const std::string& tag) const { return tags.count(tag) != 0; }
};

/// nx × ny rectangles on [0, Lx] × [0, Ly] tagged left, right, top and bottom.
Mesh build_structured_mesh(int nx, int ny, double Lx, double Ly);

/// Moves interior nodes by a deterministic pseudo-random fraction of the local
/// spacing, keeping the boundary straight. Used for patch tests.
void distort_interior(Mesh& mesh, double fraction, unsigned seed);

/// Throws NonPositiveJacobian if any element's bilinear map folds.
void check_mesh(const Mesh& mesh);

}  // namespace poromech::fem
