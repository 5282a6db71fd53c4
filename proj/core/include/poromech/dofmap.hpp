#pragma once

// Global numbering of the unknowns. Displacements live on the biquadratic
// lattice of (2nx+1)(2ny+1) nodes; each fluid has a referential density P₀
// and a nodal chemical potential η on every corner node.
//
// Unknowns are first laid out in "slots" and then mapped to global dofs, so
// tied slots can share one dof.

#include <array>
#include <span>
#include <vector>

#include "poromech/mesh.hpp"
#include "poromech/problem.hpp"

namespace poromech::fem {

enum class DofKind : unsigned char { Displacement, Density, Potential };

struct DofMap {
    int nx = 0;
    int ny = 0;
    int nf = 0;
    int n_lattice = 0;
    int n_corner = 0;
    int n_dofs = 0;
    std::vector<int> slot_to_dof;
    std::vector<DofKind> kind;  ///< per global dof
    std::vector<int> fluid;     ///< per global dof, −1 for displacement

    int lattice_cols() const { return 2 * nx + 1; }
    int u_slot(int lattice, int comp) const { return 2 * lattice + comp; }
    int p_slot(int corner, int f) const { return 2 * n_lattice + corner * 2 * nf + f; }
    int eta_slot(int corner, int f) const { return 2 * n_lattice + corner * 2 * nf + nf + f; }

    int u(int lattice, int comp) const { return slot_to_dof[static_cast<std::size_t>(u_slot(lattice, comp))]; }
    int P0(int corner, int f) const { return slot_to_dof[static_cast<std::size_t>(p_slot(corner, f))]; }
    int eta(int corner, int f) const { return slot_to_dof[static_cast<std::size_t>(eta_slot(corner, f))]; }

    int corner_lattice(int corner) const;
    /// Lattice nodes of element e in biquadratic local order.
    std::array<int, 9> element_lattice(int e) const;
    /// Element dofs: 18 displacements (node-major), then P₀ (corner-major), then η.
    std::vector<int> element_dofs(const Mesh& mesh, int e) const;
    int n_element_dofs() const { return 18 + 8 * nf; }
};

DofMap build_dofmap(const Mesh& mesh, int nf, std::span<const TieBC> ties);

/// Biquadratic local nodes along an element side, counterclockwise.
std::array<int, 3> side_lattice_local(int side);

/// Sorted lattice nodes lying on a tagged boundary.
std::vector<int> lattice_nodes_on(const Mesh& mesh, const DofMap& dofs, const std::string& tag);

/// Sorted corner nodes lying on a tagged boundary.
std::vector<int> corner_nodes_on(const Mesh& mesh, const std::string& tag);

}  // namespace poromech::fem
