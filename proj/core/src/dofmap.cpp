#include "poromech/dofmap.hpp"

#include <algorithm>
#include <numeric>

namespace poromech::fem {

namespace {

constexpr std::array<std::array<int, 2>, 9> q2_offsets = {{
    {0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 0}, {2, 1}, {1, 2}, {0, 1}, {1, 1},
}};

int find_root(std::vector<int>& parent, int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
        parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
        i = parent[static_cast<std::size_t>(i)];
    }
    return i;
}

}  // namespace

int DofMap::corner_lattice(int corner) const {
    const int i = corner % (nx + 1);
    const int j = corner / (nx + 1);
    return 2 * j * lattice_cols() + 2 * i;
}

std::array<int, 9> DofMap::element_lattice(int e) const {
    const int ex = e % nx;
    const int ey = e / nx;
    std::array<int, 9> r{};
    for (int a = 0; a < 9; ++a)
        r[a] = (2 * ey + q2_offsets[a][1]) * lattice_cols() + 2 * ex + q2_offsets[a][0];
    return r;
}

std::vector<int> DofMap::element_dofs(const Mesh& mesh, int e) const {
    std::vector<int> d;
    d.reserve(static_cast<std::size_t>(n_element_dofs()));
    for (int l : element_lattice(e)) {
        d.push_back(u(l, 0));
        d.push_back(u(l, 1));
    }
    const auto& corners = mesh.elements[static_cast<std::size_t>(e)];
    for (int c : corners)
        for (int f = 0; f < nf; ++f) d.push_back(P0(c, f));
    for (int c : corners)
        for (int f = 0; f < nf; ++f) d.push_back(eta(c, f));
    return d;
}

std::array<int, 3> side_lattice_local(int side) {
    switch (side) {
        case Bottom: return {0, 4, 1};
        case Right: return {1, 5, 2};
        case Top: return {2, 6, 3};
        default: return {3, 7, 0};
    }
}

std::vector<int> lattice_nodes_on(const Mesh& mesh, const DofMap& dofs, const std::string& tag) {
    std::vector<int> r;
    for (const auto& edge : mesh.edges(tag)) {
        const auto lat = dofs.element_lattice(edge.element);
        for (int a : side_lattice_local(edge.side)) r.push_back(lat[static_cast<std::size_t>(a)]);
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

std::vector<int> corner_nodes_on(const Mesh& mesh, const std::string& tag) {
    std::vector<int> r;
    for (const auto& edge : mesh.edges(tag)) r.insert(r.end(), edge.nodes.begin(), edge.nodes.end());
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

DofMap build_dofmap(const Mesh& mesh, int nf, std::span<const TieBC> ties) {
    DofMap m;
    m.nx = mesh.nx;
    m.ny = mesh.ny;
    m.nf = nf;
    m.n_lattice = (2 * mesh.nx + 1) * (2 * mesh.ny + 1);
    m.n_corner = mesh.n_nodes();
    const int n_slots = 2 * m.n_lattice + 2 * nf * m.n_corner;

    std::vector<int> parent(static_cast<std::size_t>(n_slots));
    std::iota(parent.begin(), parent.end(), 0);
    m.slot_to_dof.assign(static_cast<std::size_t>(n_slots), 0);
    for (const auto& tie : ties) {
        const auto nodes = lattice_nodes_on(mesh, m, tie.tag);
        if (nodes.empty()) continue;
        const int first = find_root(parent, m.u_slot(nodes.front(), tie.component));
        for (int l : nodes) {
            const int r = find_root(parent, m.u_slot(l, tie.component));
            if (r != first) parent[static_cast<std::size_t>(std::max(r, first))] = std::min(r, first);
        }
    }
    std::vector<int> root_dof(static_cast<std::size_t>(n_slots), -1);
    int next = 0;
    for (int s = 0; s < n_slots; ++s) {
        const int r = find_root(parent, s);
        auto& d = root_dof[static_cast<std::size_t>(r)];
        if (d < 0) d = next++;
        m.slot_to_dof[static_cast<std::size_t>(s)] = d;
    }
    m.n_dofs = next;
    m.kind.assign(static_cast<std::size_t>(next), DofKind::Displacement);
    m.fluid.assign(static_cast<std::size_t>(next), -1);
    for (int c = 0; c < m.n_corner; ++c)
        for (int f = 0; f < nf; ++f) {
            m.kind[static_cast<std::size_t>(m.P0(c, f))] = DofKind::Density;
            m.fluid[static_cast<std::size_t>(m.P0(c, f))] = f;
            m.kind[static_cast<std::size_t>(m.eta(c, f))] = DofKind::Potential;
            m.fluid[static_cast<std::size_t>(m.eta(c, f))] = f;
        }
    return m;
}

}  // namespace poromech::fem
