#include "poromech/mesh.hpp"

#include <random>

#include "poromech/errors.hpp"

namespace poromech::fem {

const std::vector<BoundaryEdge>& Mesh::edges(const std::string& tag) const {
    auto it = tags.find(tag);
    if (it == tags.end()) throw UnknownBoundaryTag("no boundary tagged '" + tag + "'");
    return it->second;
}

Mesh build_structured_mesh(int nx, int ny, double Lx, double Ly) {
    if (nx < 1 || ny < 1) throw InvalidDimension("mesh needs nx, ny >= 1 (got " + std::to_string(nx) + ", " +
                                                 std::to_string(ny) + ")");
    if (!(Lx > 0.0) || !(Ly > 0.0)) throw InvalidDimension("mesh extents must be positive");
    Mesh m;
    m.nx = nx;
    m.ny = ny;
    m.Lx = Lx;
    m.Ly = Ly;
    m.nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) m.nodes.push_back(Vec2<double>{{Lx * i / nx, Ly * j / ny}});
    m.elements.reserve(static_cast<std::size_t>(nx * ny));
    for (int ey = 0; ey < ny; ++ey)
        for (int ex = 0; ex < nx; ++ex)
            m.elements.push_back({m.node_index(ex, ey), m.node_index(ex + 1, ey), m.node_index(ex + 1, ey + 1),
                                  m.node_index(ex, ey + 1)});
    auto& bottom = m.tags["bottom"];
    auto& top = m.tags["top"];
    for (int ex = 0; ex < nx; ++ex) {
        const int eb = m.element_index(ex, 0);
        bottom.push_back({eb, Bottom, {m.elements[eb][0], m.elements[eb][1]}});
        const int et = m.element_index(ex, ny - 1);
        top.push_back({et, Top, {m.elements[et][2], m.elements[et][3]}});
    }
    auto& left = m.tags["left"];
    auto& right = m.tags["right"];
    for (int ey = 0; ey < ny; ++ey) {
        const int er = m.element_index(nx - 1, ey);
        right.push_back({er, Right, {m.elements[er][1], m.elements[er][2]}});
        const int el = m.element_index(0, ey);
        left.push_back({el, Left, {m.elements[el][3], m.elements[el][0]}});
    }
    return m;
}

void distort_interior(Mesh& mesh, double fraction, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-fraction, fraction);
    const double hx = mesh.Lx / mesh.nx;
    const double hy = mesh.Ly / mesh.ny;
    for (int j = 1; j < mesh.ny; ++j)
        for (int i = 1; i < mesh.nx; ++i) {
            auto& X = mesh.nodes[static_cast<std::size_t>(mesh.node_index(i, j))];
            X[0] += u(gen) * hx;
            X[1] += u(gen) * hy;
        }
    check_mesh(mesh);
}

void check_mesh(const Mesh& mesh) {
    // The bilinear Jacobian is linear in each direction, so its extremes sit at the corners.
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const auto& c = mesh.elements[static_cast<std::size_t>(e)];
        for (int k = 0; k < 4; ++k) {
            const auto& a = mesh.nodes[static_cast<std::size_t>(c[k])];
            const auto& b = mesh.nodes[static_cast<std::size_t>(c[(k + 1) % 4])];
            const auto& d = mesh.nodes[static_cast<std::size_t>(c[(k + 3) % 4])];
            const double cross = (b[0] - a[0]) * (d[1] - a[1]) - (b[1] - a[1]) * (d[0] - a[0]);
            if (!(cross > 0.0)) throw NonPositiveJacobian(cross, "element " + std::to_string(e));
        }
    }
}

}  // namespace poromech::fem
