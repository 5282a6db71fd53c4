#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "poromech/assembly.hpp"
#include "poromech/errors.hpp"
#include "poromech/shape.hpp"
#include "support.hpp"

using namespace poromech;
using namespace poromech::fem;
using namespace poromech::constitutive;
using poromech::testing::uniform;

namespace {

PermeabilityParams conductivity(double k) {
    PermeabilityParams p;
    p.k_tilde = k;
    return p;
}

Mixture elastic_only() {
    Mixture m;
    m.solid = LinearElasticParams{2.0e6, 1.5e6};
    m.phi0s = 1.0;
    return m;
}

Mixture saturated() {
    Mixture m;
    m.solid = NeoHookeanParams{1.0e7, 6.0e6};
    m.phi0s = 0.625;
    m.vf_kind = kinematics::VolumeFractionKind::IncompressibleSolid;
    m.fluids.push_back({"water", ConstantBulkFluidParams{2.27e9, 1000.0}, 0.375, conductivity(1e-5)});
    return m;
}

Mixture two_gas() {
    Mixture m;
    m.solid = NeoHookeanParams{5.77e7, 3.86e7};
    m.phi0s = 0.8;
    m.fluids.push_back({"co2", VdWParams{0.364, 42.67e-6, 1.0, 8.32, 285.0, 0.044}, 0.15, conductivity(0.1)});
    PermeabilityParams kg;
    kg.kappa = 1e-9;
    kg.viscosity = 1.8e-5;
    m.fluids.push_back({"air", IdealGasParams{8.32, 285.0, 1.0, 0.029}, 0.05, kg});
    return m;
}

Problem make_problem(Mesh mesh, Mixture mix) {
    Problem pb;
    pb.mesh = std::move(mesh);
    pb.mixture = std::move(mix);
    pb.stress_scale = 1e6;
    pb.pressure_scale = 1e5;
    pb.density_scale.assign(static_cast<std::size_t>(pb.mixture.n_fluids()), 100.0);
    return pb;
}

double norm_of_rows(const Eigen::VectorXd& r, const DofMap& dofs, DofKind kind) {
    double s = 0.0;
    for (int d = 0; d < dofs.n_dofs; ++d)
        if (dofs.kind[static_cast<std::size_t>(d)] == kind) s = std::max(s, std::abs(r[d]));
    return s;
}

}  // namespace

TEST(Mesh, Counts) {
    const Mesh m = build_structured_mesh(2, 2, 1.0, 1.0);
    EXPECT_EQ(m.n_nodes(), 9);
    EXPECT_EQ(m.n_elements(), 4);
    for (const char* t : {"left", "right", "top", "bottom"}) EXPECT_EQ(m.edges(t).size(), 2u);
}

TEST(Mesh, UnitSquareEdgesInExactlyOneTag) {
    const Mesh m = build_structured_mesh(1, 1, 1.0, 1.0);
    std::multiset<std::pair<int, int>> seen;
    for (const auto& [tag, edges] : m.tags)
        for (const auto& e : edges) seen.insert({e.element, e.side});
    EXPECT_EQ(seen.size(), 4u);
    for (int s = 0; s < 4; ++s) EXPECT_EQ(seen.count({0, s}), 1u);
}

TEST(Mesh, InvalidDimension) {
    EXPECT_THROW(build_structured_mesh(0, 1, 1.0, 1.0), InvalidDimension);
    EXPECT_THROW(build_structured_mesh(1, 1, -1.0, 1.0), InvalidDimension);
    EXPECT_THROW((void)build_structured_mesh(1, 1, 1.0, 1.0).edges("nowhere"), UnknownBoundaryTag);
}

TEST(Mesh, DistortionKeepsPositiveJacobians) {
    Mesh m = build_structured_mesh(6, 5, 2.0, 1.0);
    distort_interior(m, 0.25, 7);
    EXPECT_NO_THROW(check_mesh(m));
    EXPECT_DOUBLE_EQ(m.nodes[static_cast<std::size_t>(m.node_index(6, 3))][0], 2.0);
}

TEST(Shape, PartitionOfUnityAndGradients) {
    for (auto fam : {ShapeFamily::Bilinear, ShapeFamily::Biquadratic}) {
        for (int k = 0; k < 50; ++k) {
            const auto s = shape_eval(fam, uniform(-1, 1), uniform(-1, 1));
            double sum = 0.0, gx = 0.0, gy = 0.0;
            for (int a = 0; a < s.n; ++a) {
                sum += s.N[a];
                gx += s.dN[a][0];
                gy += s.dN[a][1];
            }
            EXPECT_NEAR(sum, 1.0, 1e-14);
            EXPECT_NEAR(gx, 0.0, 1e-13);
            EXPECT_NEAR(gy, 0.0, 1e-13);
        }
    }
}

TEST(Shape, KroneckerAtNodes) {
    for (auto fam : {ShapeFamily::Bilinear, ShapeFamily::Biquadratic}) {
        const int n = fam == ShapeFamily::Bilinear ? 4 : 9;
        for (int b = 0; b < n; ++b) {
            const auto xi = node_coords(fam, b);
            const auto s = shape_eval(fam, xi[0], xi[1]);
            for (int a = 0; a < n; ++a) EXPECT_NEAR(s.N[a], a == b ? 1.0 : 0.0, 1e-15);
        }
    }
}

TEST(Shape, GaussRulesIntegratePolynomials) {
    double s = 0.0;
    for (const auto& q : gauss_rule_2d(3)) s += q.w * std::pow(q.xi, 4) * std::pow(q.eta, 2);
    EXPECT_NEAR(s, (2.0 / 5.0) * (2.0 / 3.0), 1e-14);
}

TEST(Assembly, StressFreeStateHasZeroResidual) {
    Mesh mesh = build_structured_mesh(3, 2, 1.5, 1.0);
    distort_interior(mesh, 0.2, 3);
    Assembler as(make_problem(std::move(mesh), saturated()));
    const std::array<double, 1> P0 = {0.375 * 1000.0};
    const Eigen::VectorXd x = as.initial_state(P0);
    const Eigen::VectorXd r = as.raw_residual(x, x, 1.0);
    EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Assembly, ClosedBoxUniformDensityIsFixedPoint) {
    Mesh mesh = build_structured_mesh(3, 3, 1.0, 1.0);
    distort_interior(mesh, 0.2, 11);
    Problem pb = make_problem(std::move(mesh), two_gas());
    for (const char* t : {"left", "right", "top", "bottom"})
        for (int c = 0; c < 2; ++c) pb.displacement.push_back({t, c, 0.0});
    Assembler as(std::move(pb));
    const std::array<double, 2> P0 = {0.15 * 300.0, 0.05 * 1.2};
    const Eigen::VectorXd x = as.initial_state(P0);
    const Eigen::VectorXd r = as.assemble_residual(x, x, 10.0);
    // Nodal η is uniform up to rounding of its own magnitude.
    const double eta = std::abs(x[as.dofs().eta(0, 0)]);
    EXPECT_LT(norm_of_rows(r, as.dofs(), DofKind::Density), 1e-15 * eta);
    EXPECT_LT(norm_of_rows(r, as.dofs(), DofKind::Potential), 1e-12);
}

TEST(Assembly, PatchTestOnDistortedMesh) {
    Mesh mesh = build_structured_mesh(4, 3, 2.0, 1.5);
    distort_interior(mesh, 0.3, 5);
    const double A[2][2] = {{1e-3, -4e-4}, {2.5e-4, -7e-4}};
    const double c[2] = {1e-4, -2e-4};
    Problem pb = make_problem(mesh, elastic_only());
    Assembler probe(pb);
    const DofMap& dm = probe.dofs();
    // Lattice positions via the element geometry at local lattice nodes.
    std::vector<Vec2<double>> pos(static_cast<std::size_t>(dm.n_lattice));
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const auto lat = dm.element_lattice(e);
        for (int a = 0; a < 9; ++a) {
            const auto xi = node_coords(ShapeFamily::Biquadratic, a);
            pos[static_cast<std::size_t>(lat[static_cast<std::size_t>(a)])] = point_geometry(mesh, e, xi[0], xi[1]).X;
        }
    }
    const std::set<int> boundary = [&] {
        std::set<int> s;
        for (const char* t : {"left", "right", "top", "bottom"})
            for (int l : lattice_nodes_on(mesh, dm, t)) s.insert(l);
        return s;
    }();

    Eigen::VectorXd x_exact = Eigen::VectorXd::Zero(dm.n_dofs);
    for (int l = 0; l < dm.n_lattice; ++l)
        for (int i = 0; i < 2; ++i)
            x_exact[dm.u(l, i)] = A[i][0] * pos[static_cast<std::size_t>(l)][0] +
                                  A[i][1] * pos[static_cast<std::size_t>(l)][1] + c[i];

    // Interior residual of the exact linear field vanishes.
    const Eigen::VectorXd r = probe.raw_residual(x_exact, x_exact, 1.0);
    for (int l = 0; l < dm.n_lattice; ++l)
        if (!boundary.count(l))
            for (int i = 0; i < 2; ++i) EXPECT_NEAR(r[dm.u(l, i)] / pb.stress_scale, 0.0, 1e-10);

    // Solve with the boundary prescribed; interior nodes reproduce the field.
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dm.n_dofs);
    for (int l : boundary)
        for (int i = 0; i < 2; ++i) x[dm.u(l, i)] = x_exact[dm.u(l, i)];
    const SparseSystem sys0 = probe.assemble_tangent(x, x, 1.0);
    SparseSystem sys = sys0;
    for (int l : boundary)
        for (int i = 0; i < 2; ++i) {
            const int d = dm.u(l, i);
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.A, d); it; ++it)
                it.valueRef() = it.col() == d ? 1.0 : 0.0;
            sys.b[d] = 0.0;
        }
    x -= solve_linear(sys);
    EXPECT_LT((x - x_exact).cwiseAbs().maxCoeff(), 1e-10);
}

namespace {

Eigen::VectorXd perturbation(const Assembler& as, double su, double sp, double se) {
    const DofMap& dm = as.dofs();
    Eigen::VectorXd d(dm.n_dofs);
    for (int k = 0; k < dm.n_dofs; ++k) {
        switch (dm.kind[static_cast<std::size_t>(k)]) {
            case DofKind::Displacement: d[k] = uniform(-su, su); break;
            case DofKind::Density: d[k] = uniform(-sp, sp); break;
            case DofKind::Potential: d[k] = uniform(-se, se); break;
        }
    }
    return d;
}

void check_tangent(const Assembler& as, const Eigen::VectorXd& x, const Eigen::VectorXd& x_old, double dt,
                   const Eigen::VectorXd& scale_dir) {
    const SparseSystem sys = as.assemble_tangent(x, x_old, dt);
    const Eigen::VectorXd r0 = as.assemble_residual(x, x_old, dt);
    EXPECT_LT((sys.b - r0).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, r0.cwiseAbs().maxCoeff()));
    const double h = 1e-6;
    for (int k = 0; k < 10; ++k) {
        Eigen::VectorXd dir = perturbation(as, 1.0, 1.0, 1.0).cwiseProduct(scale_dir);
        const Eigen::VectorXd Kd = sys.A * dir;
        const Eigen::VectorXd fd = (as.assemble_residual(x + h * dir, x_old, dt) - r0) / h;
        EXPECT_LT((fd - Kd).norm() / Kd.norm(), 1e-5) << "direction " << k;
    }
}

}  // namespace

TEST(Assembly, TangentMatchesFiniteDifferenceSaturated) {
    Mesh mesh = build_structured_mesh(3, 2, 1.5, 1.0);
    distort_interior(mesh, 0.2, 9);
    Problem pb = make_problem(std::move(mesh), saturated());
    pb.gravity = true;
    pb.solid_density = 2600.0;
    pb.density_scale = {1000.0};
    pb.pressure_scale = 1e4;
    pb.displacement.push_back({"bottom", 1, 0.0});
    pb.potential.push_back({"top", 0, 0.0});
    pb.traction.push_back({"top", {{0.0, -1e4}}});
    Assembler as(std::move(pb));
    const std::array<double, 1> P0 = {375.0};
    Eigen::VectorXd x_old = as.initial_state(P0);
    Eigen::VectorXd scale(as.n_dofs());
    for (int k = 0; k < as.n_dofs(); ++k) {
        const auto kind = as.dofs().kind[static_cast<std::size_t>(k)];
        scale[k] = kind == DofKind::Displacement ? 1e-4 : kind == DofKind::Density ? 1e-3 : 1.0;
    }
    Eigen::VectorXd x = x_old + perturbation(as, 1e-4, 5e-3, 2.0);
    check_tangent(as, x, x_old, 0.5, scale);
}

TEST(Assembly, TangentMatchesFiniteDifferenceTwoGas) {
    Mesh mesh = build_structured_mesh(2, 3, 1.0, 1.5);
    distort_interior(mesh, 0.2, 13);
    Problem pb = make_problem(std::move(mesh), two_gas());
    pb.gravity = true;
    pb.solid_density = 2600.0;
    pb.density_scale = {300.0, 1.2};
    pb.displacement.push_back({"bottom", 0, 0.0});
    pb.displacement.push_back({"bottom", 1, 0.0});
    pb.mass_flux.push_back({"top", 0, 4.4, 0.5, 0.4});
    Assembler as(std::move(pb));
    const std::array<double, 2> P0 = {0.15 * 300.0, 0.05 * 1.2};
    const Eigen::VectorXd x_old = as.initial_state(P0);
    Eigen::VectorXd scale(as.n_dofs());
    for (int k = 0; k < as.n_dofs(); ++k) {
        const auto kind = as.dofs().kind[static_cast<std::size_t>(k)];
        const int f = as.dofs().fluid[static_cast<std::size_t>(k)];
        scale[k] = kind == DofKind::Displacement ? 1e-4 : kind == DofKind::Density ? P0[static_cast<std::size_t>(f)] * 1e-2 : 1e2;
    }
    const Eigen::VectorXd x = x_old + 2.5 * perturbation(as, 1.0, 1.0, 1.0).cwiseProduct(scale);
    check_tangent(as, x, x_old, 2.0, scale);
}

TEST(Assembly, UpwindTangentMatchesFiniteDifference) {
    Mesh mesh = build_structured_mesh(2, 3, 1.0, 1.5);
    distort_interior(mesh, 0.2, 13);
    Problem pb = make_problem(std::move(mesh), two_gas());
    pb.upwind_mobility = true;
    pb.density_scale = {300.0, 1.2};
    pb.displacement.push_back({"bottom", 0, 0.0});
    pb.displacement.push_back({"bottom", 1, 0.0});
    pb.mass_flux.push_back({"top", 0, 4.4, 0.5, 0.4});
    Assembler as(std::move(pb));
    const std::array<double, 2> P0 = {0.15 * 300.0, 0.05 * 1.2};
    const Eigen::VectorXd x_old = as.initial_state(P0);
    Eigen::VectorXd scale(as.n_dofs());
    for (int k = 0; k < as.n_dofs(); ++k) {
        const auto kind = as.dofs().kind[static_cast<std::size_t>(k)];
        const int f = as.dofs().fluid[static_cast<std::size_t>(k)];
        scale[k] = kind == DofKind::Displacement ? 1e-4 : kind == DofKind::Density ? P0[static_cast<std::size_t>(f)] * 1e-2 : 1e2;
    }
    const Eigen::VectorXd x = x_old + 2.5 * perturbation(as, 1.0, 1.0, 1.0).cwiseProduct(scale);
    check_tangent(as, x, x_old, 2.0, scale);
}

TEST(Assembly, ElasticTangentIsSymmetric) {
    Mesh mesh = build_structured_mesh(3, 3, 1.0, 1.0);
    distort_interior(mesh, 0.25, 2);
    Assembler as(make_problem(std::move(mesh), elastic_only()));
    const Eigen::VectorXd x = Eigen::VectorXd::Zero(as.n_dofs());
    const SparseSystem sys = as.assemble_tangent(x, x, 1.0);
    const Eigen::SparseMatrix<double, Eigen::RowMajor> At = sys.A.transpose();
    const double asym = Eigen::SparseMatrix<double, Eigen::RowMajor>(sys.A - At).norm();
    EXPECT_LT(asym / sys.A.norm(), 1e-12);
}

TEST(Assembly, DirichletRowsAreIdentity) {
    Problem pb = make_problem(build_structured_mesh(2, 2, 1.0, 1.0), saturated());
    pb.density_scale = {1000.0};
    pb.displacement.push_back({"left", 0, 0.01});
    pb.density.push_back({"right", 0, 380.0});
    pb.potential.push_back({"top", 0, 3.0});
    Assembler as(std::move(pb));
    const std::array<double, 1> P0 = {375.0};
    const Eigen::VectorXd x = as.initial_state(P0);
    const SparseSystem sys = as.assemble_tangent(x, x, 1.0);
    for (const auto& c : as.constraints()) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.A, c.row); it; ++it)
            EXPECT_EQ(it.value(), it.col() == c.col ? 1.0 : 0.0);
        EXPECT_NEAR(sys.b[c.row], 0.0, 1e-15);
        EXPECT_EQ(x[c.col], c.value);
    }
}

TEST(Assembly, TiedDofsShareOneIndex) {
    Problem pb = make_problem(build_structured_mesh(3, 2, 1.0, 1.0), elastic_only());
    pb.ties.push_back({"top", 1});
    Assembler as(std::move(pb));
    std::set<int> ids, xs;
    for (int l : lattice_nodes_on(as.problem().mesh, as.dofs(), "top")) {
        ids.insert(as.dofs().u(l, 1));
        xs.insert(as.dofs().u(l, 0));
    }
    EXPECT_EQ(ids.size(), 1u);
    EXPECT_EQ(xs.size(), 7u);
    EXPECT_EQ(as.n_dofs(), 2 * 5 * 7 - 6);
}

TEST(Neumann, TerzaghiLoadTotal) {
    Problem pb = make_problem(build_structured_mesh(4, 10, 1.0, 1.0), elastic_only());
    pb.traction.push_back({"top", {{0.0, -1e4}}});
    const DofMap dm = build_dofmap(pb.mesh, 0, {});
    const Eigen::VectorXd f = apply_neumann(pb, dm, Eigen::VectorXd::Zero(dm.n_dofs));
    double fx = 0.0, fy = 0.0;
    for (int l = 0; l < dm.n_lattice; ++l) {
        fx += f[dm.u(l, 0)];
        fy += f[dm.u(l, 1)];
    }
    EXPECT_NEAR(fy, -1e4, 1e-8);
    EXPECT_NEAR(fx, 0.0, 1e-12);
}

TEST(Neumann, ZeroTractionLeavesRhsUnchanged) {
    Problem pb = make_problem(build_structured_mesh(2, 2, 1.0, 1.0), elastic_only());
    pb.traction.push_back({"right", {{0.0, 0.0}}});
    const DofMap dm = build_dofmap(pb.mesh, 0, {});
    Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(dm.n_dofs, 0.0, 1.0);
    EXPECT_EQ(apply_neumann(pb, dm, rhs), rhs);
}

TEST(Neumann, InjectionRateTotal) {
    Problem pb = make_problem(build_structured_mesh(10, 5, 10.0, 5.0), saturated());
    pb.mass_flux.push_back({"top", 0, 4.4, 5.0, 0.0});
    const DofMap dm = build_dofmap(pb.mesh, 1, {});
    auto total = [&](const Problem& p) {
        const Eigen::VectorXd f = apply_neumann(p, dm, Eigen::VectorXd::Zero(dm.n_dofs));
        double s = 0.0;
        for (int c = 0; c < dm.n_corner; ++c) s += f[dm.P0(c, 0)];
        return s;
    };
    EXPECT_NEAR(total(pb), 4.4 * 10.0, 1e-12);
    pb.mass_flux[0].width = 2.0;
    EXPECT_NEAR(total(pb), 4.4 * 2.0, 1e-12);
    pb.mass_flux[0].width = 1.3;  // cuts through elements
    EXPECT_NEAR(total(pb), 4.4 * 1.3, 1e-12);
}

TEST(Neumann, UnknownTag) {
    Problem pb = make_problem(build_structured_mesh(2, 2, 1.0, 1.0), elastic_only());
    pb.traction.push_back({"lid", {{0.0, 1.0}}});
    const DofMap dm = build_dofmap(pb.mesh, 0, {});
    EXPECT_THROW(apply_neumann(pb, dm, Eigen::VectorXd::Zero(dm.n_dofs)), UnknownBoundaryTag);
    EXPECT_THROW(Assembler{pb}, UnknownBoundaryTag);
}

TEST(Assembly, TransportRowsSumToMassRate) {
    Mesh mesh = build_structured_mesh(4, 3, 2.0, 1.5);
    distort_interior(mesh, 0.2, 17);
    Problem pb = make_problem(std::move(mesh), two_gas());
    pb.density_scale = {300.0, 1.2};
    pb.mass_flux.push_back({"top", 1, 0.3, 1.0, 0.7});
    Assembler as(std::move(pb));
    const std::array<double, 2> P0 = {45.0, 0.06};
    const Eigen::VectorXd x_old = as.initial_state(P0);
    Eigen::VectorXd x = x_old + perturbation(as, 1e-4, 1e-3, 10.0);
    as.project_potential(x);
    const double dt = 3.0;
    const Eigen::VectorXd r = as.raw_residual(x, x_old, dt);
    const auto m1 = as.fluid_mass(x);
    const auto m0 = as.fluid_mass(x_old);
    for (int f = 0; f < 2; ++f) {
        double s = 0.0;
        for (int c = 0; c < as.dofs().n_corner; ++c) s += r[as.dofs().P0(c, f)];
        const double inflow = f == 1 ? 0.3 * 0.7 : 0.0;
        const double rate = (m1[static_cast<std::size_t>(f)] - m0[static_cast<std::size_t>(f)]) / dt;
        EXPECT_NEAR(s, rate - inflow, 1e-12 * std::max(std::abs(rate), 1.0));
    }
}

TEST(Assembly, UpwindTransportRowsSumToMassRate) {
    Mesh mesh = build_structured_mesh(4, 3, 2.0, 1.5);
    distort_interior(mesh, 0.2, 17);
    Problem pb = make_problem(std::move(mesh), two_gas());
    pb.upwind_mobility = true;
    pb.density_scale = {300.0, 1.2};
    pb.mass_flux.push_back({"top", 1, 0.3, 1.0, 0.7});
    Assembler as(std::move(pb));
    const std::array<double, 2> P0 = {45.0, 0.06};
    const Eigen::VectorXd x_old = as.initial_state(P0);
    Eigen::VectorXd x = x_old + perturbation(as, 1e-4, 1e-3, 10.0);
    as.project_potential(x);
    const double dt = 3.0;
    const Eigen::VectorXd r = as.raw_residual(x, x_old, dt);
    const auto m1 = as.fluid_mass(x);
    const auto m0 = as.fluid_mass(x_old);
    for (int f = 0; f < 2; ++f) {
        double s = 0.0;
        for (int c = 0; c < as.dofs().n_corner; ++c) s += r[as.dofs().P0(c, f)];
        const double inflow = f == 1 ? 0.3 * 0.7 : 0.0;
        const double rate = (m1[static_cast<std::size_t>(f)] - m0[static_cast<std::size_t>(f)]) / dt;
        EXPECT_NEAR(s, rate - inflow, 1e-12 * std::max(std::abs(rate), 1.0));
    }
}

// A uniform potential carries no flux under either mobility.
TEST(Assembly, UpwindMatchesGalerkinAtRest) {
    Mesh mesh = build_structured_mesh(3, 2, 1.5, 1.0);
    Problem pb = make_problem(std::move(mesh), two_gas());
    pb.density_scale = {300.0, 1.2};
    Problem pu = pb;
    pu.upwind_mobility = true;
    Assembler ag(std::move(pb)), au(std::move(pu));
    const std::array<double, 2> P0 = {45.0, 0.06};
    const Eigen::VectorXd x = ag.initial_state(P0);
    const Eigen::VectorXd rg = ag.raw_residual(x, x, 1.0);
    const Eigen::VectorXd ru = au.raw_residual(x, x, 1.0);
    EXPECT_LT((rg - ru).lpNorm<Eigen::Infinity>(), 1e-9 * std::max(1.0, rg.lpNorm<Eigen::Infinity>()));
}

TEST(Assembly, DeterministicAcrossThreadCounts) {
    Mesh mesh = build_structured_mesh(6, 5, 2.0, 1.0);
    distort_interior(mesh, 0.2, 21);
    Problem pb = make_problem(std::move(mesh), two_gas());
    pb.density_scale = {300.0, 1.2};
    pb.gravity = true;
    Problem pb4 = pb;
    pb4.threads = 4;
    Assembler a1(std::move(pb)), a4(std::move(pb4));
    const std::array<double, 2> P0 = {45.0, 0.06};
    const Eigen::VectorXd x_old = a1.initial_state(P0);
    const Eigen::VectorXd x = x_old + perturbation(a1, 1e-4, 1e-3, 10.0);
    const SparseSystem s1 = a1.assemble_tangent(x, x_old, 1.0);
    const SparseSystem s4 = a4.assemble_tangent(x, x_old, 1.0);
    EXPECT_TRUE((s1.b.array() == s4.b.array()).all());
    ASSERT_EQ(s1.A.nonZeros(), s4.A.nonZeros());
    for (Eigen::Index k = 0; k < s1.A.nonZeros(); ++k) ASSERT_EQ(s1.A.valuePtr()[k], s4.A.valuePtr()[k]);
}

TEST(Assembly, InvertedElementReportsLocation) {
    Problem pb = make_problem(build_structured_mesh(2, 2, 1.0, 1.0), saturated());
    pb.density_scale = {1000.0};
    Assembler as(std::move(pb));
    const std::array<double, 1> P0 = {375.0};
    Eigen::VectorXd x = as.initial_state(P0);
    const int centre = as.dofs().element_lattice(3)[8];
    x[as.dofs().u(centre, 0)] = -5.0;
    try {
        (void)as.raw_residual(x, x, 1.0);
        FAIL() << "expected NonPositiveJacobian";
    } catch (const NonPositiveJacobian& e) {
        EXPECT_NE(std::string(e.what()).find("element 3"), std::string::npos) << e.what();
    }
}

TEST(Assembly, NonPositiveTimeStep) {
    Assembler as(make_problem(build_structured_mesh(1, 1, 1.0, 1.0), elastic_only()));
    const Eigen::VectorXd x = Eigen::VectorXd::Zero(as.n_dofs());
    EXPECT_THROW((void)as.assemble_residual(x, x, 0.0), InvalidTimeStep);
}

TEST(Assembly, ProjectedPotentialSatisfiesPotentialRows) {
    Problem pb = make_problem(build_structured_mesh(3, 2, 1.0, 1.0), two_gas());
    pb.density_scale = {300.0, 1.2};
    pb.gravity = true;
    Assembler as(std::move(pb));
    const std::array<double, 2> P0 = {45.0, 0.06};
    Eigen::VectorXd x = as.initial_state(P0) + perturbation(as, 1e-4, 1e-3, 0.0);
    as.project_potential(x);
    const Eigen::VectorXd r = as.assemble_residual(x, x, 1.0);
    EXPECT_LT(norm_of_rows(r, as.dofs(), DofKind::Potential), 1e-12);
}

namespace {

SparseSystem dense_system(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    SparseSystem s;
    s.A = A.sparseView();
    s.b = b;
    return s;
}

}  // namespace

TEST(SolveLinear, Identity) {
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, -1.0, 3.0);
    EXPECT_LT((solve_linear(dense_system(Eigen::MatrixXd::Identity(5, 5), b)) - b).norm(), 1e-15);
}

TEST(SolveLinear, Diagonal) {
    Eigen::MatrixXd A(2, 2);
    A << 2, 0, 0, 4;
    const Eigen::VectorXd x = solve_linear(dense_system(A, Eigen::Vector2d(2, 8)));
    EXPECT_NEAR(x[0], 1.0, 1e-15);
    EXPECT_NEAR(x[1], 2.0, 1e-15);
}

TEST(SolveLinear, ZeroPivotRow) {
    Eigen::MatrixXd A(3, 3);
    A << 1, 2, 0, 0, 0, 0, 3, 1, 1;
    EXPECT_THROW(solve_linear(dense_system(A, Eigen::Vector3d(1, 1, 1))), SingularMatrix);
}

TEST(SolveLinear, CachedSolverMatchesOneShot) {
    Eigen::MatrixXd A(3, 3);
    A << 4, 1, 0, 1, 3, 1, 0, 1, 2;
    LinearSolver lu;
    for (int k = 0; k < 3; ++k) {
        const Eigen::Vector3d b(1.0 + k, -2.0, 0.5);
        EXPECT_LT((lu.solve(dense_system(A, b)) - solve_linear(dense_system(A, b))).norm(), 1e-14);
    }
}
