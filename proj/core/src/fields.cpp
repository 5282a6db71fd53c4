#include "poromech/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "element_kernel.hpp"
#include "poromech/shape.hpp"

namespace poromech::fem {

namespace {

struct LocalState {
    std::array<double, 18> ue{};
    std::vector<double> pe;
    std::vector<double> he;
};

LocalState gather(const Assembler& as, const Eigen::VectorXd& x, int e) {
    const auto d = as.dofs().element_dofs(as.problem().mesh, e);
    const int nf = as.problem().n_fluids();
    LocalState s;
    for (int i = 0; i < 18; ++i) s.ue[static_cast<std::size_t>(i)] = x[d[static_cast<std::size_t>(i)]];
    s.pe.resize(static_cast<std::size_t>(4 * nf));
    s.he.resize(static_cast<std::size_t>(4 * nf));
    for (int i = 0; i < 4 * nf; ++i) {
        s.pe[static_cast<std::size_t>(i)] = x[d[static_cast<std::size_t>(18 + i)]];
        s.he[static_cast<std::size_t>(i)] = x[d[static_cast<std::size_t>(18 + 4 * nf + i)]];
    }
    return s;
}

QuadratureState material_state(const Problem& pb, const QpGeometry& g, const LocalState& s, int e, int q) {
    const int nf = pb.n_fluids();
    const auto pf = detail::interpolate(g, s.ue.data(), s.pe.data(), nf);
    const auto st = detail::with_context(e, q, [&] {
        kinematics::require_positive_jacobian(pf.J);
        return constitutive::evaluate_point(pb.mixture, pf.J, pf.P0);
    });
    QuadratureState r;
    r.element = e;
    r.point = q;
    r.weight = g.dV;
    r.X = g.X;
    r.F = pf.F;
    r.J = pf.J;
    r.nf = nf;
    r.p = st.p;
    for (int f = 0; f < nf; ++f) {
        r.P0[f] = pf.P0[f];
        r.phi[f] = st.phi[f];
        r.rho[f] = st.rho[f];
        const auto& model = pb.mixture.fluids[static_cast<std::size_t>(f)].model;
        r.pressure[f] = constitutive::is_incompressible(model) ? st.p : constitutive::fluid_pressure(model, st.rho[f]);
    }
    return r;
}

}  // namespace

std::vector<QuadratureState> quadrature_states(const Assembler& as, const Eigen::VectorXd& x) {
    const Problem& pb = as.problem();
    std::vector<QuadratureState> out;
    out.reserve(static_cast<std::size_t>(pb.mesh.n_elements()) * 9);
    for (int e = 0; e < pb.mesh.n_elements(); ++e) {
        const LocalState s = gather(as, x, e);
        const auto& geo = as.geometry()[static_cast<std::size_t>(e)];
        for (int q = 0; q < 9; ++q) out.push_back(material_state(pb, geo.qp[static_cast<std::size_t>(q)], s, e, q));
    }
    return out;
}

double closure_defect(const Problem& pb, const std::vector<QuadratureState>& states) {
    double worst = 0.0;
    std::vector<int> comp;
    for (int f = 0; f < pb.n_fluids(); ++f)
        if (!constitutive::is_incompressible(pb.mixture.fluids[static_cast<std::size_t>(f)].model)) comp.push_back(f);
    for (const auto& s : states)
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (std::size_t j = i + 1; j < comp.size(); ++j) {
                const double a = s.pressure[static_cast<std::size_t>(comp[i])];
                const double b = s.pressure[static_cast<std::size_t>(comp[j])];
                worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
            }
    return worst;
}

Location locate(const Mesh& mesh, const Vec2<double>& X) {
    const double tol = 1e-12 * std::max(mesh.Lx, mesh.Ly);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const auto& c = mesh.elements[static_cast<std::size_t>(e)];
        double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
        for (int b = 0; b < 4; ++b)
            for (int k = 0; k < 2; ++k) {
                lo[k] = std::min(lo[k], mesh.nodes[static_cast<std::size_t>(c[b])][k]);
                hi[k] = std::max(hi[k], mesh.nodes[static_cast<std::size_t>(c[b])][k]);
            }
        if (X[0] < lo[0] - tol || X[0] > hi[0] + tol || X[1] < lo[1] - tol || X[1] > hi[1] + tol) continue;
        double xi = 0.0, eta = 0.0;
        for (int it = 0; it < 30; ++it) {
            const auto s = shape_eval(ShapeFamily::Bilinear, xi, eta);
            double r[2] = {-X[0], -X[1]};
            double G[2][2] = {{0, 0}, {0, 0}};
            for (int b = 0; b < 4; ++b)
                for (int k = 0; k < 2; ++k) {
                    const double Xb = mesh.nodes[static_cast<std::size_t>(c[b])][k];
                    r[k] += s.N[b] * Xb;
                    G[k][0] += s.dN[b][0] * Xb;
                    G[k][1] += s.dN[b][1] * Xb;
                }
            const double d = G[0][0] * G[1][1] - G[0][1] * G[1][0];
            const double dxi = (G[1][1] * r[0] - G[0][1] * r[1]) / d;
            const double deta = (G[0][0] * r[1] - G[1][0] * r[0]) / d;
            xi -= dxi;
            eta -= deta;
            if (std::abs(dxi) + std::abs(deta) < 1e-14) break;
        }
        if (std::abs(xi) <= 1.0 + 1e-10 && std::abs(eta) <= 1.0 + 1e-10)
            return {e, std::clamp(xi, -1.0, 1.0), std::clamp(eta, -1.0, 1.0)};
    }
    throw std::out_of_range("point (" + std::to_string(X[0]) + ", " + std::to_string(X[1]) + ") outside the mesh");
}

PointSample sample_at(const Assembler& as, const Eigen::VectorXd& x, const Location& loc) {
    const Problem& pb = as.problem();
    const QpGeometry g = point_geometry(pb.mesh, loc.element, loc.xi, loc.eta, 1.0);
    const LocalState s = gather(as, x, loc.element);
    const QuadratureState q = material_state(pb, g, s, loc.element, -1);
    PointSample r;
    r.X = g.X;
    r.J = q.J;
    r.nf = q.nf;
    r.p = q.p;
    for (int a = 0; a < 9; ++a)
        for (int i = 0; i < 2; ++i) r.u[i] += g.N2[a] * s.ue[static_cast<std::size_t>(2 * a + i)];
    for (int f = 0; f < q.nf; ++f) {
        r.P0[f] = q.P0[f];
        r.phi[f] = q.phi[f];
        r.rho[f] = q.rho[f];
        for (int b = 0; b < 4; ++b) r.eta[f] += g.N1[b] * s.he[static_cast<std::size_t>(b * q.nf + f)];
    }
    return r;
}

PointSample sample_point(const Assembler& as, const Eigen::VectorXd& x, const Vec2<double>& X) {
    return sample_at(as, x, locate(as.problem().mesh, X));
}

NodalFields nodal_fields(const Assembler& as, const Eigen::VectorXd& x) {
    const Problem& pb = as.problem();
    const int n = pb.mesh.n_nodes();
    const int nf = pb.n_fluids();
    NodalFields out;
    out.displacement.resize(static_cast<std::size_t>(n));
    out.pressure.assign(static_cast<std::size_t>(nf), std::vector<double>(static_cast<std::size_t>(n)));
    out.phi = out.pressure;
    for (int c = 0; c < n; ++c) {
        const auto [e, b] = as.corner_owner(c);
        const auto xi = node_coords(ShapeFamily::Bilinear, b);
        const PointSample s = sample_at(as, x, {e, xi[0], xi[1]});
        out.displacement[static_cast<std::size_t>(c)] = s.u;
        for (int f = 0; f < nf; ++f) {
            const auto& model = pb.mixture.fluids[static_cast<std::size_t>(f)].model;
            out.pressure[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)] =
                constitutive::is_incompressible(model) ? s.p : constitutive::fluid_pressure(model, s.rho[f]);
            out.phi[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)] = s.phi[f];
        }
    }
    return out;
}

double dissipation_rate(const Assembler& as, const Eigen::VectorXd& x) {
    const Problem& pb = as.problem();
    const int nf = pb.n_fluids();
    double total = 0.0;
    for (int e = 0; e < pb.mesh.n_elements(); ++e) {
        const LocalState s = gather(as, x, e);
        const auto& geo = as.geometry()[static_cast<std::size_t>(e)];
        for (int q = 0; q < 9; ++q) {
            const QpGeometry& g = geo.qp[static_cast<std::size_t>(q)];
            const QuadratureState st = material_state(pb, g, s, e, q);
            const Mat2<double> Cinv = inverse(transpose(st.F) * st.F);
            for (int f = 0; f < nf; ++f) {
                Vec2<double> ge;
                for (int b = 0; b < 4; ++b)
                    for (int k = 0; k < 2; ++k) ge[k] += s.he[static_cast<std::size_t>(b * nf + f)] * g.dN1[b][k];
                const double k =
                    constitutive::permeability(pb.mixture.fluids[static_cast<std::size_t>(f)].perm, st.rho[f]);
                const Vec2<double> w = Cinv * ge;
                total += g.dV * st.P0[f] * k * (w[0] * ge[0] + w[1] * ge[1]);
            }
        }
    }
    return total;
}

}  // namespace poromech::fem
