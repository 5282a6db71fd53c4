#include "poromech/assembly.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

#include <Eigen/SparseLU>

#include "element_kernel.hpp"
#include "poromech/dual.hpp"
#include "poromech/shape.hpp"

namespace poromech::fem {

void validate(const Problem& pb) {
    const int nf = pb.n_fluids();
    auto check_tag = [&](const std::string& tag) { (void)pb.mesh.edges(tag); };
    auto check_fluid = [&](int f, const char* what) {
        if (f < 0 || f >= nf)
            throw std::invalid_argument(std::string(what) + ": fluid index " + std::to_string(f) + " out of range");
    };
    for (const auto& bc : pb.displacement) {
        check_tag(bc.tag);
        if (bc.component < 0 || bc.component > 1) throw std::invalid_argument("displacement component must be 0 or 1");
    }
    for (const auto& bc : pb.traction) check_tag(bc.tag);
    for (const auto& bc : pb.potential) {
        check_tag(bc.tag);
        check_fluid(bc.fluid, "potential bc");
    }
    for (const auto& bc : pb.density) {
        check_tag(bc.tag);
        check_fluid(bc.fluid, "density bc");
    }
    for (const auto& bc : pb.mass_flux) {
        check_tag(bc.tag);
        check_fluid(bc.fluid, "mass flux bc");
    }
    for (const auto& t : pb.ties) {
        check_tag(t.tag);
        if (t.component < 0 || t.component > 1) throw std::invalid_argument("tie component must be 0 or 1");
    }
    if (!(pb.stress_scale > 0.0) || !(pb.pressure_scale > 0.0))
        throw std::invalid_argument("row scales must be positive");
    if (static_cast<int>(pb.density_scale.size()) != nf)
        throw std::invalid_argument("density_scale needs one entry per fluid");
    for (double r : pb.density_scale)
        if (!(r > 0.0)) throw std::invalid_argument("density_scale entries must be positive");
    if (nf > static_cast<int>(constitutive::max_fluids))
        throw std::invalid_argument("at most " + std::to_string(constitutive::max_fluids) + " fluids are supported");
    if (pb.threads < 1) throw std::invalid_argument("threads must be >= 1");
}

QpGeometry point_geometry(const Mesh& mesh, int e, double xi, double eta, double weight) {
    const auto& c = mesh.elements[static_cast<std::size_t>(e)];
    const auto s1 = shape_eval(ShapeFamily::Bilinear, xi, eta);
    const auto s2 = shape_eval(ShapeFamily::Biquadratic, xi, eta);
    Mat2<double> G;  // G(k, i) = ∂X_k/∂ξ_i
    QpGeometry g;
    for (int b = 0; b < 4; ++b) {
        const auto& X = mesh.nodes[static_cast<std::size_t>(c[b])];
        for (int k = 0; k < 2; ++k) {
            g.X[k] += s1.N[b] * X[k];
            G(k, 0) += s1.dN[b][0] * X[k];
            G(k, 1) += s1.dN[b][1] * X[k];
        }
    }
    const double detG = det(G);
    if (!(detG > 0.0)) throw NonPositiveJacobian(detG, "geometry of element " + std::to_string(e));
    const Mat2<double> GinvT = transpose(inverse(G));
    g.dV = weight * detG;
    for (int a = 0; a < 9; ++a) {
        g.N2[a] = s2.N[a];
        g.dN2[a] = GinvT * Vec2<double>{{s2.dN[a][0], s2.dN[a][1]}};
    }
    for (int b = 0; b < 4; ++b) {
        g.N1[b] = s1.N[b];
        g.dN1[b] = GinvT * Vec2<double>{{s1.dN[b][0], s1.dN[b][1]}};
    }
    return g;
}

ElementGeometry element_geometry(const Mesh& mesh, int e) {
    ElementGeometry geo;
    const auto rule = gauss_rule_2d(3);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        geo.qp[q] = point_geometry(mesh, e, rule[q].xi, rule[q].eta, rule[q].w);
        for (int b = 0; b < 4; ++b) geo.lumped[b] += geo.qp[q].dV * geo.qp[q].N1[b];
    }
    return geo;
}

namespace {

// Parameter of the point on segment [A, B] where the coordinate `axis` equals v.
double crossing(const Vec2<double>& A, const Vec2<double>& B, int axis, double v) {
    return (v - A[axis]) / (B[axis] - A[axis]);
}

}  // namespace

Eigen::VectorXd apply_neumann(const Problem& pb, const DofMap& dofs, Eigen::VectorXd rhs) {
    const Mesh& mesh = pb.mesh;
    const auto g3 = gauss_rule_1d(3);
    const auto g2 = gauss_rule_1d(2);
    for (const auto& bc : pb.traction) {
        for (const auto& edge : mesh.edges(bc.tag)) {
            const auto& A = mesh.nodes[static_cast<std::size_t>(edge.nodes[0])];
            const auto& B = mesh.nodes[static_cast<std::size_t>(edge.nodes[1])];
            const double len = std::hypot(B[0] - A[0], B[1] - A[1]);
            const auto lat = dofs.element_lattice(edge.element);
            const auto loc = side_lattice_local(edge.side);
            for (const auto& gp : g3) {
                const double s = gp[0];
                const std::array<double, 3> L = {0.5 * s * (s - 1.0), 1.0 - s * s, 0.5 * s * (s + 1.0)};
                for (int k = 0; k < 3; ++k) {
                    const int l = lat[static_cast<std::size_t>(loc[k])];
                    for (int i = 0; i < 2; ++i) rhs[dofs.u(l, i)] += bc.traction[i] * L[k] * gp[1] * 0.5 * len;
                }
            }
        }
    }
    for (const auto& bc : pb.mass_flux) {
        for (const auto& edge : mesh.edges(bc.tag)) {
            const auto& A = mesh.nodes[static_cast<std::size_t>(edge.nodes[0])];
            const auto& B = mesh.nodes[static_cast<std::size_t>(edge.nodes[1])];
            const double len = std::hypot(B[0] - A[0], B[1] - A[1]);
            double t0 = 0.0, t1 = 1.0;
            if (bc.width > 0.0) {
                const int axis = std::abs(B[0] - A[0]) >= std::abs(B[1] - A[1]) ? 0 : 1;
                const double lo = bc.center - 0.5 * bc.width;
                const double hi = bc.center + 0.5 * bc.width;
                double ta = crossing(A, B, axis, lo);
                double tb = crossing(A, B, axis, hi);
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(0.0, ta);
                t1 = std::min(1.0, tb);
                if (!(t1 > t0)) continue;
            }
            for (const auto& gp : g2) {
                const double t = t0 + (t1 - t0) * 0.5 * (gp[0] + 1.0);
                const double w = gp[1] * 0.5 * (t1 - t0) * len;
                rhs[dofs.P0(edge.nodes[0], bc.fluid)] += bc.flux * (1.0 - t) * w;
                rhs[dofs.P0(edge.nodes[1], bc.fluid)] += bc.flux * t * w;
            }
        }
    }
    return rhs;
}

Assembler::Assembler(Problem problem) : problem_(std::move(problem)) {
    validate(problem_);
    constitutive::validate(problem_.mixture);
    check_mesh(problem_.mesh);
    const Mesh& mesh = problem_.mesh;
    const int nf = problem_.n_fluids();
    dofs_ = build_dofmap(mesh, nf, problem_.ties);

    const int ne = mesh.n_elements();
    geometry_.resize(static_cast<std::size_t>(ne));
    element_dofs_.resize(static_cast<std::size_t>(ne));
    lumped_.assign(static_cast<std::size_t>(mesh.n_nodes()), 0.0);
    owner_.assign(static_cast<std::size_t>(mesh.n_nodes()), {-1, -1});
    for (int e = 0; e < ne; ++e) {
        geometry_[static_cast<std::size_t>(e)] = element_geometry(mesh, e);
        element_dofs_[static_cast<std::size_t>(e)] = dofs_.element_dofs(mesh, e);
        const auto& c = mesh.elements[static_cast<std::size_t>(e)];
        for (int b = 0; b < 4; ++b) {
            lumped_[static_cast<std::size_t>(c[b])] += geometry_[static_cast<std::size_t>(e)].lumped[b];
            if (owner_[static_cast<std::size_t>(c[b])].first < 0) owner_[static_cast<std::size_t>(c[b])] = {e, b};
        }
    }

    // Later conditions override earlier ones on shared rows.
    std::map<int, Constraint> rows;
    for (const auto& bc : problem_.displacement)
        for (int l : lattice_nodes_on(mesh, dofs_, bc.tag)) {
            const int d = dofs_.u(l, bc.component);
            rows[d] = {d, d, bc.value};
        }
    for (const auto& bc : problem_.density)
        for (int c : corner_nodes_on(mesh, bc.tag)) {
            const int d = dofs_.P0(c, bc.fluid);
            rows[d] = {d, d, bc.P0};
        }
    for (const auto& bc : problem_.potential)
        for (int c : corner_nodes_on(mesh, bc.tag)) {
            const int d = dofs_.P0(c, bc.fluid);
            rows[d] = {d, dofs_.eta(c, bc.fluid), bc.eta};
        }
    reservoir_rows_.assign(static_cast<std::size_t>(nf), {});
    for (const auto& [row, con] : rows) {
        constraints_.push_back(con);
        if (dofs_.kind[static_cast<std::size_t>(row)] == DofKind::Density)
            reservoir_rows_[static_cast<std::size_t>(dofs_.fluid[static_cast<std::size_t>(row)])].push_back(row);
    }

    external_ = apply_neumann(problem_, dofs_, Eigen::VectorXd::Zero(dofs_.n_dofs));

    std::vector<Eigen::Triplet<double>> trips;
    const int nloc = dofs_.n_element_dofs();
    trips.reserve(static_cast<std::size_t>(ne) * static_cast<std::size_t>(nloc * nloc) + constraints_.size());
    for (const auto& d : element_dofs_)
        for (int r : d)
            for (int c : d) trips.emplace_back(r, c, 0.0);
    for (const auto& con : constraints_) trips.emplace_back(con.row, con.col, 0.0);
    pattern_.resize(dofs_.n_dofs, dofs_.n_dofs);
    pattern_.setFromTriplets(trips.begin(), trips.end());
    pattern_.makeCompressed();
    positions_.resize(static_cast<std::size_t>(ne));
    const int* outer = pattern_.outerIndexPtr();
    const int* inner = pattern_.innerIndexPtr();
    for (int e = 0; e < ne; ++e) {
        const auto& d = element_dofs_[static_cast<std::size_t>(e)];
        auto& pos = positions_[static_cast<std::size_t>(e)];
        pos.resize(static_cast<std::size_t>(nloc * nloc));
        for (int i = 0; i < nloc; ++i) {
            const int* begin = inner + outer[d[static_cast<std::size_t>(i)]];
            const int* end = inner + outer[d[static_cast<std::size_t>(i)] + 1];
            for (int j = 0; j < nloc; ++j)
                pos[static_cast<std::size_t>(i * nloc + j)] =
                    static_cast<int>(std::lower_bound(begin, end, d[static_cast<std::size_t>(j)]) - inner);
        }
    }
}

namespace {

template <int NF>
void element_pass(const Problem& pb, const ElementGeometry& geo, int e, const double* xl, const double* P0_old,
                  double inv_dt, bool tangent, double* res, double* mat) {
    constexpr int n = 18 + 8 * NF;
    if (!tangent) {
        detail::element_residual<NF, double>(pb, geo, e, xl, P0_old, inv_dt, res);
        return;
    }
    using D = Dual<double, n>;
    std::array<D, n> xd;
    for (int i = 0; i < n; ++i) xd[i] = D::variable(xl[i], i);
    std::array<D, n> rd;
    detail::element_residual<NF, D>(pb, geo, e, xd.data(), P0_old, inv_dt, rd.data());
    for (int i = 0; i < n; ++i) {
        res[i] = rd[i].v;
        for (int j = 0; j < n; ++j) mat[i * n + j] = rd[i].d[j];
    }
}

using PassFn = void (*)(const Problem&, const ElementGeometry&, int, const double*, const double*, double, bool,
                        double*, double*);

PassFn pass_for(int nf) {
    switch (nf) {
        case 0: return element_pass<0>;
        case 1: return element_pass<1>;
        case 2: return element_pass<2>;
        case 3: return element_pass<3>;
        case 4: return element_pass<4>;
        default: throw std::invalid_argument("unsupported number of fluids");
    }
}

}  // namespace

void Assembler::run_elements(const Eigen::VectorXd& x, const Eigen::VectorXd& x_old, double dt, bool tangent,
                             std::vector<double>& res, std::vector<double>& mat) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidTimeStep("time step must be positive and finite");
    const int ne = problem_.mesh.n_elements();
    const int nf = problem_.n_fluids();
    const int nloc = dofs_.n_element_dofs();
    const double inv_dt = 1.0 / dt;
    const PassFn pass = pass_for(nf);
    res.assign(static_cast<std::size_t>(ne) * static_cast<std::size_t>(nloc), 0.0);
    if (tangent) mat.assign(static_cast<std::size_t>(ne) * static_cast<std::size_t>(nloc * nloc), 0.0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(ne));

    auto work = [&](int first, int stride) {
        std::vector<double> xl(static_cast<std::size_t>(nloc));
        std::vector<double> old(static_cast<std::size_t>(4 * nf));
        for (int e = first; e < ne; e += stride) {
            const auto& d = element_dofs_[static_cast<std::size_t>(e)];
            for (int i = 0; i < nloc; ++i) xl[static_cast<std::size_t>(i)] = x[d[static_cast<std::size_t>(i)]];
            for (int i = 0; i < 4 * nf; ++i) old[static_cast<std::size_t>(i)] = x_old[d[static_cast<std::size_t>(18 + i)]];
            try {
                pass(problem_, geometry_[static_cast<std::size_t>(e)], e, xl.data(), old.data(), inv_dt, tangent,
                     res.data() + static_cast<std::size_t>(e) * static_cast<std::size_t>(nloc),
                     tangent ? mat.data() + static_cast<std::size_t>(e) * static_cast<std::size_t>(nloc * nloc)
                             : nullptr);
            } catch (...) {
                errors[static_cast<std::size_t>(e)] = std::current_exception();
            }
        }
    };
    const int nt = std::min(problem_.threads, std::max(1, ne));
    if (nt == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(work, t, nt);
        for (auto& th : pool) th.join();
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

Eigen::VectorXd Assembler::scatter_residual(const std::vector<double>& res) const {
    const int nloc = dofs_.n_element_dofs();
    Eigen::VectorXd r = Eigen::VectorXd::Zero(dofs_.n_dofs);
    for (std::size_t e = 0; e < element_dofs_.size(); ++e) {
        const auto& d = element_dofs_[e];
        for (int i = 0; i < nloc; ++i)
            r[d[static_cast<std::size_t>(i)]] += res[e * static_cast<std::size_t>(nloc) + static_cast<std::size_t>(i)];
    }
    return r - external_;
}

Eigen::VectorXd Assembler::row_scales(double dt) const {
    Eigen::VectorXd s(dofs_.n_dofs);
    for (int d = 0; d < dofs_.n_dofs; ++d) {
        const int f = dofs_.fluid[static_cast<std::size_t>(d)];
        switch (dofs_.kind[static_cast<std::size_t>(d)]) {
            case DofKind::Displacement: s[d] = 1.0 / problem_.stress_scale; break;
            case DofKind::Density: s[d] = dt / problem_.density_scale[static_cast<std::size_t>(f)]; break;
            case DofKind::Potential:
                s[d] = problem_.density_scale[static_cast<std::size_t>(f)] / problem_.pressure_scale;
                break;
        }
    }
    return s;
}

Eigen::VectorXd Assembler::raw_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& x_old, double dt) const {
    std::vector<double> res, mat;
    run_elements(x, x_old, dt, false, res, mat);
    return scatter_residual(res);
}

Eigen::VectorXd Assembler::assemble_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& x_old,
                                             double dt) const {
    Eigen::VectorXd r = raw_residual(x, x_old, dt).cwiseProduct(row_scales(dt));
    for (const auto& c : constraints_) r[c.row] = x[c.col] - c.value;
    return r;
}

SparseSystem Assembler::assemble_tangent(const Eigen::VectorXd& x, const Eigen::VectorXd& x_old, double dt) const {
    std::vector<double> res, mat;
    run_elements(x, x_old, dt, true, res, mat);
    const Eigen::VectorXd scale = row_scales(dt);
    SparseSystem sys;
    sys.A = pattern_;
    double* val = sys.A.valuePtr();
    std::fill(val, val + sys.A.nonZeros(), 0.0);
    const int nloc = dofs_.n_element_dofs();
    for (std::size_t e = 0; e < element_dofs_.size(); ++e) {
        const auto& pos = positions_[e];
        const double* m = mat.data() + e * static_cast<std::size_t>(nloc * nloc);
        for (std::size_t k = 0; k < pos.size(); ++k) val[pos[k]] += m[k];
    }
    const int* outer = sys.A.outerIndexPtr();
    for (int r = 0; r < dofs_.n_dofs; ++r)
        for (int k = outer[r]; k < outer[r + 1]; ++k) val[k] *= scale[r];
    sys.b = scatter_residual(res).cwiseProduct(scale);
    const int* inner = sys.A.innerIndexPtr();
    for (const auto& c : constraints_) {
        for (int k = outer[c.row]; k < outer[c.row + 1]; ++k) val[k] = inner[k] == c.col ? 1.0 : 0.0;
        sys.b[c.row] = x[c.col] - c.value;
    }
    return sys;
}

void Assembler::project_potential(Eigen::VectorXd& x) const {
    const int nf = problem_.n_fluids();
    if (nf == 0) return;
    Eigen::VectorXd y = x;
    for (int c = 0; c < dofs_.n_corner; ++c)
        for (int f = 0; f < nf; ++f) y[dofs_.eta(c, f)] = 0.0;
    // η rows do not depend on dt or P₀ⁿ; any positive dt will do.
    const Eigen::VectorXd r = raw_residual(y, y, 1.0) + external_;
    for (int c = 0; c < dofs_.n_corner; ++c)
        for (int f = 0; f < nf; ++f) x[dofs_.eta(c, f)] = -r[dofs_.eta(c, f)] / lumped_[static_cast<std::size_t>(c)];
}

void Assembler::apply_constraint_values(Eigen::VectorXd& x) const {
    for (const auto& c : constraints_) x[c.col] = c.value;
}

Eigen::VectorXd Assembler::initial_state(std::span<const double> P0) const {
    const int nf = problem_.n_fluids();
    if (static_cast<int>(P0.size()) != nf) throw std::invalid_argument("initial_state needs one density per fluid");
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dofs_.n_dofs);
    for (int c = 0; c < dofs_.n_corner; ++c)
        for (int f = 0; f < nf; ++f) x[dofs_.P0(c, f)] = P0[static_cast<std::size_t>(f)];
    for (const auto& con : constraints_)
        if (dofs_.kind[static_cast<std::size_t>(con.col)] != DofKind::Potential) x[con.col] = con.value;
    project_potential(x);
    apply_constraint_values(x);
    return x;
}

std::vector<double> Assembler::fluid_mass(const Eigen::VectorXd& x) const {
    const int nf = problem_.n_fluids();
    std::vector<double> m(static_cast<std::size_t>(nf), 0.0);
    for (int c = 0; c < dofs_.n_corner; ++c)
        for (int f = 0; f < nf; ++f) m[static_cast<std::size_t>(f)] += lumped_[static_cast<std::size_t>(c)] * x[dofs_.P0(c, f)];
    return m;
}

namespace {

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Lu = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;

// R A C with row and column max-norm equilibration.
struct Equilibrated {
    Eigen::SparseMatrix<double> S;
    Eigen::VectorXd r;
    Eigen::VectorXd c;
};

Equilibrated equilibrate(const RowMatrix& A) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw SingularMatrix("matrix is not square");
    Equilibrated e;
    e.r = Eigen::VectorXd::Zero(n);
    e.c = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (RowMatrix::InnerIterator it(A, i); it; ++it) e.r[i] = std::max(e.r[i], std::abs(it.value()));
        if (!(e.r[i] > 0.0) || !std::isfinite(e.r[i]))
            throw SingularMatrix("row " + std::to_string(i) + " is zero or not finite");
        e.r[i] = 1.0 / e.r[i];
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (RowMatrix::InnerIterator it(A, i); it; ++it)
            e.c[it.col()] = std::max(e.c[it.col()], std::abs(e.r[i] * it.value()));
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!(e.c[j] > 0.0)) throw SingularMatrix("column " + std::to_string(j) + " is zero");
        e.c[j] = 1.0 / e.c[j];
    }
    e.S = (e.r.asDiagonal() * A * e.c.asDiagonal()).eval();
    e.S.makeCompressed();
    return e;
}

// b − A x accumulated in extended precision, and the componentwise
// backward error max_i |r_i| / (|A||x| + |b|)_i.
struct Residual {
    Eigen::VectorXd r;
    double backward = 0.0;
};

Residual residual(const RowMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    Residual out;
    out.r.resize(b.size());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        long double s = b[i];
        long double mag = std::abs(b[i]);
        for (RowMatrix::InnerIterator it(A, i); it; ++it) {
            const long double t = static_cast<long double>(it.value()) * static_cast<long double>(x[it.col()]);
            s -= t;
            mag += std::fabs(t);
        }
        out.r[i] = static_cast<double>(s);
        if (mag > 0.0L) out.backward = std::max(out.backward, static_cast<double>(std::fabs(s) / mag));
    }
    return out;
}

inline constexpr double max_relative_residual = 1e-10;
// Rounding-level componentwise backward error: x solves a system perturbed by
// this relative amount entry by entry.
inline constexpr double max_backward_error = 1e-13;

Eigen::VectorXd lu_solve(Lu& lu, const Equilibrated& eq, const SparseSystem& sys) {
    lu.factorize(eq.S);
    if (lu.info() != Eigen::Success) throw SingularMatrix("sparse LU factorization failed: " + lu.lastErrorMessage());
    auto apply = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
        Eigen::VectorXd y = lu.solve(eq.r.cwiseProduct(rhs));
        if (lu.info() != Eigen::Success || !y.allFinite()) throw SingularMatrix("sparse LU solve failed");
        return eq.c.cwiseProduct(y);
    };
    Eigen::VectorXd x = apply(sys.b);
    const double nb = sys.b.norm();
    auto rel_of = [&](const Residual& r) { return nb > 0.0 ? r.r.norm() / nb : r.r.norm(); };
    auto ok = [&](const Residual& r) { return rel_of(r) < max_relative_residual || r.backward < max_backward_error; };
    Residual r = residual(sys.A, x, sys.b);
    for (int k = 0; k < 3 && !ok(r); ++k) {
        x += apply(r.r);
        r = residual(sys.A, x, sys.b);
    }
    if (!ok(r))
        throw SingularMatrix("linear solve residual " + fmt_sci(rel_of(r)) + " (backward error " +
                             fmt_sci(r.backward) + "), matrix near singular");
    return x;
}

}  // namespace

Eigen::VectorXd solve_linear(const SparseSystem& system) {
    const Equilibrated eq = equilibrate(system.A);
    Lu lu;
    lu.analyzePattern(eq.S);
    return lu_solve(lu, eq, system);
}

struct LinearSolver::Impl {
    Lu lu;
    Eigen::Index nnz = -1;
    Eigen::Index n = -1;
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

Eigen::VectorXd LinearSolver::solve(const SparseSystem& system) {
    const Equilibrated eq = equilibrate(system.A);
    if (eq.S.nonZeros() != impl_->nnz || eq.S.rows() != impl_->n) {
        impl_->lu.analyzePattern(eq.S);
        impl_->nnz = eq.S.nonZeros();
        impl_->n = eq.S.rows();
    }
    return lu_solve(impl_->lu, eq, system);
}

}  // namespace poromech::fem
