#include "poromech/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "element_kernel.hpp"
#include "poromech/errors.hpp"
#include "poromech/shape.hpp"

namespace poromech::solver {

void validate(const NewtonConfig& cfg) {
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) throw std::invalid_argument("Newton tolerances must be positive");
    if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (cfg.max_halvings < 0) throw std::invalid_argument("max_halvings must be >= 0");
}

namespace {

// Residual norm, or +inf if the trial state is inadmissible.
double trial_norm(const ResidualFn& residual, const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    try {
        r = residual(x);
    } catch (const NonPositiveJacobian&) {
        return INFINITY;
    } catch (const DegeneratePhase&) {
        return INFINITY;
    } catch (const OutOfRangeDensity&) {
        return INFINITY;
    } catch (const ClosureNoConvergence&) {
        return INFINITY;
    }
    const double n = r.norm();
    return std::isfinite(n) ? n : INFINITY;
}

}  // namespace

Eigen::VectorXd newton_solve(const SystemFn& system, const ResidualFn& residual, Eigen::VectorXd x,
                             const NewtonConfig& cfg, NewtonStats* stats, const LinearSolveFn& linear) {
    validate(cfg);
    NewtonStats local;
    NewtonStats& st = stats ? *stats : local;
    st = {};
    fem::SparseSystem sys = system(x);
    double norm = sys.b.norm();
    if (!std::isfinite(norm)) throw NewtonDiverged("non-finite initial residual", norm);
    st.initial_norm = norm;
    st.final_norm = norm;
    const double target = std::max(cfg.rel_tol * norm, cfg.abs_tol);
    if (norm <= target) return x;
    Eigen::VectorXd r;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const Eigen::VectorXd dx = linear ? linear(sys) : fem::solve_linear(sys);
        double alpha = 1.0;
        double trial = trial_norm(residual, x - dx, r);
        int halvings = 0;
        while (!(trial < norm) && halvings < cfg.max_halvings) {
            alpha *= 0.5;
            ++halvings;
            trial = trial_norm(residual, x - alpha * dx, r);
        }
        st.halvings += halvings;
        if (!(trial < norm))
            throw NewtonDiverged("line search failed to reduce the residual after " + std::to_string(halvings) +
                                     " halvings (|R| = " + std::to_string(norm) + ")",
                                 norm);
        x -= alpha * dx;
        norm = trial;
        st.iterations = it;
        st.final_norm = norm;
        if (norm <= target) return x;
        sys = system(x);
    }
    throw NewtonDiverged("no convergence in " + std::to_string(cfg.max_iter) + " iterations (|R| = " +
                             std::to_string(norm) + ", target " + std::to_string(target) + ")",
                         norm);
}

TimeLoopState initial_loop_state(const fem::Assembler& as, std::span<const double> P0) {
    TimeLoopState s;
    s.x = as.initial_state(P0);
    s.x_old = s.x;
    s.quadrature = fem::quadrature_states(as, s.x);
    s.times.push_back(0.0);
    s.energy.push_back(total_energy(as, s.x));
    return s;
}

TimeIntegrator::TimeIntegrator(const fem::Assembler& as, NewtonConfig cfg) : as_(&as), cfg_(cfg) { validate(cfg_); }

TimeLoopState TimeIntegrator::accept(const TimeLoopState& state, Eigen::VectorXd x, double dt) const {
    TimeLoopState next;
    next.t = state.t + dt;
    next.dt = dt;
    next.step = state.step + 1;
    next.x_old = state.x;
    next.x = std::move(x);
    if (keep_quadrature) next.quadrature = fem::quadrature_states(*as_, next.x);
    next.times = state.times;
    next.energy = state.energy;
    next.times.push_back(next.t);
    next.energy.push_back(total_energy(*as_, next.x));
    return next;
}

TimeLoopState TimeIntegrator::advance(const TimeLoopState& state, double dt, int depth, StepStats& stats) {
    const Eigen::VectorXd& x_old = state.x;
    try {
        NewtonStats ns;
        Eigen::VectorXd x = newton_solve(
            [&](const Eigen::VectorXd& y) { return as_->assemble_tangent(y, x_old, dt); },
            [&](const Eigen::VectorXd& y) { return as_->assemble_residual(y, x_old, dt); }, state.x, cfg_, &ns,
            [&](const fem::SparseSystem& s) { return lu_.solve(s); });
        stats.newton_iterations += ns.iterations;
        stats.final_norm = ns.final_norm;
        ++stats.substeps;
        TimeLoopState next = accept(state, std::move(x), dt);
        if (on_accept) on_accept(next);
        return next;
    } catch (const Error& e) {
        const bool recoverable = dynamic_cast<const NewtonDiverged*>(&e) || dynamic_cast<const SingularMatrix*>(&e) ||
                                 dynamic_cast<const NonPositiveJacobian*>(&e) ||
                                 dynamic_cast<const DegeneratePhase*>(&e) ||
                                 dynamic_cast<const OutOfRangeDensity*>(&e) ||
                                 dynamic_cast<const ClosureNoConvergence*>(&e);
        if (!recoverable) throw;
        if (depth >= max_bisections) {
            const auto* nd = dynamic_cast<const NewtonDiverged*>(&e);
            throw NewtonDiverged("step at t=" + std::to_string(state.t) + " failed after " +
                                     std::to_string(max_bisections) + " bisections (dt=" + std::to_string(dt) +
                                     "): " + e.what(),
                                 nd ? nd->residual_norm : NAN);
        }
    }
    ++stats.bisections;
    const TimeLoopState half = advance(state, 0.5 * dt, depth + 1, stats);
    return advance(half, 0.5 * dt, depth + 1, stats);
}

TimeLoopState TimeIntegrator::step(const TimeLoopState& state, double dt, StepStats* stats) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidTimeStep("time step must be positive, got " + std::to_string(dt));
    StepStats local;
    StepStats& st = stats ? *stats : local;
    st = {};
    return advance(state, dt, 0, st);
}

TimeLoopState time_step(const fem::Assembler& as, const TimeLoopState& state, double dt, const NewtonConfig& cfg) {
    TimeIntegrator ti(as, cfg);
    return ti.step(state, dt);
}

double total_energy(const fem::Assembler& as, const Eigen::VectorXd& x) {
    using namespace constitutive;
    const fem::Problem& pb = as.problem();
    const fem::DofMap& dm = as.dofs();
    const int nf = pb.n_fluids();
    const Vec2<double> gvec = pb.gravity_vector();
    double E = 0.0;
    for (int e = 0; e < pb.mesh.n_elements(); ++e) {
        const auto d = dm.element_dofs(pb.mesh, e);
        std::array<double, 18> ue{};
        std::vector<double> pe(static_cast<std::size_t>(4 * nf));
        for (int i = 0; i < 18; ++i) ue[static_cast<std::size_t>(i)] = x[d[static_cast<std::size_t>(i)]];
        for (int i = 0; i < 4 * nf; ++i) pe[static_cast<std::size_t>(i)] = x[d[static_cast<std::size_t>(18 + i)]];
        const auto& geo = as.geometry()[static_cast<std::size_t>(e)];
        for (int q = 0; q < 9; ++q) {
            const fem::QpGeometry& g = geo.qp[static_cast<std::size_t>(q)];
            const auto pf = fem::detail::interpolate(g, ue.data(), pe.data(), nf);
            const auto st = fem::detail::with_context(e, q, [&] {
                kinematics::require_positive_jacobian(pf.J);
                return evaluate_point(pb.mixture, pf.J, pf.P0);
            });
            double rho0 = pb.mixture.phi0s * pb.solid_density;
            for (int f = 0; f < nf; ++f) rho0 += pf.P0[f];
            const double gx = gvec[0] * (g.X[0] + pf.u[0]) + gvec[1] * (g.X[1] + pf.u[1]);
            E += g.dV * (total_energy_density(pf.F, pb.mixture, st) - rho0 * gx);
        }
    }
    const Eigen::VectorXd& fext = as.external_load();
    for (int l = 0; l < dm.n_lattice; ++l)
        for (int i = 0; i < 2; ++i) E -= fext[dm.u(l, i)] * x[dm.u(l, i)];
    if (!pb.potential.empty()) {
        const auto mass = as.fluid_mass(x);
        std::vector<bool> seen(static_cast<std::size_t>(nf), false);
        for (const auto& bc : pb.potential) {
            if (seen[static_cast<std::size_t>(bc.fluid)]) continue;
            seen[static_cast<std::size_t>(bc.fluid)] = true;
            E -= bc.eta * mass[static_cast<std::size_t>(bc.fluid)];
        }
    }
    return E;
}

DissipationReport dissipation_monitor(std::span<const double> energy, double rel) {
    DissipationReport r;
    double E0 = 0.0;
    for (double e : energy)
        if (e != 0.0) {
            E0 = e;
            break;
        }
    r.tolerance = rel * std::abs(E0);
    for (std::size_t n = 1; n < energy.size(); ++n) {
        const double d = energy[n] - energy[n - 1];
        r.delta.push_back(d);
        r.max_increase = std::max(r.max_increase, d);
        if (d > r.tolerance) r.flagged_steps.push_back(static_cast<int>(n));
    }
    return r;
}

}  // namespace poromech::solver
