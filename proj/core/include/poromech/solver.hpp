#pragma once

// Newton iteration with backtracking, backward-Euler time stepping with
// automatic step bisection, and the discrete free energy.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "poromech/assembly.hpp"
#include "poromech/fields.hpp"

namespace poromech::solver {

struct NewtonConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_iter = 25;
    int max_halvings = 10;
};

/// Throws std::invalid_argument.
void validate(const NewtonConfig& cfg);

struct NewtonStats {
    int iterations = 0;
    int halvings = 0;
    double initial_norm = 0.0;
    double final_norm = 0.0;
};

/// Residual and tangent at x.
using SystemFn = std::function<fem::SparseSystem(const Eigen::VectorXd&)>;
/// Residual only, used by the line search.
using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
/// Solves A δ = b.
using LinearSolveFn = std::function<Eigen::VectorXd(const fem::SparseSystem&)>;

/// Newton's method on R(x) = 0. Converged when ‖R‖ ≤ rel_tol·‖R₀‖ or ‖R‖ ≤ abs_tol.
/// The step is halved while ‖R‖ does not decrease; residual evaluations that
/// throw a material error count as an increase. Throws NewtonDiverged.
Eigen::VectorXd newton_solve(const SystemFn& system, const ResidualFn& residual, Eigen::VectorXd guess,
                             const NewtonConfig& cfg = {}, NewtonStats* stats = nullptr,
                             const LinearSolveFn& linear = {});

struct TimeLoopState {
    double t = 0.0;
    double dt = 0.0;  ///< last accepted step
    int step = 0;
    Eigen::VectorXd x;
    Eigen::VectorXd x_old;
    std::vector<fem::QuadratureState> quadrature;
    std::vector<double> times;   ///< one entry per accepted state, starting with t = 0
    std::vector<double> energy;  ///< total free energy at those times
};

TimeLoopState initial_loop_state(const fem::Assembler& as, std::span<const double> P0);

struct StepStats {
    int substeps = 0;
    int bisections = 0;
    int newton_iterations = 0;
    double final_norm = 0.0;
};

inline constexpr int max_bisections = 8;

/// Advances state by dt with backward Euler. On Newton failure the interval is
/// covered by two half steps, recursively up to max_bisections levels; every
/// accepted substep appends to the energy trace. Throws InvalidTimeStep for
/// dt ≤ 0 and NewtonDiverged once bisection is exhausted.
class TimeIntegrator {
public:
    explicit TimeIntegrator(const fem::Assembler& as, NewtonConfig cfg = {});

    TimeLoopState step(const TimeLoopState& state, double dt, StepStats* stats = nullptr);

    /// When false the per-point material states are not recomputed after each step.
    bool keep_quadrature = true;

    /// Called with every accepted substep, including those of a bisected step.
    std::function<void(const TimeLoopState&)> on_accept;

private:
    TimeLoopState advance(const TimeLoopState& state, double dt, int depth, StepStats& stats);
    TimeLoopState accept(const TimeLoopState& state, Eigen::VectorXd x, double dt) const;

    const fem::Assembler* as_;
    NewtonConfig cfg_;
    fem::LinearSolver lu_;
};

TimeLoopState time_step(const fem::Assembler& as, const TimeLoopState& state, double dt,
                        const NewtonConfig& cfg = {});

/// E = ∫ (W₀ − ψ₀) dV − ∫ t*·u dS − Σ η* M_f, where ψ₀ = ρ₀ g·x is the
/// gravitational energy and M_f the total mass of a fluid held at potential η*
/// on part of the boundary.
double total_energy(const fem::Assembler& as, const Eigen::VectorXd& x);

struct DissipationReport {
    std::vector<double> delta;       ///< Eⁿ⁺¹ − Eⁿ
    std::vector<int> flagged_steps;  ///< n + 1 for every step with Eⁿ⁺¹ > Eⁿ + tol
    double tolerance = 0.0;
    double max_increase = 0.0;
    bool monotone() const { return flagged_steps.empty(); }
};

/// Tolerance is rel·|E⁰|, with E⁰ the first nonzero entry of the trace.
DissipationReport dissipation_monitor(std::span<const double> energy, double rel = 1e-10);

}  // namespace poromech::solver
