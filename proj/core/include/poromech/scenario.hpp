#pragma once

// Scenario orchestration: turning a config into a discrete problem, the
// built-in presets, the time loop with its outputs and checks, and the
// Terzaghi / Mandel verification runs.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "poromech/config.hpp"
#include "poromech/output.hpp"
#include "poromech/problem.hpp"

namespace poromech::io {

constitutive::FluidModel fluid_model(const FluidConfig& f);

/// True density of a fluid at pressure p (vapor root for VdW below its spinodal pressure).
double density_at_pressure(const FluidConfig& f, double p);

/// Initial true density from P0 or p.
double initial_density(const FluidConfig& f);

/// Chemical potential of a fluid held at pressure p: μ(ρ(p)), or p/ρ̃ for a liquid.
double potential_at_pressure(const FluidConfig& f, double p);

struct BuiltProblem {
    fem::Problem problem;
    std::vector<double> P0;  ///< initial referential density per fluid
};

/// `refine` multiplies the element counts; flux segments keep their physical width.
BuiltProblem build_problem(const ScenarioConfig& config, int refine = 1);

std::vector<std::string> preset_names();
/// Throws std::out_of_range for an unknown name.
const std::string& preset_text(const std::string& name);
ScenarioConfig preset(const std::string& name);

struct StepRecord {
    int step = 0;
    double t = 0.0;
    double dt = 0.0;
    double energy = 0.0;
    double max_p = 0.0;
    double min_phi = 0.0;
    int newton_iterations = 0;
    double closure_defect = 0.0;
    std::vector<double> mass;       ///< per fluid
    std::vector<double> injected;   ///< cumulative prescribed inflow
    std::vector<double> reservoir;  ///< cumulative inflow from held boundaries
    std::vector<double> mass_error; ///< |ΔM − injected − reservoir| see the mass_balance check
};

struct Check {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
    bool informational = false;  ///< reports an observation, never fails the run
};

struct Profile {
    double t = 0.0;
    Series series;
};

struct RunReport {
    std::string scenario;
    std::vector<std::string> fluids;
    std::vector<double> initial_mass;
    std::vector<StepRecord> steps;
    Series probes;
    std::vector<Profile> profiles;
    int newton_iterations = 0;
    int bisections = 0;
    double wall_seconds = 0.0;
    std::vector<Check> checks;
    std::vector<std::string> files;

    bool passed() const;
    const Check* check(const std::string& name) const;
    Series step_series() const;
};

struct RunOptions {
    std::optional<std::string> out_dir;  ///< overrides output.directory
    std::optional<double> dt;            ///< overrides time.dt
    int refine = 1;
    bool write_files = true;
    std::ostream* log = nullptr;
};

/// Solver errors are rethrown as ScenarioError with the scenario name and time.
RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

struct VerifyTime {
    double t_bar = 0.0;
    double l2 = 0.0;
    double tolerance = 0.0;
    bool passed() const { return l2 <= tolerance; }
};

struct VerifyReport {
    std::string name;
    double p_scale = 0.0;
    double t_scale = 0.0;
    std::vector<VerifyTime> times;
    std::vector<Check> checks;
    RunReport run;

    bool passed() const;
};

/// Terzaghi column against the series: L2 ≤ 2% at t̄ = 0.05, 0.1, 0.5 and the
/// undrained response within 1% of p_scale.
VerifyReport verify_terzaghi(int refine = 1, std::ostream* log = nullptr);

/// Mandel strip against the series: L2 ≤ 3% at t̄ = 0.01, 0.1, 0.5, the centre
/// pressure rising above its undrained value and peaking within 20% of the series peak time.
VerifyReport verify_mandel(int refine = 1, std::ostream* log = nullptr);

}  // namespace poromech::io
