// poromech command-line driver.
//
//   poromech run <config> [--out DIR] [--dt X] [--refine N] [--quiet]
//   poromech verify terzaghi|mandel [--refine N]
//   poromech presets list
//   poromech presets show <name>
//
// Exit codes: 0 success, 2 validation failure, 3 solver failure, 4 acceptance failure.

#include <algorithm>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "poromech/errors.hpp"
#include "poromech/scenario.hpp"

namespace {

enum Exit : int { Ok = 0, Invalid = 2, SolverFailure = 3, AcceptanceFailure = 4 };

using namespace poromech;

// A config argument is a file path or the name of a preset.
io::ScenarioConfig load(const std::string& arg) {
    if (std::filesystem::exists(arg)) return io::load_config(arg);
    const auto names = io::preset_names();
    if (std::find(names.begin(), names.end(), arg) != names.end()) return io::preset(arg);
    throw IoError("no config file or preset named '" + arg + "'");
}

void print_checks(const std::vector<io::Check>& checks) {
    for (const auto& c : checks)
        std::cout << fmt::format("  {:<40} {}  value={:.6g} threshold={:.6g}  {}\n", c.name,
                                 c.informational ? "INFO" : (c.passed ? "PASS" : "FAIL"), c.value, c.threshold,
                                 c.detail);
}

int run(const std::string& path, const std::string& out, double dt, int refine, bool quiet) {
    const io::ScenarioConfig cfg = load(path);
    io::RunOptions opt;
    if (!out.empty()) opt.out_dir = out;
    if (dt > 0.0) opt.dt = dt;
    opt.refine = refine;
    if (!quiet) opt.log = &std::cout;
    const auto rep = io::run_scenario(cfg, opt);
    std::cout << fmt::format("scenario {}: {} steps, {} Newton iterations, {} bisections, {:.2f} s\n", rep.scenario,
                             rep.steps.size(), rep.newton_iterations, rep.bisections, rep.wall_seconds);
    print_checks(rep.checks);
    for (const auto& f : rep.files)
        if (f.find(".csv") != std::string::npos) std::cout << "  wrote " << f << "\n";
    return rep.passed() ? Ok : AcceptanceFailure;
}

int verify(const std::string& which, int refine) {
    io::VerifyReport r;
    if (which == "terzaghi")
        r = io::verify_terzaghi(refine, &std::cout);
    else if (which == "mandel")
        r = io::verify_mandel(refine, &std::cout);
    else
        throw ValidationError("verify", "expected terzaghi or mandel, got '" + which + "'");
    std::cout << fmt::format("{}: p_scale={:.6g} Pa, t_scale={:.6g} s, {} steps in {:.2f} s -> {}\n", r.name,
                             r.p_scale, r.t_scale, r.run.steps.size(), r.run.wall_seconds,
                             r.passed() ? "PASS" : "FAIL");
    return r.passed() ? Ok : AcceptanceFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-strain poromechanics with multiple pore fluids"};
    app.require_subcommand(1);

    std::string config, out, which, preset_name;
    double dt = 0.0;
    int refine = 1;
    bool quiet = false;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario from a config file or preset name");
    run_cmd->add_option("config", config, "Config file or preset name")->required();
    run_cmd->add_option("--out", out, "Output directory");
    run_cmd->add_option("--dt", dt, "Largest time step [s]")->check(CLI::PositiveNumber);
    run_cmd->add_option("--refine", refine, "Multiply the element counts by N")->check(CLI::PositiveNumber);
    run_cmd->add_flag("--quiet", quiet, "Do not print per-step lines");

    auto* verify_cmd = app.add_subcommand("verify", "Compare a consolidation run with its series solution");
    verify_cmd->add_option("problem", which, "terzaghi or mandel")->required()->check(CLI::IsMember({"terzaghi", "mandel"}));
    verify_cmd->add_option("--refine", refine, "Multiply the element counts by N")->check(CLI::PositiveNumber);

    auto* presets_cmd = app.add_subcommand("presets", "Built-in scenarios");
    presets_cmd->require_subcommand(1);
    auto* list_cmd = presets_cmd->add_subcommand("list", "List preset names");
    auto* show_cmd = presets_cmd->add_subcommand("show", "Print a preset config");
    show_cmd->add_option("name", preset_name, "Preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? Ok : Invalid;
    }

    try {
        if (*run_cmd) return run(config, out, dt, refine, quiet);
        if (*verify_cmd) return verify(which, refine);
        if (*list_cmd) {
            for (const auto& n : io::preset_names()) std::cout << n << "\n";
            return Ok;
        }
        if (*show_cmd) {
            std::cout << io::preset_text(preset_name);
            return Ok;
        }
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return Invalid;
    } catch (const ValidationError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return Invalid;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return Invalid;
    } catch (const std::out_of_range& e) {
        std::cerr << e.what() << "\n";
        return Invalid;
    } catch (const Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return SolverFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return SolverFailure;
    }
    return Ok;
}
