#include "poromech/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "poromech/closure.hpp"
#include "poromech/errors.hpp"
#include "poromech/fields.hpp"
#include "poromech/solver.hpp"

namespace poromech::io {

namespace cst = constitutive;

constitutive::FluidModel fluid_model(const FluidConfig& f) {
    if (f.model == "ideal_gas") return cst::IdealGasParams{f.R, f.T, f.xi, f.molar_mass};
    if (f.model == "vdw") return cst::VdWParams{f.a, f.b, f.c, f.R, f.T, f.molar_mass};
    if (f.model == "incompressible_liquid") return cst::IncompressibleLiquidParams{f.rho_tilde};
    if (f.model == "constant_bulk") return cst::ConstantBulkFluidParams{f.K_f, f.rho_ref};
    throw ValidationError("fluid." + f.name + ".model", "unknown fluid model '" + f.model + "'");
}

double density_at_pressure(const FluidConfig& f, double p) {
    if (f.model == "incompressible_liquid") return f.rho_tilde;
    if (f.model == "constant_bulk") return f.rho_ref * std::exp(p / f.K_f);
    return cst::detail::density_at_pressure(fluid_model(f), p, 0.0);
}

double initial_density(const FluidConfig& f) {
    if (f.P0) return *f.P0 / f.phi0;
    return density_at_pressure(f, *f.p);
}

double potential_at_pressure(const FluidConfig& f, double p) {
    if (f.model == "incompressible_liquid") return p / f.rho_tilde;
    return cst::evaluate_fluid(fluid_model(f), density_at_pressure(f, p)).mu;
}

BuiltProblem build_problem(const ScenarioConfig& c, int refine) {
    validate(c);
    if (refine < 1) throw ValidationError("refine", "must be at least 1");
    BuiltProblem out;
    fem::Problem& pb = out.problem;
    const auto& g = c.geometry;
    pb.mesh = fem::build_structured_mesh(g.nx * refine, g.ny * refine, g.Lx, g.Ly);

    auto& mix = pb.mixture;
    if (c.solid.model == "neo_hookean")
        mix.solid = cst::NeoHookeanParams{c.solid.lambda, c.solid.mu};
    else
        mix.solid = cst::LinearElasticParams{c.solid.lambda, c.solid.mu};
    mix.phi0s = c.solid.phi0;
    using kinematics::VolumeFractionKind;
    mix.vf_kind = c.mixture.volume_fraction == "incompressible_solid" ? VolumeFractionKind::IncompressibleSolid
                  : c.mixture.volume_fraction == "unsaturated"        ? VolumeFractionKind::UnsaturatedMixed
                                                                      : VolumeFractionKind::AffineSolid;
    for (const auto& f : c.fluids) {
        cst::PermeabilityParams perm;
        perm.g = c.mixture.g;
        if (f.conductivity) {
            perm.k_tilde = *f.conductivity;
        } else {
            perm.kappa = f.kappa;
            perm.viscosity = f.viscosity;
        }
        mix.fluids.push_back({f.name, fluid_model(f), f.phi0, perm});
        const double rho = initial_density(f);
        out.P0.push_back(f.P0 ? *f.P0 : f.phi0 * rho);
        pb.density_scale.push_back(rho);
    }

    for (const auto& b : c.bcs) {
        if (b.traction) pb.traction.push_back({b.tag, Vec2<double>{{(*b.traction)[0], (*b.traction)[1]}}});
        if (b.ux) pb.displacement.push_back({b.tag, 0, *b.ux});
        if (b.uy) pb.displacement.push_back({b.tag, 1, *b.uy});
        if (b.tie) pb.ties.push_back({b.tag, *b.tie == "ux" ? 0 : 1});
        for (const auto& [name, v] : b.P0) pb.density.push_back({b.tag, c.fluid_index(name), v});
        for (const auto& [name, v] : b.eta) pb.potential.push_back({b.tag, c.fluid_index(name), v});
        for (const auto& [name, v] : b.p) {
            const int fi = c.fluid_index(name);
            pb.potential.push_back({b.tag, fi, potential_at_pressure(c.fluids[static_cast<std::size_t>(fi)], v)});
        }
        const bool horizontal = b.tag == "top" || b.tag == "bottom";
        const double len = horizontal ? g.Lx : g.Ly;
        const double h = len / (horizontal ? g.nx : g.ny);
        for (const auto& [name, v] : b.flux) {
            fem::MassFluxBC q;
            q.tag = b.tag;
            q.fluid = c.fluid_index(name);
            q.flux = v;
            q.center = b.flux_center.value_or(0.5 * len);
            q.width = b.flux_width.value_or(2.0 * h);
            pb.mass_flux.push_back(q);
        }
    }

    pb.gravity = c.mixture.gravity;
    pb.g = c.mixture.g;
    pb.solid_density = c.solid.density;
    pb.stress_scale = c.solid.phi0 * c.solid.mu;
    pb.pressure_scale = pb.stress_scale;
    for (std::size_t i = 0; i < c.fluids.size(); ++i) {
        const auto& f = c.fluids[i];
        if (f.model == "incompressible_liquid") continue;
        const double rho = pb.density_scale[i];
        const auto e = cst::evaluate_fluid(fluid_model(f), rho);
        pb.pressure_scale = std::max({rho * e.dp, std::abs(e.p), 1e-12 * pb.stress_scale});
        break;
    }
    pb.threads = c.solver.threads;
    pb.upwind_mobility = c.solver.transport == "upwind";
    return out;
}

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informational || c.passed; });
}

const Check* RunReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

Series RunReport::step_series() const {
    Series s;
    s.header = {"step", "t", "dt", "energy", "max_p", "min_phi", "newton_iterations", "closure_defect"};
    for (const auto& f : fluids)
        for (const char* k : {"mass_", "injected_", "reservoir_", "mass_error_"}) s.header.push_back(k + f);
    for (const auto& r : steps) {
        std::vector<double> row = {double(r.step), r.t, r.dt, r.energy, r.max_p, r.min_phi,
                                   double(r.newton_iterations), r.closure_defect};
        for (std::size_t f = 0; f < fluids.size(); ++f) {
            row.push_back(r.mass[f]);
            row.push_back(r.injected[f]);
            row.push_back(r.reservoir[f]);
            row.push_back(r.mass_error[f]);
        }
        s.rows.push_back(std::move(row));
    }
    return s;
}

namespace {

struct LineSample {
    double s;
    fem::Location loc;
};

std::vector<LineSample> line_samples(const fem::Mesh& mesh, const std::array<double, 4>& line, int n) {
    std::vector<LineSample> out;
    for (int i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / (n - 1);
        const Vec2<double> X{{line[0] + s * (line[2] - line[0]), line[1] + s * (line[3] - line[1])}};
        out.push_back({s, fem::locate(mesh, X)});
    }
    return out;
}

Series profile_series(const fem::Assembler& as, const Eigen::VectorXd& x, const std::vector<LineSample>& line,
                      const std::vector<std::string>& fluids) {
    Series s;
    s.header = {"s", "x", "y", "ux", "uy", "p"};
    for (const auto& f : fluids)
        for (const char* k : {"phi_", "rho_", "P0_", "eta_"}) s.header.push_back(k + f);
    for (const auto& ls : line) {
        const auto ps = fem::sample_at(as, x, ls.loc);
        std::vector<double> row = {ls.s, ps.X[0], ps.X[1], ps.u[0], ps.u[1], ps.p};
        for (std::size_t f = 0; f < fluids.size(); ++f) {
            row.push_back(ps.phi[f]);
            row.push_back(ps.rho[f]);
            row.push_back(ps.P0[f]);
            row.push_back(ps.eta[f]);
        }
        s.rows.push_back(std::move(row));
    }
    return s;
}

VtkFields vtk_fields(const fem::Assembler& as, const Eigen::VectorXd& x, const std::vector<std::string>& fluids) {
    auto nf = fem::nodal_fields(as, x);
    VtkFields v;
    v.displacement = std::move(nf.displacement);
    for (std::size_t f = 0; f < fluids.size(); ++f) v.scalars.emplace_back("p_" + fluids[f], nf.pressure[f]);
    for (std::size_t f = 0; f < fluids.size(); ++f) v.scalars.emplace_back("phi_" + fluids[f], nf.phi[f]);
    return v;
}

// Event times in (0, t_end]: plot times, the output cadence and t_end itself.
std::vector<double> event_times(const TimeConfig& t, int cadence) {
    std::vector<double> ev = t.plot_times;
    for (int k = 1; k <= cadence; ++k) ev.push_back(t.t_end * k / cadence);
    ev.push_back(t.t_end);
    std::sort(ev.begin(), ev.end());
    std::vector<double> out;
    for (double e : ev)
        if (out.empty() || e - out.back() > 1e-9 * t.t_end) out.push_back(e);
    return out;
}

bool near(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * scale; }

}  // namespace

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& opt) {
    const auto wall0 = std::chrono::steady_clock::now();
    ScenarioConfig cfg = config;
    if (opt.dt) {
        cfg.time.dt = *opt.dt;
        if (cfg.time.dt0 > cfg.time.dt) cfg.time.dt0 = cfg.time.dt;
    }
    if (opt.out_dir) cfg.output.directory = *opt.out_dir;
    BuiltProblem built = build_problem(cfg, opt.refine);
    const fem::Assembler as(built.problem);
    const fem::Problem& pb = as.problem();
    const fem::DofMap& dm = as.dofs();
    const int nf = pb.n_fluids();
    const auto nfs = static_cast<std::size_t>(nf);

    RunReport rep;
    rep.scenario = cfg.name;
    for (const auto& f : cfg.fluids) rep.fluids.push_back(f.name);

    namespace fs = std::filesystem;
    const fs::path dir(cfg.output.directory);
    if (opt.write_files) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }

    solver::NewtonConfig nc;
    nc.rel_tol = cfg.solver.rel_tol;
    nc.abs_tol = cfg.solver.abs_tol;
    nc.max_iter = cfg.solver.max_iter;
    nc.max_halvings = cfg.solver.max_halvings;
    solver::TimeIntegrator ti(as, nc);
    ti.keep_quadrature = false;

    // Inflow rate per fluid from the prescribed fluxes.
    std::vector<double> inflow(nfs, 0.0);
    const Eigen::VectorXd& ext = as.external_load();
    for (int d = 0; d < dm.n_dofs; ++d)
        if (dm.kind[static_cast<std::size_t>(d)] == fem::DofKind::Density)
            inflow[static_cast<std::size_t>(dm.fluid[static_cast<std::size_t>(d)])] += ext[d];
    const bool injecting = std::any_of(inflow.begin(), inflow.end(), [](double q) { return q != 0.0; });

    solver::TimeLoopState state = solver::initial_loop_state(as, built.P0);
    rep.initial_mass = as.fluid_mass(state.x);

    std::vector<Probe> probes = cfg.output.probes;
    std::vector<fem::Location> probe_loc;
    for (const auto& p : probes) probe_loc.push_back(fem::locate(pb.mesh, Vec2<double>{{p.x, p.y}}));
    rep.probes.header = {"t"};
    for (const auto& p : probes) {
        for (const char* k : {"_p", "_ux", "_uy"}) rep.probes.header.push_back(p.name + k);
        for (const auto& f : rep.fluids) rep.probes.header.push_back(p.name + "_phi_" + f);
    }
    auto sample_probes = [&](const Eigen::VectorXd& x, double t) {
        if (probes.empty()) return;
        std::vector<double> row = {t};
        for (const auto& loc : probe_loc) {
            const auto ps = fem::sample_at(as, x, loc);
            row.insert(row.end(), {ps.p, ps.u[0], ps.u[1]});
            for (std::size_t f = 0; f < nfs; ++f) row.push_back(ps.phi[f]);
        }
        rep.probes.rows.push_back(std::move(row));
    };
    sample_probes(state.x, 0.0);

    std::vector<LineSample> line;
    if (cfg.output.profile) line = line_samples(pb.mesh, *cfg.output.profile, cfg.output.profile_points);

    std::vector<double> injected(nfs, 0.0), reservoir(nfs, 0.0);
    double worst_closure = 0.0;
    int vtk_index = 0;
    auto write_vtk_at = [&](const Eigen::VectorXd& x) {
        if (!opt.write_files || !cfg.output.vtk) return;
        const std::string path = (dir / fmt::format("field_{:04d}.vtk", vtk_index++)).string();
        write_vtk(pb.mesh, vtk_fields(as, x, rep.fluids), path);
        rep.files.push_back(path);
    };
    write_vtk_at(state.x);

    solver::StepStats current;
    int counted = 0;
    ti.on_accept = [&](const solver::TimeLoopState& s) {
        StepRecord r;
        r.step = s.step;
        r.t = s.t;
        r.dt = s.dt;
        r.energy = s.energy.back();
        const auto qs = fem::quadrature_states(as, s.x);
        r.max_p = -std::numeric_limits<double>::infinity();
        r.min_phi = nf > 0 ? std::numeric_limits<double>::infinity() : 0.0;
        for (const auto& q : qs) {
            r.max_p = std::max(r.max_p, q.p);
            for (int f = 0; f < nf; ++f) r.min_phi = std::min(r.min_phi, q.phi[static_cast<std::size_t>(f)]);
        }
        r.closure_defect = fem::closure_defect(pb, qs);
        worst_closure = std::max(worst_closure, r.closure_defect);
        const Eigen::VectorXd raw = as.raw_residual(s.x, s.x_old, s.dt);
        r.mass = as.fluid_mass(s.x);
        for (std::size_t f = 0; f < nfs; ++f) {
            injected[f] += inflow[f] * s.dt;
            double rate = 0.0;
            for (int row : as.reservoir_rows()[f]) rate += raw[row];
            reservoir[f] += rate * s.dt;
            // Injected fluids are measured against the injected mass; a fluid that only
            // meets held boundaries against its inventory or the exchange, whichever is larger.
            const double exchanged = std::abs(injected[f]) + std::abs(reservoir[f]);
            const double denom = injected[f] != 0.0 ? exchanged : std::max(exchanged, rep.initial_mass[f]);
            r.mass_error.push_back(std::abs(r.mass[f] - rep.initial_mass[f] - injected[f] - reservoir[f]) / denom);
        }
        r.injected = injected;
        r.reservoir = reservoir;
        r.newton_iterations = current.newton_iterations - counted;
        counted = current.newton_iterations;
        rep.steps.push_back(std::move(r));
        sample_probes(s.x, s.t);
        if (opt.log) {
            const auto& b = rep.steps.back();
            *opt.log << fmt::format("step {:5d}  t={:.6e}  dt={:.3e}  E={:.9e}  max_p={:.6e}  min_phi={:.6e}\n",
                                    b.step, b.t, b.dt, b.energy, b.max_p, b.min_phi);
        }
    };

    const auto events = event_times(cfg.time, cfg.output.cadence);
    std::set<std::size_t> plot_events;
    std::set<std::size_t> cadence_events;
    for (std::size_t i = 0; i < events.size(); ++i) {
        for (double pt : cfg.time.plot_times)
            if (near(events[i], pt, cfg.time.t_end)) plot_events.insert(i);
        for (int k = 1; k <= cfg.output.cadence; ++k)
            if (near(events[i], cfg.time.t_end * k / cfg.output.cadence, cfg.time.t_end)) cadence_events.insert(i);
    }
    if (cfg.time.plot_times.empty()) plot_events.insert(events.size() - 1);

    double dt = cfg.time.dt0 > 0.0 ? std::min(cfg.time.dt0, cfg.time.dt) : cfg.time.dt;
    try {
        for (std::size_t ei = 0; ei < events.size(); ++ei) {
            const double target = events[ei];
            while (target - state.t > 1e-12 * cfg.time.t_end) {
                double h = std::min(dt, target - state.t);
                if (target - state.t - h < 1e-6 * h) h = target - state.t;
                counted = 0;
                state = ti.step(state, h, &current);
                rep.newton_iterations += current.newton_iterations;
                rep.bisections += current.bisections;
                dt = cfg.time.growth > 1.0 ? std::min(dt * cfg.time.growth, cfg.time.dt) : cfg.time.dt;
            }
            state.t = target;
            if (plot_events.count(ei) && !line.empty())
                rep.profiles.push_back({target, profile_series(as, state.x, line, rep.fluids)});
            if (cadence_events.count(ei)) write_vtk_at(state.x);
        }
    } catch (const Error& e) {
        throw ScenarioError(fmt::format("scenario '{}' failed at t={:.6g}: {}", cfg.name, state.t, e.what()));
    }

    // Checks.
    const bool held = !as.reservoir_rows().empty() &&
                      std::any_of(as.reservoir_rows().begin(), as.reservoir_rows().end(),
                                  [](const auto& r) { return !r.empty(); });
    if (nf > 0 && !rep.steps.empty()) {
        double worst = 0.0;
        for (const auto& r : rep.steps)
            for (double e : r.mass_error) worst = std::max(worst, e);
        const double tol = (injecting || held) ? 1e-8 : 1e-10;
        rep.checks.push_back({"mass_balance", worst <= tol, worst, tol,
                              injecting ? "relative to the injected mass (other fluids: initial or exchanged mass)"
                              : held    ? "relative to the larger of the initial and exchanged mass"
                                        : "relative to the initial mass"});
    }
    if (!injecting && state.energy.size() >= 2) {
        const auto d = solver::dissipation_monitor(state.energy);
        rep.checks.push_back({"energy_monotone", d.monotone(), d.max_increase, d.tolerance,
                              fmt::format("{} flagged steps", d.flagged_steps.size())});
    }
    int compressible = 0;
    for (const auto& f : cfg.fluids) compressible += f.model != "incompressible_liquid";
    if (compressible >= 2)
        rep.checks.push_back({"closure", worst_closure <= 1e-9, worst_closure, 1e-9,
                              "max relative pressure difference over all points and steps"});
    for (std::size_t f = 0; f < nfs; ++f) {
        if (cfg.fluids[f].model != "vdw" || line.empty()) continue;
        // Order the final profile by specific volume; a rise of p with 1/ρ means dp/dρ < 0 somewhere.
        const auto prof = profile_series(as, state.x, line, rep.fluids);
        std::vector<std::pair<double, double>> vp;
        double pmax = 0.0;
        for (const auto& row : prof.rows) {
            vp.emplace_back(1.0 / row[7 + 4 * f], row[5]);
            pmax = std::max(pmax, std::abs(row[5]));
        }
        std::sort(vp.begin(), vp.end());
        double rise = 0.0;
        for (std::size_t i = 1; i < vp.size(); ++i) rise = std::max(rise, vp[i].second - vp[i - 1].second);
        double min_dp = std::numeric_limits<double>::infinity();
        const auto model = fluid_model(cfg.fluids[f]);
        for (const auto& q : fem::quadrature_states(as, state.x))
            min_dp = std::min(min_dp, cst::evaluate_fluid(model, q.rho[f]).dp);
        Check c{"p_inverse_density_non_monotone_" + rep.fluids[f], rise > 1e-9 * pmax || min_dp < 0.0, rise,
                1e-9 * pmax, fmt::format("largest rise of p along increasing 1/rho {:.6g} Pa, min dp/drho {:.6g}", rise, min_dp),
                true};
        rep.checks.push_back(c);
    }

    if (opt.write_files) {
        const auto steps = rep.step_series();
        if (!steps.empty()) {
            write_csv(steps, (dir / "steps.csv").string());
            rep.files.push_back((dir / "steps.csv").string());
        }
        if (!rep.probes.empty()) {
            write_csv(rep.probes, (dir / "probes.csv").string());
            rep.files.push_back((dir / "probes.csv").string());
        }
        for (std::size_t i = 0; i < rep.profiles.size(); ++i) {
            const auto path = (dir / fmt::format("profile_{:02d}.csv", i)).string();
            write_csv(rep.profiles[i].series, path);
            rep.files.push_back(path);
        }
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return rep;
}

}  // namespace poromech::io
