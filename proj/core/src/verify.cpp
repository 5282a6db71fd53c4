#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "poromech/scenario.hpp"
#include "poromech/verification.hpp"

namespace poromech::io {

namespace ver = verification;

bool VerifyReport::passed() const {
    return std::all_of(times.begin(), times.end(), [](const VerifyTime& t) { return t.passed(); }) &&
           std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.informational || c.passed; });
}

namespace {

ver::TerzaghiParams params_from(const ScenarioConfig& c) {
    const auto& f = c.fluids.at(0);
    ver::TerzaghiParams p;
    for (const auto& b : c.bcs)
        if (b.tag == "top" && b.traction) p.w = -(*b.traction)[1];
    p.K_f = f.K_f;
    p.phi_f = f.phi0;
    p.lambda_tilde = c.solid.phi0 * c.solid.lambda;
    p.mu_tilde = c.solid.phi0 * c.solid.mu;
    p.k_over_gamma = ver::mobility_from_conductivity(f.conductivity.value(), f.phi0, f.rho_ref, c.mixture.g);
    p.h = c.geometry.Ly;
    return p;
}

// Column of a profile or probe series by header name.
std::size_t column(const Series& s, const std::string& name) {
    const auto it = std::find(s.header.begin(), s.header.end(), name);
    if (it == s.header.end()) throw std::out_of_range("no column '" + name + "'");
    return static_cast<std::size_t>(it - s.header.begin());
}

void log_times(std::ostream* log, const VerifyReport& r) {
    if (!log) return;
    for (const auto& t : r.times)
        *log << fmt::format("{}  t_bar={:<6g} L2={:.4e}  tol={:g}  {}\n", r.name, t.t_bar, t.l2, t.tolerance,
                            t.passed() ? "PASS" : "FAIL");
    for (const auto& c : r.checks)
        *log << fmt::format("{}  {}: value={:.6g} threshold={:.6g}  {}  {}\n", r.name, c.name, c.value, c.threshold,
                            c.informational ? "INFO" : (c.passed ? "PASS" : "FAIL"), c.detail);
}

}  // namespace

VerifyReport verify_terzaghi(int refine, std::ostream* log) {
    ScenarioConfig cfg = preset("terzaghi");
    const auto tp = params_from(cfg);
    const auto sc = ver::terzaghi_scaling(tp);
    const double t0 = 1e-6;
    const std::vector<double> t_bars = {0.05, 0.1, 0.5};
    cfg.time.t_end = t_bars.back() * sc.t_scale;
    cfg.time.dt = sc.t_scale / (400.0 * refine);
    cfg.time.dt0 = t0 * sc.t_scale;
    cfg.time.growth = 1.0;
    cfg.time.plot_times = {t0 * sc.t_scale};
    for (double tb : t_bars) cfg.time.plot_times.push_back(tb * sc.t_scale);
    const double x_mid = 0.5 * cfg.geometry.Lx;
    cfg.output.profile = std::array<double, 4>{x_mid, cfg.geometry.Ly, x_mid, 0.0};

    VerifyReport r;
    r.name = "terzaghi";
    r.p_scale = sc.p_scale;
    r.t_scale = sc.t_scale;
    RunOptions opt;
    opt.refine = refine;
    opt.write_files = false;
    r.run = run_scenario(cfg, opt);

    const auto& prof = r.run.profiles;
    const std::size_t ip = column(prof.at(0).series, "p");
    for (std::size_t k = 1; k < prof.size(); ++k) {
        std::vector<double> num, z;
        for (const auto& row : prof[k].series.rows) {
            z.push_back(row[0]);
            num.push_back(row[ip] / sc.p_scale);
        }
        const double tb = t_bars[k - 1];
        const auto e = ver::l2_error(num, z, [&](double zb) { return ver::terzaghi_pressure(zb, tb); });
        r.times.push_back({tb, e.value, 0.02});
    }
    const double undrained = prof.at(0).series.rows.back()[ip] / sc.p_scale;
    r.checks.push_back({"undrained_pressure", std::abs(undrained - 1.0) <= 0.01, std::abs(undrained - 1.0), 0.01,
                        fmt::format("p/p_scale = {:.6f} at the bottom after the first step", undrained)});
    if (const auto* e = r.run.check("energy_monotone")) r.checks.push_back(*e);
    if (const auto* m = r.run.check("mass_balance")) r.checks.push_back(*m);
    log_times(log, r);
    return r;
}

VerifyReport verify_mandel(int refine, std::ostream* log) {
    ScenarioConfig cfg = preset("mandel");
    ver::MandelParams mp;
    mp.base = params_from(cfg);
    mp.a = cfg.geometry.Lx;
    const auto sc = ver::mandel_scaling(mp);
    const auto mc = ver::mandel_constants(mp);
    const auto roots = ver::mandel_alpha_roots(mc.nu, mc.nu_u);
    const std::vector<double> t_bars = {0.01, 0.1, 0.5};
    cfg.time.t_end = t_bars.back() * sc.t_scale;
    cfg.time.dt = sc.t_scale / (400.0 * refine);
    cfg.time.dt0 = 1e-6 * sc.t_scale;
    cfg.time.growth = 1.25;
    cfg.time.plot_times.clear();
    for (double tb : t_bars) cfg.time.plot_times.push_back(tb * sc.t_scale);
    const double y_mid = 0.5 * cfg.geometry.Ly;
    cfg.output.profile = std::array<double, 4>{0.0, y_mid, cfg.geometry.Lx, y_mid};
    cfg.output.probes = {{"A", 0.0, y_mid}};

    VerifyReport r;
    r.name = "mandel";
    r.p_scale = sc.p_scale;
    r.t_scale = sc.t_scale;
    RunOptions opt;
    opt.refine = refine;
    opt.write_files = false;
    r.run = run_scenario(cfg, opt);

    const auto& prof = r.run.profiles;
    const std::size_t ip = column(prof.at(0).series, "p");
    for (std::size_t k = 0; k < prof.size(); ++k) {
        std::vector<double> num, xs;
        for (const auto& row : prof[k].series.rows) {
            xs.push_back(row[0]);
            num.push_back(row[ip] / sc.p_scale);
        }
        const double tb = t_bars[k];
        const auto e = ver::l2_error(num, xs, [&](double xb) { return ver::mandel_pressure(xb, tb, roots); });
        r.times.push_back({tb, e.value, 0.03});
    }

    // Centre pressure history; row 0 is t = 0, row 1 the undrained response.
    const auto& pr = r.run.probes;
    const std::size_t ia = column(pr, "A_p");
    const double p_init = pr.rows.at(1)[ia] / sc.p_scale;
    std::size_t ipk = 1;
    for (std::size_t i = 1; i < pr.rows.size(); ++i)
        if (pr.rows[i][ia] > pr.rows[ipk][ia]) ipk = i;
    const double p_peak = pr.rows[ipk][ia] / sc.p_scale;
    const double t_peak = pr.rows[ipk][0] / sc.t_scale;
    bool decays = true;
    for (std::size_t i = ipk + 1; i < pr.rows.size(); ++i)
        if (pr.rows[i][ia] > pr.rows[i - 1][ia] * (1.0 + 1e-12)) decays = false;
    double oracle_peak = 0.0, oracle_t = 0.0;
    for (double lt = -5.0; lt < 0.0; lt += 1e-3) {
        const double tb = std::pow(10.0, lt);
        const double p = ver::mandel_pressure(0.0, tb, roots);
        if (p > oracle_peak) {
            oracle_peak = p;
            oracle_t = tb;
        }
    }
    r.checks.push_back({"mandel_effect", p_peak > p_init && decays, p_peak - p_init, 0.0,
                        fmt::format("centre p/p_scale rises from {:.6f} to {:.6f} then {}", p_init, p_peak,
                                    decays ? "decays monotonically" : "does not decay monotonically")});
    const double rel = std::abs(t_peak - oracle_t) / oracle_t;
    r.checks.push_back({"peak_time", rel <= 0.2, rel, 0.2,
                        fmt::format("numeric peak at t_bar={:.5g}, series peak at t_bar={:.5g} (p_bar={:.5f})",
                                    t_peak, oracle_t, oracle_peak)});
    if (const auto* m = r.run.check("mass_balance")) r.checks.push_back(*m);
    log_times(log, r);
    return r;
}

}  // namespace poromech::io
