#include "poromech/closure.hpp"

#include <numeric>
#include <string>

#include "poromech/kinematics.hpp"

namespace poromech::constitutive {

using kinematics::phi_min;

double split_two(const FluidModel& m1, double P1, const FluidModel& m2, double P2, double V, double J) {
    double lo = phi_min * J;
    double hi = V - phi_min * J;
    if (!(hi > lo)) throw DegeneratePhase("pore volume too small to split between two fluids");
    // f(s) = p1(P1/s) − p2(P2/(V−s)) decreases from +∞-like at lo to −∞-like at hi.
    auto f = [&](double s) { return detail::safe_pressure(m1, P1 / s) - detail::safe_pressure(m2, P2 / (V - s)); };
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo <= 0.0) throw DegeneratePhase("closure drives the first fluid below phi_min");
    if (f_hi >= 0.0) throw DegeneratePhase("closure drives the second fluid below phi_min");

    double s = std::clamp(V * P1 / (P1 + P2), lo, hi);
    if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
    for (int it = 0; it < closure_max_iter; ++it) {
        const double r1 = P1 / s;
        const double r2 = P2 / (V - s);
        const double p1 = detail::safe_pressure(m1, r1);
        const double p2 = detail::safe_pressure(m2, r2);
        const double fs = p1 - p2;
        const double scale = std::max(std::abs(p1), std::abs(p2));
        if (std::abs(fs) <= tol_closure * scale) return s;
        if (fs > 0.0)
            lo = s;
        else
            hi = s;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * V) return s;
        const double df = -(detail::safe_bulk(m1, r1) / s + detail::safe_bulk(m2, r2) / (V - s));
        double next = (df < 0.0 && std::isfinite(fs)) ? s - fs / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    throw ClosureNoConvergence("two-fluid pressure closure did not converge in " + std::to_string(closure_max_iter) +
                               " iterations");
}

namespace detail {

namespace {

// Bisection for p(ρ) = target on [lo, hi] where p increases.
double bisect_pressure(const FluidModel& m, double target, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (safe_pressure(m, mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

// Zero of dp/dn = RT/(1 − bn)² − 2an on (lo, hi), molar.
double vdw_spinodal(const VdWParams& v, double lo, double hi) {
    const double RT = v.R * v.T;
    auto dp = [&](double n) { return RT / ((1.0 - v.b * n) * (1.0 - v.b * n)) - 2.0 * v.a * n; };
    const bool rising = dp(lo) > 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((dp(mid) > 0.0) == rising)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

// Below the critical temperature the vapor branch ends at the vapor spinodal;
// pressures above its maximum are only reached on the liquid branch.
double vdw_density_at_pressure(const FluidModel& m, const VdWParams& v, double p) {
    const double n_max = 1.0 / v.b;
    const double n_c = n_max / 3.0;
    const double RT = v.R * v.T;
    const bool subcritical = RT * 9.0 / 4.0 - 2.0 * v.a * n_c < 0.0;
    double lo_n = 0.0;
    if (subcritical) {
        const double n_v = vdw_spinodal(v, 0.0, n_c);
        if (p <= safe_pressure(m, n_v * v.molar_mass)) return bisect_pressure(m, p, 0.0, n_v * v.molar_mass);
        lo_n = vdw_spinodal(v, n_c, n_max);
    }
    return bisect_pressure(m, p, lo_n * v.molar_mass, n_max * v.molar_mass);
}

}  // namespace

double density_at_pressure(const FluidModel& m, double p, double rho_hint) {
    if (p <= 0.0) throw OutOfRangeDensity("cannot invert equation of state at non-positive pressure");
    if (const auto* v = std::get_if<VdWParams>(&m)) return vdw_density_at_pressure(m, *v, p);
    // Bracket upward from a small density along the lowest-density branch.
    double lo = rho_hint > 0.0 ? rho_hint : 1e-6;
    while (safe_pressure(m, lo) > p) lo *= 0.5;
    double hi = lo;
    for (int k = 0; k < 400 && safe_pressure(m, hi) < p; ++k) {
        lo = hi;
        hi *= 1.5;
    }
    if (!(safe_pressure(m, hi) >= p)) throw OutOfRangeDensity("pressure above the admissible range of the fluid");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (safe_pressure(m, mid) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

std::vector<double> split_many(std::span<const FluidModel* const> models, std::span<const double> P0, double V,
                               double J) {
    const std::size_t m = models.size();
    // Total volume Σ P_c/ρ_c(p) decreases with the common pressure p; bisect on log p.
    auto volume = [&](double p, std::vector<double>& rho) {
        double sum = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            rho[c] = detail::density_at_pressure(*models[c], p, rho[c]);
            sum += P0[c] / rho[c];
        }
        return sum;
    };
    std::vector<double> rho(m, 0.0);
    for (std::size_t c = 0; c < m; ++c)
        if (!(P0[c] > 0.0)) throw DegeneratePhase("fluid without mass cannot share the pore space");
    double p_lo = 1.0;
    double p_hi = 1.0;
    while (volume(p_lo, rho) < V) p_lo *= 0.1;
    while (volume(p_hi, rho) > V) p_hi *= 10.0;
    double p = std::sqrt(p_lo * p_hi);
    for (int it = 0; it < closure_max_iter; ++it) {
        p = std::sqrt(p_lo * p_hi);
        const double v = volume(p, rho);
        if (std::abs(v - V) <= tol_closure * V * 1e-2) break;
        if (v > V)
            p_lo = p;
        else
            p_hi = p;
        if (p_hi / p_lo - 1.0 <= 1e-14) break;
        if (it == closure_max_iter - 1) throw ClosureNoConvergence("multi-fluid closure did not converge");
    }
    volume(p, rho);
    std::vector<double> vol(m);
    for (std::size_t c = 0; c < m; ++c) {
        vol[c] = P0[c] / rho[c];
        if (!(vol[c] > phi_min * J)) throw DegeneratePhase("closure drives a fluid below phi_min");
    }
    return vol;
}

std::vector<double> pressure_equality_closure(std::span<const ClosurePhase> phases, double pore_fraction, double J) {
    kinematics::require_positive_jacobian(J);
    if (!(pore_fraction > 0.0 && pore_fraction < 1.0)) throw std::invalid_argument("pore_fraction must lie in (0,1)");
    const std::size_t m = phases.size();
    if (m == 0) return {};
    double total = 0.0;
    for (const auto& ph : phases) total += ph.P0;
    if (!(total > 0.0)) throw DegeneratePhase("closure needs positive total fluid mass");
    std::array<const FluidModel*, max_closure_phases> models{};
    std::array<double, max_closure_phases> P0{};
    if (m > max_closure_phases) throw std::invalid_argument("too many fluid phases for the closure");
    for (std::size_t c = 0; c < m; ++c) {
        if (is_incompressible(phases[c].model)) throw std::invalid_argument("closure is over compressible fluids only");
        models[c] = &phases[c].model;
        P0[c] = phases[c].P0;
    }
    std::array<double, max_closure_phases> vol{};
    const double V = J * pore_fraction;
    split_pore_volume<double, max_closure_phases>(std::span<const FluidModel* const>(models.data(), m), P0,
                                                  static_cast<int>(m), V, J, vol);
    std::vector<double> phi(m);
    double assigned = 0.0;
    for (std::size_t c = 0; c + 1 < m; ++c) {
        phi[c] = vol[c] / J;
        assigned += phi[c];
    }
    // Exact partition of the pore fraction; the last share absorbs rounding.
    phi[m - 1] = pore_fraction - assigned;
    return phi;
}

}  // namespace poromech::constitutive
