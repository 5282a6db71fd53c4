#pragma once

// Pointwise pressure-equality closure: splits the pore volume available to the
// compressible fluids so every fluid carries the same pressure. The solve runs
// in double precision; the converged root is then polished with two Newton
// steps in the caller's scalar type so dual numbers pick up the derivatives of
// the implicit function (exact through second order).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "poromech/constitutive.hpp"

namespace poromech::constitutive {

inline constexpr double tol_closure = 1e-10;
inline constexpr int closure_max_iter = 100;
inline constexpr std::size_t max_closure_phases = 4;

namespace detail {

/// Pressure that treats vanishing mass as vacuum and compression beyond the
/// admissible range as infinitely stiff, so bracketing stays well defined.
inline double safe_pressure(const FluidModel& m, double rho) {
    if (rho <= 0.0) return 0.0;
    if (const auto* v = std::get_if<VdWParams>(&m)) {
        if (rho / v->molar_mass * v->b >= 1.0) return std::numeric_limits<double>::infinity();
    }
    return evaluate_fluid(m, rho).p;
}

inline double safe_bulk(const FluidModel& m, double rho) {
    if (rho <= 0.0) return 0.0;
    const auto e = evaluate_fluid(m, rho);
    return rho * e.dp;
}

// Density of `m` at pressure `p`, lowest-density root for non-monotone laws.
double density_at_pressure(const FluidModel& m, double p, double rho_hint);

template <class T>
T polish_density(const FluidModel& m, const T& p, double rho0) {
    T rho(rho0);
    for (int it = 0; it < 2; ++it) {
        const auto e = evaluate_fluid(m, rho);
        rho = rho - (e.p - p) / e.dp;
    }
    return rho;
}

}  // namespace detail

/// Splits pore volume V (per unit referential volume) between two compressible
/// fluids with referential masses P1, P2. Returns the volume of fluid 1.
double split_two(const FluidModel& m1, double P1, const FluidModel& m2, double P2, double V, double J);

/// Common-pressure split for any number of compressible fluids; returns per-fluid volumes.
std::vector<double> split_many(std::span<const FluidModel* const> models, std::span<const double> P0, double V,
                               double J);

/// Splits V among the compressible fluids; `vol` receives each fluid's current
/// volume per unit referential volume (= Jφᵢ).
template <class T, std::size_t Cap>
void split_pore_volume(std::span<const FluidModel* const> models, const std::array<T, Cap>& P0, int m, const T& V,
                       const T& J, std::array<T, Cap>& vol) {
    if (m == 1) {
        vol[0] = V;
        return;
    }
    if (m == 2) {
        const double s0 = split_two(*models[0], value_of(P0[0]), *models[1], value_of(P0[1]), value_of(V),
                                    value_of(J));
        T s(s0);
        for (int it = 0; it < 2; ++it) {
            const T r1 = P0[0] / s;
            const T r2 = P0[1] / (V - s);
            const auto e1 = evaluate_fluid(*models[0], r1);
            const auto e2 = evaluate_fluid(*models[1], r2);
            const T f = e1.p - e2.p;
            const T df = -(r1 * e1.dp / s + r2 * e2.dp / (V - s));
            s = s - f / df;
        }
        vol[0] = s;
        vol[1] = V - s;
        return;
    }
    std::vector<double> P0d(static_cast<std::size_t>(m));
    for (int c = 0; c < m; ++c) P0d[static_cast<std::size_t>(c)] = value_of(P0[static_cast<std::size_t>(c)]);
    const std::vector<double> v0 = split_many(models.first(static_cast<std::size_t>(m)), P0d, value_of(V), value_of(J));
    // Polish the common pressure p from Σ P_c / ρ_c(p) = V.
    T p = evaluate_fluid(*models[0], T(P0d[0] / v0[0])).p;
    std::array<double, Cap> rho0{};
    for (int c = 0; c < m; ++c) rho0[c] = P0d[c] / v0[c];
    for (int it = 0; it < 2; ++it) {
        T g = -V;
        T dg(0.0);
        for (int c = 0; c < m; ++c) {
            const T rho = detail::polish_density(*models[c], p, rho0[c]);
            const auto e = evaluate_fluid(*models[c], rho);
            g = g + P0[c] / rho;
            dg = dg - P0[c] / (rho * rho * e.dp);
        }
        p = p - g / dg;
    }
    for (int c = 0; c < m; ++c) {
        const T rho = detail::polish_density(*models[c], p, rho0[c]);
        vol[c] = P0[c] / rho;
    }
}

struct ClosurePhase {
    FluidModel model;
    double P0 = 0.0;
};

/// Current volume fractions {φᵢ} of compressible fluids sharing `pore_fraction`
/// of the current volume at equal pressure.
std::vector<double> pressure_equality_closure(std::span<const ClosurePhase> phases, double pore_fraction, double J);

}  // namespace poromech::constitutive
