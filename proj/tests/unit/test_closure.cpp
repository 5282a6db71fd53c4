#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "poromech/closure.hpp"
#include "poromech/constitutive.hpp"
#include "support.hpp"

using namespace poromech;
using namespace poromech::constitutive;
using poromech::testing::uniform;

namespace {

VdWParams co2(double T) {
    VdWParams m;
    m.a = 0.364;
    m.b = 42.67e-6;
    m.T = T;
    return m;
}

void expect_closed(std::span<const ClosurePhase> phases, const std::vector<double>& phi, double pore, double J) {
    ASSERT_EQ(phi.size(), phases.size());
    double sum = 0.0;
    double pmax = 0.0;
    std::vector<double> p;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        sum += phi[i];
        p.push_back(fluid_pressure(phases[i].model, phases[i].P0 / (J * phi[i])));
        pmax = std::max(pmax, std::abs(p.back()));
    }
    EXPECT_NEAR(sum, pore, 1e-14);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) EXPECT_LE(std::abs(p[i] - p[j]), tol_closure * pmax);
}

}  // namespace

TEST(Closure, IdenticalGasesSplitEvenly) {
    const std::vector<ClosurePhase> ph = {{IdealGasParams{}, 0.5}, {IdealGasParams{}, 0.5}};
    const auto phi = pressure_equality_closure(ph, 0.3, 1.0);
    EXPECT_NEAR(phi[0], 0.15, 1e-14);
    EXPECT_NEAR(phi[1], 0.15, 1e-14);
}

TEST(Closure, TwoToOneMassRatio) {
    const std::vector<ClosurePhase> ph = {{IdealGasParams{}, 2.0}, {IdealGasParams{}, 1.0}};
    const auto phi = pressure_equality_closure(ph, 0.2, 1.0);
    EXPECT_NEAR(phi[0], 0.2 * 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(phi[1], 0.2 / 3.0, 1e-12);

    // Independent plain bisection on p₁(φ) − p₂(0.2 − φ).
    const IdealGasParams g{};
    double lo = 1e-9, hi = 0.2 - 1e-9;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = fluid_pressure(g, 2.0 / mid) - fluid_pressure(g, 1.0 / (0.2 - mid));
        (f > 0.0 ? lo : hi) = mid;
    }
    EXPECT_NEAR(phi[0], 0.5 * (lo + hi), 1e-12);
}

TEST(Closure, SingleFluidTakesWholePore) {
    const std::vector<ClosurePhase> ph = {{co2(300.0), 10.0}};
    const auto phi = pressure_equality_closure(ph, 0.2, 1.3);
    ASSERT_EQ(phi.size(), 1u);
    EXPECT_EQ(phi[0], 0.2);
}

TEST(Closure, RandomPairsSatisfyPressureEquality) {
    for (int i = 0; i < 200; ++i) {
        IdealGasParams a, b;
        b.molar_mass = uniform(0.002, 0.06);
        a.T = b.T = uniform(250.0, 400.0);
        const double J = uniform(0.7, 1.5);
        const double pore = uniform(0.05, 0.5);
        const std::vector<ClosurePhase> ph = {{a, uniform(1e-3, 10.0)}, {b, uniform(1e-3, 10.0)}};
        const auto phi = pressure_equality_closure(ph, pore, J);
        expect_closed(ph, phi, pore, J);
    }
}

TEST(Closure, GasAgainstVdWAndStiffFluid) {
    const double J = 1.02;
    const std::vector<ClosurePhase> ph = {{co2(320.0), 20.0}, {IdealGasParams{}, 0.5}};
    const auto phi = pressure_equality_closure(ph, 0.2, J);
    expect_closed(ph, phi, 0.2, J);

    const std::vector<ClosurePhase> ph2 = {{ConstantBulkFluidParams{2.27e9, 1000.0}, 150.0},
                                           {IdealGasParams{}, 0.05}};
    const auto phi2 = pressure_equality_closure(ph2, 0.2, 1.0);
    expect_closed(ph2, phi2, 0.2, 1.0);
}

TEST(Closure, ThreeFluids) {
    IdealGasParams h2;
    h2.molar_mass = 0.002;
    const std::vector<ClosurePhase> ph = {{IdealGasParams{}, 1.0}, {h2, 0.05}, {co2(320.0), 3.0}};
    const auto phi = pressure_equality_closure(ph, 0.25, 1.1);
    expect_closed(ph, phi, 0.25, 1.1);
}

TEST(Closure, DegenerateWhenOnePhaseVanishes) {
    const std::vector<ClosurePhase> ph = {{IdealGasParams{}, 1.0}, {IdealGasParams{}, 0.0}};
    EXPECT_THROW(pressure_equality_closure(ph, 0.2, 1.0), DegeneratePhase);
}

TEST(PressureInversion, VdWVaporRootBelowSpinodal) {
    const FluidModel m = co2(270.0);
    const double rho = constitutive::detail::density_at_pressure(m, 5.0e6, 0.0);
    EXPECT_NEAR(rho, 174.7, 0.1);
    EXPECT_NEAR(fluid_pressure(m, rho), 5.0e6, 1e-6 * 5.0e6);
    // Same root from a liquid-side hint.
    EXPECT_EQ(constitutive::detail::density_at_pressure(m, 5.0e6, 600.0), rho);
}

TEST(PressureInversion, VdWLiquidRootAboveSpinodal) {
    const FluidModel m = co2(270.0);
    const double rho = constitutive::detail::density_at_pressure(m, 6.0e6, 0.0);
    EXPECT_GT(rho, 486.3);
    EXPECT_NEAR(fluid_pressure(m, rho), 6.0e6, 1e-6 * 6.0e6);
    const double h = 1e-4 * rho;
    EXPECT_GT(fluid_pressure(m, rho + h) - fluid_pressure(m, rho - h), 0.0);
}

TEST(PressureInversion, VdWSupercriticalRoundTrip) {
    const FluidModel m = co2(320.0);
    for (double p : {1e5, 3e6, 8e6, 2e7}) {
        const double rho = constitutive::detail::density_at_pressure(m, p, 0.0);
        EXPECT_NEAR(fluid_pressure(m, rho), p, 1e-9 * p);
    }
}
