#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "poromech/material_point.hpp"
#include "support.hpp"

using namespace poromech;
using namespace poromech::constitutive;
using kinematics::VolumeFractionKind;
using poromech::testing::central_derivative;
using poromech::testing::random_matrix;

namespace {

PermeabilityParams conductivity(double k) {
    PermeabilityParams p;
    p.k_tilde = k;
    return p;
}


VdWParams co2(double T) {
    VdWParams m;
    m.a = 0.364;
    m.b = 42.67e-6;
    m.T = T;
    return m;
}

Mixture saturated_clay() {
    Mixture mix;
    mix.phi0s = 0.625;
    mix.solid = NeoHookeanParams{40e6 / 0.625, 40e6 / 0.625};
    mix.vf_kind = VolumeFractionKind::IncompressibleSolid;
    mix.fluids.push_back({"water", ConstantBulkFluidParams{2.27e9, 1000.0}, 0.375, conductivity(1e-4)});
    return mix;
}

Mixture co2_soil() {
    Mixture mix;
    mix.phi0s = 0.8;
    mix.solid = NeoHookeanParams{57.7e6, 38.46e6};
    mix.vf_kind = VolumeFractionKind::AffineSolid;
    mix.fluids.push_back({"co2", co2(320.0), 0.2, conductivity(1e-4)});
    return mix;
}

Mixture two_gases() {
    Mixture mix;
    mix.phi0s = 0.8;
    mix.solid = NeoHookeanParams{57.7e6, 38.46e6};
    mix.vf_kind = VolumeFractionKind::AffineSolid;
    IdealGasParams h2;
    h2.molar_mass = 0.002;
    mix.fluids.push_back({"air", IdealGasParams{}, 0.15, conductivity(1e-4)});
    mix.fluids.push_back({"h2", h2, 0.05, conductivity(1e-4)});
    return mix;
}

Mixture unsaturated() {
    Mixture mix;
    mix.phi0s = 0.9;
    mix.solid = NeoHookeanParams{57.7e6, 38.46e6};
    mix.vf_kind = VolumeFractionKind::UnsaturatedMixed;
    mix.fluids.push_back({"water", IncompressibleLiquidParams{1000.0}, 0.05, conductivity(1e-4)});
    mix.fluids.push_back({"air", IdealGasParams{}, 0.05, conductivity(1e-4)});
    return mix;
}

double max_abs(const Mat2<double>& A) {
    double m = 0.0;
    for (double v : A.c) m = std::max(m, std::abs(v));
    return m;
}

void check_piola_gradient(const Mixture& mix, const std::vector<double>& P0, double scale) {
    for (int trial = 0; trial < 50; ++trial) {
        const auto F = Mat2<double>::identity() + random_matrix(scale);
        const auto T = total_piola(F, mix, P0);
        for (int k = 0; k < 4; ++k) {
            auto W = [&](double x) {
                Mat2<double> G = F;
                G.c[k] = x;
                return total_energy_density(G, mix, P0);
            };
            const double fd = central_derivative(W, F.c[k], 1e-5);
            EXPECT_LE(std::abs(T.c[k] - fd), 1e-6 * max_abs(T)) << "trial " << trial << " component " << k;
        }
    }
}

}  // namespace

TEST(MaterialPoint, ValidatesMixtures) {
    EXPECT_NO_THROW(validate(saturated_clay()));
    EXPECT_NO_THROW(validate(unsaturated()));
    auto bad = co2_soil();
    bad.fluids[0].phi0 = 0.3;
    EXPECT_THROW(validate(bad), std::invalid_argument);
    auto liquid_only = unsaturated();
    liquid_only.fluids.pop_back();
    liquid_only.fluids[0].phi0 = 0.1;
    EXPECT_THROW(validate(liquid_only), std::invalid_argument);
}

TEST(MaterialPoint, UnloadedReferenceIsStressFree) {
    const auto mix = saturated_clay();
    const std::vector<double> P0 = {375.0};
    const auto s = evaluate_point(mix, Mat2<double>::identity(), P0);
    EXPECT_EQ(s.p, 0.0);
    EXPECT_EQ(max_abs(total_piola(Mat2<double>::identity(), mix, P0)), 0.0);
}

TEST(MaterialPoint, PiolaIsEnergyGradientSaturated) {
    check_piola_gradient(saturated_clay(), {375.0 * 1.0001}, 0.02);
}

TEST(MaterialPoint, PiolaIsEnergyGradientVdW) {
    const double P0 = 0.2 * 2000.0 * 0.044;
    check_piola_gradient(co2_soil(), {P0}, 0.05);
}

TEST(MaterialPoint, PiolaIsEnergyGradientTwoGases) {
    check_piola_gradient(two_gases(), {0.15 * 20.0, 0.05 * 1.5}, 0.05);
}

TEST(MaterialPoint, PiolaIsEnergyGradientUnsaturated) {
    check_piola_gradient(unsaturated(), {50.0, 0.05 * 1.2}, 0.05);
}

TEST(MaterialPoint, VdWFluidStressMatchesClosedForm) {
    const auto mix = co2_soil();
    const auto m = std::get<VdWParams>(mix.fluids[0].model);
    const double P0 = 0.2 * 3000.0 * m.molar_mass;
    const auto F = Mat2<double>::identity() + random_matrix(0.05);
    const double J = det(F);
    const std::vector<double> P0v = {P0};
    const auto T = total_piola(F, mix, P0v);
    const double n = P0 / (J * 0.2) / m.molar_mass;
    const auto FinvT = transpose(inverse(F));
    const double RT = m.R * m.T;
    const auto expected = 0.8 * neo_hookean_piola(F, std::get<NeoHookeanParams>(mix.solid)) -
                          (P0 / m.molar_mass) * (RT / (1.0 - m.b * n) - m.a * n) * FinvT;
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(T.c[k], expected.c[k], 1e-10 * max_abs(expected));
}

TEST(MaterialPoint, LinearizedBranch) {
    // Affine solid with renormalized constants λ = λ̃/φ₀s, μ = μ̃/φ₀s.
    const LinearizedParams lp{40e6, 40e6, 2.27e9};
    Mixture mix;
    mix.phi0s = 0.625;
    mix.solid = NeoHookeanParams{lp.lambda_tilde / mix.phi0s, lp.mu_tilde / mix.phi0s};
    mix.vf_kind = VolumeFractionKind::AffineSolid;
    mix.fluids.push_back({"water", ConstantBulkFluidParams{lp.K_f, 1000.0}, 0.375, conductivity(1e-4)});
    const std::vector<double> P0 = {0.375 * 1000.0 * std::exp(1e4 / lp.K_f)};
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = random_matrix(1e-6);
        const auto F = Mat2<double>::identity() + g;
        const auto eps = 0.5 * (g + transpose(g));
        const auto s = evaluate_point(mix, F, P0);
        const auto sigma = (1.0 / det(F)) * (total_piola(F, mix, P0) * transpose(F));
        const auto lin = linearized_stress(eps, s.p, lp, 0.375);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(sigma.c[k], lin.c[k], 1e-3);
    }
}

TEST(MaterialPoint, UnsaturatedLiquidPotential) {
    const auto mix = unsaturated();
    const std::vector<double> P0 = {50.0, 0.06};
    const auto s = evaluate_point(mix, Mat2<double>::identity(), P0);
    EXPECT_NEAR(s.phi[0], 0.05, 1e-15);
    EXPECT_NEAR(s.phi[1], 0.05, 1e-15);
    EXPECT_NEAR(s.rho[1], 1.2, 1e-13);
    EXPECT_NEAR(s.mu[0], s.p / 1000.0, 1e-15 * s.p);
    EXPECT_THROW(evaluate_point(mix, Mat2<double>::identity(), std::vector<double>{120.0, 0.06}), DegeneratePhase);
}

TEST(MaterialPoint, ChemicalPotentialIsEnergyDerivative) {
    for (const auto& mix : {two_gases(), unsaturated(), co2_soil()}) {
        const auto F = Mat2<double>::identity() + random_matrix(0.03);
        std::vector<double> P0;
        for (const auto& f : mix.fluids)
            P0.push_back(f.phi0 * (is_incompressible(f.model) ? 1000.0 : 20.0));
        const auto s = evaluate_point(mix, F, P0);
        for (std::size_t i = 0; i < P0.size(); ++i) {
            auto W = [&](double x) {
                auto Q = P0;
                Q[i] = x;
                return total_energy_density(F, mix, Q);
            };
            const double fd = central_derivative(W, P0[i], 1e-4 * P0[i]);
            EXPECT_NEAR(s.mu[i], fd, 1e-7 * std::abs(fd) + 1e-9) << mix.fluids[i].name;
        }
    }
}
