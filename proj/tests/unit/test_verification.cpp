#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "poromech/errors.hpp"
#include "poromech/verification.hpp"

using namespace poromech;
using namespace poromech::verification;

namespace {

TerzaghiParams clay() {
    TerzaghiParams p;
    p.k_over_gamma = mobility_from_conductivity(1e-7, 0.375, 1000.0);
    return p;
}

MandelParams mandel_clay() {
    MandelParams p;
    p.base = clay();
    p.a = 1.0;
    return p;
}

}  // namespace

TEST(Terzaghi, DecaysToZero) {
    for (double z : {0.1, 0.5, 1.0}) EXPECT_NEAR(terzaghi_pressure(z, 50.0), 0.0, 1e-30);
}

TEST(Terzaghi, InitialConditionAtBottom) {
    // Alternating series; the truncation error is below the first omitted term.
    const int n = 100000;
    EXPECT_NEAR(terzaghi_pressure(1.0, 0.0, n), 1.0, 4.0 / (std::numbers::pi * (2 * n + 1)));
}

TEST(Terzaghi, HighPrecisionValues) {
    EXPECT_NEAR(terzaghi_pressure(1.0, 0.1), 0.94930536268447036, 1e-14);
    EXPECT_NEAR(terzaghi_pressure(0.5, 0.05), 0.88615160055738860, 1e-14);
    EXPECT_NEAR(terzaghi_pressure(1.0, 0.1), 0.9493054, 1e-4);
}

TEST(Terzaghi, StableUnderTermDoubling) {
    for (double t : {0.01, 0.05, 0.1, 0.5, 2.0})
        for (int i = 0; i <= 20; ++i) {
            const double z = i / 20.0;
            EXPECT_LT(std::abs(terzaghi_pressure(z, t, 400) - terzaghi_pressure(z, t, 200)), 1e-10);
        }
}

TEST(Terzaghi, DrainedTopIsZero) {
    for (double t : {0.001, 0.1, 1.0}) EXPECT_NEAR(terzaghi_pressure(0.0, t), 0.0, 1e-15);
}

TEST(Terzaghi, Scaling) {
    const auto s = terzaghi_scaling(clay());
    EXPECT_NEAR(s.p_scale, 9805.6155507559395, 1e-9);
    const double c = 3.75e-8 / 9810.0 * 117667386.60907127;
    EXPECT_NEAR(consolidation_coefficient(clay()) / c, 1.0, 1e-13);
    EXPECT_NEAR(s.t_scale, 1.0 / c, 1e-9);
}

TEST(Terzaghi, ScalingLimits) {
    TerzaghiParams p = clay();
    p.K_f = 1e30;
    EXPECT_NEAR(terzaghi_scaling(p).p_scale, p.w, 1e-9);
    p = clay();
    p.phi_f = 1e-15;
    EXPECT_NEAR(terzaghi_scaling(p).p_scale, p.w, 1e-9);
    p.phi_f = 0.0;
    EXPECT_THROW(terzaghi_scaling(p), std::invalid_argument);
}

TEST(Mandel, ConstantsClay) {
    const auto c = mandel_constants(mandel_clay());
    EXPECT_DOUBLE_EQ(c.nu, 0.25);
    EXPECT_NEAR(c.K_u, 6.12e9, 1e-3);
    EXPECT_NEAR(c.B, 0.98910675381263617, 1e-14);
    EXPECT_NEAR(c.nu_u, 0.49673913043478261, 1e-14);
}

TEST(Mandel, IncompressibleLimit) {
    MandelParams p = mandel_clay();
    p.base.K_f = 1e30;
    const auto c = mandel_constants(p);
    EXPECT_NEAR(c.B, 1.0, 1e-12);
    EXPECT_NEAR(c.nu_u, 0.5, 1e-12);
}

TEST(Mandel, AlphaRoots) {
    const auto c = mandel_constants(mandel_clay());
    const auto roots = mandel_alpha_roots(c.nu, c.nu_u);
    ASSERT_EQ(roots.size(), 200u);
    EXPECT_NEAR(static_cast<double>(roots[0]), 1.3279456769850805, 1e-13);
    EXPECT_NEAR(static_cast<double>(roots[1]), 4.6416301615134092, 1e-13);
    const long double pi = std::numbers::pi_v<long double>;
    for (std::size_t k = 0; k < roots.size(); ++k) {
        EXPECT_LT(mandel_root_residual(roots[k], c.nu, c.nu_u), 1e-12L) << "root " << k + 1;
        EXPECT_GT(roots[k], k * pi);
        EXPECT_LT(roots[k], k * pi + pi / 2);
        if (k > 0) EXPECT_GT(roots[k], roots[k - 1]);
    }
}

TEST(Mandel, AlphaRootUndrainedLimit) {
    // ν = 0.25, ν_u = 0.5 gives tan α = 3α.
    const auto roots = mandel_alpha_roots(0.25, 0.5, 3);
    EXPECT_NEAR(static_cast<double>(roots[0]), 1.3241944495755027, 1e-13);
}

TEST(Mandel, RootBracketFailure) {
    EXPECT_THROW(mandel_alpha_roots(0.3, 0.3, 5), RootBracketFailure);
    EXPECT_THROW(mandel_alpha_roots(0.4, 0.3, 5), RootBracketFailure);
}

TEST(Mandel, PressureSeries) {
    const auto c = mandel_constants(mandel_clay());
    const auto roots = mandel_alpha_roots(c.nu, c.nu_u);
    EXPECT_NEAR(mandel_pressure(0.0, 1e-6, roots), 0.99938, 1e-5);
    EXPECT_NEAR(mandel_pressure(0.5, 1e-6, roots), 0.99894, 1e-5);
    EXPECT_NEAR(mandel_pressure(0.3, 20.0, roots), 0.0, 1e-12);
    for (double t : {1e-4, 0.01, 0.3, 1.0}) {
        EXPECT_EQ(mandel_pressure(1.0, t, roots), 0.0);
        EXPECT_EQ(mandel_pressure(-1.0, t, roots), 0.0);
    }
}

TEST(Mandel, CentreShowsMandelEffect) {
    const auto c = mandel_constants(mandel_clay());
    const auto roots = mandel_alpha_roots(c.nu, c.nu_u);
    const double p0 = mandel_pressure(0.0, 1e-6, roots);
    double peak = 0.0;
    for (double lt = -5.0; lt < 0.0; lt += 0.01) peak = std::max(peak, mandel_pressure(0.0, std::pow(10.0, lt), roots));
    EXPECT_GT(peak, p0 + 0.05);
}

TEST(Mandel, Scaling) {
    const auto s = mandel_scaling(mandel_clay());
    EXPECT_NEAR(s.p_scale, 4934.7826086956522, 1e-6);
}

TEST(L2, Identical) {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    const auto e = l2_error(a, a);
    EXPECT_EQ(e.value, 0.0);
    EXPECT_FALSE(e.absolute);
}

TEST(L2, ZeroAnalyticGivesAbsolute) {
    const std::vector<double> n = {2.0, 2.0, 2.0, 2.0};
    const std::vector<double> a(4, 0.0);
    const auto e = l2_error(n, a);
    EXPECT_TRUE(e.absolute);
    EXPECT_DOUBLE_EQ(e.value, 4.0);
}

TEST(L2, RelativeScale) {
    const std::vector<double> at = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> n;
    for (double z : at) n.push_back(std::sin(z + 0.3) * (1.0 + 1e-3));
    EXPECT_NEAR(l2_error(n, at, [](double z) { return std::sin(z + 0.3); }).value, 1e-3, 1e-15);
}

TEST(L2, EmptyField) {
    const std::vector<double> e;
    EXPECT_THROW(l2_error(e, e), EmptyField);
}
