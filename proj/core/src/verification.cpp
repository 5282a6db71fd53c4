#include "poromech/verification.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "poromech/errors.hpp"

namespace poromech::verification {

void validate(const TerzaghiParams& p) {
    if (!(p.w > 0.0 && p.K_f > 0.0 && p.lambda_tilde > 0.0 && p.mu_tilde > 0.0 && p.k_over_gamma > 0.0 && p.h > 0.0))
        throw std::invalid_argument("consolidation parameters must be positive");
    if (!(p.phi_f > 0.0 && p.phi_f < 1.0)) throw std::invalid_argument("porosity must lie in (0,1)");
}

double mobility_from_conductivity(double k_tilde, double phi_f, double rho_ref, double g) {
    return phi_f * k_tilde / (g * rho_ref);
}

double consolidation_coefficient(const TerzaghiParams& p) {
    validate(p);
    const double M = p.lambda_tilde + 2.0 * p.mu_tilde;
    return p.k_over_gamma * p.K_f * M / (p.K_f + p.phi_f * M);
}

Scaling terzaghi_scaling(const TerzaghiParams& p) {
    const double M = p.lambda_tilde + 2.0 * p.mu_tilde;
    return {p.w * p.K_f / (p.K_f + p.phi_f * M), p.h * p.h / consolidation_coefficient(p)};
}

double terzaghi_pressure(double z_bar, double t_bar, int n_terms) {
    if (n_terms < 1) throw std::invalid_argument("n_terms must be >= 1");
    using std::numbers::pi;
    double s = 0.0;
    for (int n = 0; n < n_terms; ++n) {
        const double m = 2.0 * n + 1.0;
        s += 4.0 / (pi * m) * std::sin(0.5 * m * pi * z_bar) * std::exp(-0.25 * m * m * pi * pi * t_bar);
    }
    return s;
}

MandelConstants mandel_constants(const MandelParams& p) {
    validate(p.base);
    const auto& b = p.base;
    MandelConstants c;
    c.nu = b.lambda_tilde / (2.0 * (b.lambda_tilde + b.mu_tilde));
    c.K_u = b.lambda_tilde + 2.0 * b.mu_tilde / 3.0 + b.K_f / b.phi_f;
    c.B = b.K_f / (b.phi_f * c.K_u);
    const double s = c.B * (1.0 - 2.0 * c.nu);
    c.nu_u = (3.0 * c.nu + s) / (3.0 - s);
    return c;
}

Scaling mandel_scaling(const MandelParams& p) {
    const auto c = mandel_constants(p);
    return {c.B * (1.0 + c.nu_u) * p.base.w / 3.0, p.a * p.a / consolidation_coefficient(p.base)};
}

long double mandel_root_residual(long double alpha, double nu, double nu_u) {
    const long double c = (1.0L - nu) / (static_cast<long double>(nu_u) - nu);
    return std::fabs(std::tan(alpha) - c * alpha) / (1.0L + std::fabs(c * alpha));
}

std::vector<long double> mandel_alpha_roots(double nu, double nu_u, int n_roots) {
    if (!(nu < nu_u)) throw RootBracketFailure("Mandel roots need nu < nu_u");
    if (n_roots < 1) throw std::invalid_argument("n_roots must be >= 1");
    const long double pi = std::numbers::pi_v<long double>;
    const long double c = (1.0L - nu) / (static_cast<long double>(nu_u) - nu);
    const long double shrink = 1e-9L;
    auto f = [&](long double a) { return std::tan(a) - c * a; };
    std::vector<long double> roots;
    roots.reserve(static_cast<std::size_t>(n_roots));
    for (int k = 1; k <= n_roots; ++k) {
        long double lo = (k - 1) * pi + shrink;
        long double hi = (k - 1) * pi + 0.5L * pi - shrink;
        if (!(f(lo) < 0.0L && f(hi) > 0.0L))
            throw RootBracketFailure("no sign change on branch " + std::to_string(k));
        for (int it = 0; it < 200 && hi - lo > 0.0L; ++it) {
            const long double mid = 0.5L * (lo + hi);
            if (mid == lo || mid == hi) break;
            (f(mid) > 0.0L ? hi : lo) = mid;
        }
        const long double a = std::fabs(f(lo)) < std::fabs(f(hi)) ? lo : hi;
        roots.push_back(a);
    }
    return roots;
}

double mandel_pressure(double x_bar, double t_bar, std::span<const long double> roots) {
    long double s = 0.0L;
    for (long double a : roots) {
        const long double ca = std::cos(a);
        const long double sa = std::sin(a);
        s += (std::cos(a * x_bar) - ca) * sa / (a - sa * ca) * std::exp(-a * a * t_bar);
    }
    return static_cast<double>(2.0L * s);
}

L2Error l2_error(std::span<const double> numeric, std::span<const double> analytic) {
    if (numeric.empty()) throw EmptyField("l2_error of an empty field");
    if (numeric.size() != analytic.size()) throw std::invalid_argument("l2_error needs matching samples");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
        const double d = numeric[i] - analytic[i];
        num += d * d;
        den += analytic[i] * analytic[i];
    }
    if (den == 0.0) return {std::sqrt(num), true};
    return {std::sqrt(num / den), false};
}

L2Error l2_error(std::span<const double> numeric, std::span<const double> at,
                 const std::function<double(double)>& analytic) {
    if (numeric.size() != at.size()) throw std::invalid_argument("l2_error needs matching samples");
    std::vector<double> a(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) a[i] = analytic(at[i]);
    return l2_error(numeric, a);
}

}  // namespace poromech::verification
