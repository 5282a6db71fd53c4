#pragma once

// Closed-form consolidation solutions used as oracles for the solver, and a
// relative L2 error norm.

#include <functional>
#include <span>
#include <vector>

namespace poromech::verification {

inline constexpr int default_terms = 200;

struct TerzaghiParams {
    double w = 1e4;                 ///< applied load [Pa]
    double K_f = 2.27e9;            ///< fluid bulk modulus [Pa]
    double phi_f = 0.375;           ///< porosity
    double lambda_tilde = 40e6;     ///< [Pa]
    double mu_tilde = 40e6;         ///< [Pa]
    double k_over_gamma = 0.0;      ///< Darcy mobility κ/γ [m²/(Pa·s)]
    double h = 1.0;                 ///< drainage length [m]
};

/// Throws std::invalid_argument unless every field is positive and phi_f < 1.
void validate(const TerzaghiParams& p);

/// Darcy mobility of a fluid of conductivity k̃ at reference density ρ_ref:
/// κ/γ = φ k̃ / (g ρ_ref).
double mobility_from_conductivity(double k_tilde, double phi_f, double rho_ref, double g = 9.81);

struct Scaling {
    double p_scale = 0.0;  ///< [Pa]
    double t_scale = 0.0;  ///< [s]
};

/// Consolidation coefficient c = (κ/γ)·K_f M / (K_f + φ_f M), M = λ̃ + 2μ̃.
double consolidation_coefficient(const TerzaghiParams& p);

/// p_scale = w K_f / (K_f + φ_f M); t_scale = h² / c.
Scaling terzaghi_scaling(const TerzaghiParams& p);

/// p̄ at depth z̄ (0 at the drained top, 1 at the impermeable bottom).
double terzaghi_pressure(double z_bar, double t_bar, int n_terms = default_terms);

struct MandelParams {
    TerzaghiParams base;  ///< base.h is unused
    double a = 1.0;       ///< half-width [m]
};

struct MandelConstants {
    double nu = 0.0;
    double nu_u = 0.0;
    double B = 0.0;
    double K_u = 0.0;  ///< [Pa]
};

MandelConstants mandel_constants(const MandelParams& p);

/// p_scale = B(1 + ν_u) w / 3; t_scale = a² / c.
Scaling mandel_scaling(const MandelParams& p);

/// Positive roots of tan α / α = (1 − ν)/(ν_u − ν), one per branch, in
/// extended precision. Throws RootBracketFailure.
std::vector<long double> mandel_alpha_roots(double nu, double nu_u, int n_roots = default_terms);

/// |tan α − cα| / (1 + |cα|) for c = (1 − ν)/(ν_u − ν).
long double mandel_root_residual(long double alpha, double nu, double nu_u);

/// p̄ at x̄ ∈ [−1, 1].
double mandel_pressure(double x_bar, double t_bar, std::span<const long double> roots);

struct L2Error {
    double value = 0.0;
    bool absolute = false;  ///< analytic field was zero; value is the absolute norm
};

/// ‖numeric − analytic‖ / ‖analytic‖ over matching samples. Throws EmptyField.
L2Error l2_error(std::span<const double> numeric, std::span<const double> analytic);

/// Samples `analytic` at the given abscissae first.
L2Error l2_error(std::span<const double> numeric, std::span<const double> at,
                 const std::function<double(double)>& analytic);

}  // namespace poromech::verification
