#pragma once

// Energy densities of the solid and fluid phases and the quantities derived
// from them by differentiation: pressure, chemical potential and stress.
//
// Fluids are described by a Helmholtz energy per unit current volume W(ρ) of
// their true mass density ρ. Gas constants (a, b, R) are molar, so gases work
// on the molar density n = ρ / M internally.

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "poromech/dual.hpp"
#include "poromech/errors.hpp"
#include "poromech/kinematics.hpp"
#include "poromech/tensor2.hpp"

namespace poromech::constitutive {

struct NeoHookeanParams {
    double lambda = 0.0;  ///< [Pa]
    double mu = 0.0;      ///< [Pa]
};

/// Small-strain isotropic solid, W = μ ε:ε + (λ/2)(tr ε)². The linearized branch.
struct LinearElasticParams {
    double lambda = 0.0;
    double mu = 0.0;
};

struct IdealGasParams {
    double R = 8.32;            ///< [m³·Pa/(K·mol)]
    double T = 300.0;           ///< [K]
    double xi = 1.0;            ///< [m³/mol]
    double molar_mass = 0.029;  ///< [kg/mol]
};

struct VdWParams {
    double a = 0.0;  ///< [Pa·m⁶/mol²]
    double b = 0.0;  ///< [m³/mol]
    double c = 1.0;  ///< heat-capacity constant
    double R = 8.32;
    double T = 300.0;
    double molar_mass = 0.044;
};

struct IncompressibleLiquidParams {
    double rho_tilde = 1000.0;  ///< [kg/m³]
};

/// Barotropic fluid with constant bulk modulus K_f = ρ dp/dρ and p(ρ_ref) = 0.
struct ConstantBulkFluidParams {
    double K_f = 0.0;      ///< [Pa]
    double rho_ref = 0.0;  ///< [kg/m³]
};

/// Renormalized constants of the linearized theory.
struct LinearizedParams {
    double lambda_tilde = 0.0;
    double mu_tilde = 0.0;
    double K_f = 0.0;
};

/// Either a hydraulic conductivity k̃ held fixed, or an intrinsic permeability κ
/// and viscosity γ from which k = κρ/γ follows at the current density.
struct PermeabilityParams {
    std::optional<double> k_tilde;  ///< [m/s]
    double kappa = 0.0;             ///< [m²]
    double viscosity = 0.0;         ///< γ [Pa·s]
    double g = 9.81;                ///< [m/s²]
};

using SolidModel = std::variant<NeoHookeanParams, LinearElasticParams>;
using FluidModel = std::variant<IdealGasParams, VdWParams, IncompressibleLiquidParams, ConstantBulkFluidParams>;

inline bool is_incompressible(const FluidModel& m) {
    return std::holds_alternative<IncompressibleLiquidParams>(m);
}
std::string model_name(const FluidModel& m);
std::string model_name(const SolidModel& m);

void validate(const NeoHookeanParams& p);
void validate(const LinearElasticParams& p);
void validate(const IdealGasParams& p);
void validate(const VdWParams& p);
void validate(const IncompressibleLiquidParams& p);
void validate(const ConstantBulkFluidParams& p);
void validate(const PermeabilityParams& p);
void validate(const SolidModel& m);
void validate(const FluidModel& m);

namespace detail {

/// x − log(1 + x), accurate for small |x|.
template <class T>
T x_minus_log1p(const T& x) {
    using std::log1p;
    const double xv = value_of(x);
    if (std::abs(xv) < 1e-3) {
        const T x2 = x * x;
        return x2 * (0.5 - x / 3.0 + x2 / 4.0 - x2 * x / 5.0 + x2 * x2 / 6.0);
    }
    return x - log1p(x);
}

inline void require_admissible(const VdWParams& m, double n) {
    if (!(n > 0.0) || !(n * m.b < 1.0))
        throw OutOfRangeDensity("VdW molar density " + std::to_string(n) + " outside (0, 1/b)");
}
inline void require_admissible(const IdealGasParams&, double n) {
    if (!(n > 0.0)) throw OutOfRangeDensity("ideal-gas density must be positive");
}
inline void require_admissible(const ConstantBulkFluidParams&, double rho) {
    if (!(rho > 0.0)) throw OutOfRangeDensity("fluid density must be positive");
}

template <class T>
struct FluidEval {
    T W;    ///< energy per unit current volume
    T mu;   ///< dW/dρ per unit mass
    T p;    ///< ρ W' − W
    T dp;   ///< dp/dρ
};

template <class T>
FluidEval<T> eval(const IdealGasParams& m, const T& rho) {
    using std::log;
    const T n = rho / m.molar_mass;
    require_admissible(m, value_of(n));
    const double RT = m.R * m.T;
    const T lg = log(n * m.xi);
    const double c0 = 1.5 * std::log(1.5 * RT);
    FluidEval<T> r;
    r.W = -(n * RT) * (1.0 + c0 - lg);
    r.mu = -RT * (c0 - lg) / m.molar_mass;
    r.p = n * RT;
    r.dp = T(RT / m.molar_mass);
    return r;
}

template <class T>
FluidEval<T> eval(const VdWParams& m, const T& rho) {
    using std::log;
    const T n = rho / m.molar_mass;
    require_admissible(m, value_of(n));
    const double RT = m.R * m.T;
    const double cRT = m.c * RT;
    const double c0 = cRT * (1.0 - std::log(cRT));
    const T one_m_bn = 1.0 - m.b * n;
    const T lg = log(1.0 / n - m.b);
    FluidEval<T> r;
    r.W = c0 * n - RT * n * lg - m.a * n * n;
    r.mu = (c0 - RT * lg + RT / one_m_bn - 2.0 * m.a * n) / m.molar_mass;
    r.p = n * RT / one_m_bn - m.a * n * n;
    r.dp = (RT / (one_m_bn * one_m_bn) - 2.0 * m.a * n) / m.molar_mass;
    return r;
}

template <class T>
FluidEval<T> eval(const ConstantBulkFluidParams& m, const T& rho) {
    using std::log1p;
    require_admissible(m, value_of(rho));
    const T x = rho / m.rho_ref - 1.0;
    FluidEval<T> r;
    r.W = m.K_f * x_minus_log1p(x);
    r.mu = (m.K_f / m.rho_ref) * x / (1.0 + x);
    r.p = m.K_f * log1p(x);
    r.dp = m.K_f / rho;
    return r;
}

template <class T>
FluidEval<T> eval(const IncompressibleLiquidParams&, const T&) {
    throw std::invalid_argument("incompressible liquid has no equation of state");
}

}  // namespace detail

/// Energy, chemical potential, pressure and dp/dρ of a compressible fluid at true density ρ.
template <class T>
detail::FluidEval<T> evaluate_fluid(const FluidModel& model, const T& rho) {
    return std::visit([&](const auto& m) { return detail::eval(m, rho); }, model);
}

/// W(ρ) per unit current volume [J/m³].
double fluid_energy(const FluidModel& model, double rho);

/// p = ρ·dW/dρ − W. Gas densities are mass densities; divide by molar_mass for moles.
double fluid_pressure(const FluidModel& model, double rho);

/// dW/dρ per unit mass [J/kg].
double fluid_bulk_potential(const FluidModel& model, double rho);

/// Referential chemical potential η₀ = ∂W₀/∂P₀ − ∂ψ₀/∂P₀ of one phase. For an
/// incompressible liquid it is the pore pressure over ρ̃; `pore_pressure` is
/// ignored otherwise. `gravity_potential` is g·x (zero with gravity off).
double chemical_potential(const FluidModel& model, const kinematics::PhaseState& state, double J,
                          double pore_pressure = 0.0, double gravity_potential = 0.0);

/// Scalar k of the isotropic current permeability k·I at true density ρ.
template <class T>
T permeability(const PermeabilityParams& p, const T& rho) {
    if (p.k_tilde) return T(*p.k_tilde / p.g);
    return p.kappa * rho / p.viscosity;
}

/// Current-configuration mass flux q = −P k (∇μ − g), with μ = ∂W₀/∂P₀ and P = φρ.
Vec2<double> fluid_flux(const FluidModel& model, const kinematics::PhaseState& state,
                        const Vec2<double>& grad_mu, const PermeabilityParams& perm,
                        const Vec2<double>& gravity = {});

template <class T>
T neo_hookean_energy(const Mat2<T>& F, const NeoHookeanParams& m) {
    using std::log1p;
    const T J = det(F);
    kinematics::require_positive_jacobian(J);
    const Mat2<T> H = F - Mat2<T>::identity();
    const T d = J - 1.0;
    const T l = log1p(d);
    return m.mu * (0.5 * ddot(H, H) - det(H) + detail::x_minus_log1p(d)) + 0.5 * m.lambda * l * l;
}

/// ∂W/∂F = μF − μF⁻ᵀ + λ log(J) F⁻ᵀ
template <class T>
Mat2<T> neo_hookean_piola(const Mat2<T>& F, const NeoHookeanParams& m) {
    using std::log;
    const T J = det(F);
    kinematics::require_positive_jacobian(J);
    const Mat2<T> FinvT = (T(1.0) / J) * cofactor(F);
    return m.mu * F + (m.lambda * log(J) - m.mu) * FinvT;
}

template <class T>
T linear_elastic_energy(const Mat2<T>& F, const LinearElasticParams& m) {
    const Mat2<T> H = F - Mat2<T>::identity();
    const Mat2<T> eps = 0.5 * (H + transpose(H));
    const T tr = trace(eps);
    return m.mu * ddot(eps, eps) + 0.5 * m.lambda * tr * tr;
}

template <class T>
Mat2<T> linear_elastic_piola(const Mat2<T>& F, const LinearElasticParams& m) {
    const Mat2<T> H = F - Mat2<T>::identity();
    const Mat2<T> eps = 0.5 * (H + transpose(H));
    return (2.0 * m.mu) * eps + (m.lambda * trace(eps)) * Mat2<T>::identity();
}

template <class T>
T solid_energy(const Mat2<T>& F, const SolidModel& model) {
    return std::visit(
        [&](const auto& m) -> T {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, NeoHookeanParams>)
                return neo_hookean_energy(F, m);
            else
                return linear_elastic_energy(F, m);
        },
        model);
}

template <class T>
Mat2<T> solid_piola(const Mat2<T>& F, const SolidModel& model) {
    return std::visit(
        [&](const auto& m) -> Mat2<T> {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, NeoHookeanParams>)
                return neo_hookean_piola(F, m);
            else
                return linear_elastic_piola(F, m);
        },
        model);
}

/// σ = 2μ̃ε + λ̃ tr(ε) I − φ_f p I
Mat2<double> linearized_stress(const Mat2<double>& eps, double p, const LinearizedParams& params, double phi_f);

/// P ∇η·K∇η, the local rate of free-energy dissipation by fluid transport.
double dissipation_density(const Vec2<double>& grad_eta, double P, const Mat2<double>& K);

}  // namespace poromech::constitutive
