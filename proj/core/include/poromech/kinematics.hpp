#pragma once

#include <tuple>
#include <utility>

#include "poromech/dual.hpp"
#include "poromech/errors.hpp"
#include "poromech/tensor2.hpp"

namespace poromech::kinematics {

/// Smallest volume fraction a phase may reach before it is treated as degenerate.
inline constexpr double phi_min = 1e-6;

/// Plane-strain deformation at a material point. The out-of-plane stretch is 1,
/// so J is the determinant of the in-plane 2×2 F.
struct DeformationState {
    Mat2<double> grad_u;
    Mat2<double> F;
    double J = 1.0;
};

/// Per-phase mass and volume bookkeeping at a material point.
struct PhaseState {
    double P0 = 0.0;    ///< mass per unit referential mixture volume [kg/m³]
    double phi = 0.0;   ///< current volume fraction
    double phi0 = 0.0;  ///< referential volume fraction
    double rho = 0.0;   ///< true density, mass per unit current phase volume [kg/m³]
};

enum class VolumeFractionKind { IncompressibleSolid, AffineSolid, UnsaturatedMixed };

struct VolumeFractionModel {
    VolumeFractionKind kind = VolumeFractionKind::AffineSolid;
    double phi0s = 0.0;
    double rho_I_tilde = 0.0;  ///< only used by UnsaturatedMixed [kg/m³]
};

/// F = I + ∇₀u with J recomputed from F.
DeformationState deformation_gradient(const Mat2<double>& grad_u);

template <class T>
void require_positive_jacobian(const T& J) {
    if (!(value_of(J) > 0.0)) throw NonPositiveJacobian(value_of(J));
}

/// P = J⁻¹ P₀
template <class T>
T push_density(const T& P0, const T& J) {
    require_positive_jacobian(J);
    return P0 / J;
}

/// ρ = J⁻¹ P₀ / φ
template <class T>
T true_density(const T& P0, const T& J, const T& phi) {
    require_positive_jacobian(J);
    if (!(value_of(phi) > phi_min))
        throw DegeneratePhase("volume fraction " + std::to_string(value_of(phi)) + " at or below phi_min");
    return P0 / (J * phi);
}

/// Incompressible solid grains: the solid occupies a fixed current volume, φ_s = φ₀s / J.
template <class T>
std::pair<T, T> fractions_incompressible_solid(double phi0s, const T& J) {
    require_positive_jacobian(J);
    const T phi_s = phi0s / J;
    const T phi_f = 1.0 - phi_s;
    if (!(value_of(phi_f) > phi_min))
        throw DegeneratePhase("pore space crushed out (J=" + std::to_string(value_of(J)) + ")");
    return {phi_s, phi_f};
}

/// Solid deformed affinely with the mixture: φ_s = φ₀s for every J.
inline double fractions_affine_solid(double phi0s) { return phi0s; }

/// Affine solid with an incompressible liquid I and a compressible fluid c filling the rest.
template <class T>
std::tuple<T, T, T> fractions_unsaturated(double phi0s, const T& P0I, const T& J, double rho_I_tilde) {
    require_positive_jacobian(J);
    const T phi_s = T(phi0s);
    const T phi_I = P0I / (J * rho_I_tilde);
    const T phi_c = 1.0 - phi0s - phi_I;
    if (!(value_of(phi_c) > phi_min))
        throw DegeneratePhase("compressible phase displaced (phi_c=" + std::to_string(value_of(phi_c)) + ")");
    return {phi_s, phi_I, phi_c};
}

/// Referential permeability K = J F⁻¹ k F⁻ᵀ.
Mat2<double> pull_permeability(const Mat2<double>& k_current, const Mat2<double>& F, double J);

/// Current permeability k = J⁻¹ F K Fᵀ (inverse of pull_permeability).
Mat2<double> push_permeability(const Mat2<double>& K_ref, const Mat2<double>& F, double J);

}  // namespace poromech::kinematics
