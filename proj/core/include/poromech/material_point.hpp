#pragma once

// Evaluation of the mixture energy at one material point: volume fractions,
// pressure closure, chemical potentials and the total first Piola stress.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "poromech/closure.hpp"
#include "poromech/constitutive.hpp"
#include "poromech/kinematics.hpp"

namespace poromech::constitutive {

inline constexpr std::size_t max_fluids = max_closure_phases;

struct FluidPhase {
    std::string name;
    FluidModel model;
    double phi0 = 0.0;
    PermeabilityParams perm;
};

/// One solid skeleton plus any number of pore fluids.
struct Mixture {
    SolidModel solid = NeoHookeanParams{};
    double phi0s = 1.0;
    kinematics::VolumeFractionKind vf_kind = kinematics::VolumeFractionKind::AffineSolid;
    std::vector<FluidPhase> fluids;

    int n_fluids() const { return static_cast<int>(fluids.size()); }

    /// ∂V_pore/∂J, where V_pore = Jφ_pore is the pore volume per unit referential volume.
    double pore_volume_slope() const {
        return vf_kind == kinematics::VolumeFractionKind::IncompressibleSolid ? 1.0 : 1.0 - phi0s;
    }
};

void validate(const Mixture& mix);

template <class T>
struct PointState {
    int nf = 0;
    T J;
    T V_pore;  ///< J × (volume fraction not held by solid or incompressible liquids)
    T p;       ///< common pore pressure (0 without compressible fluids)
    std::array<T, max_fluids> phi{};
    std::array<T, max_fluids> rho{};
    std::array<T, max_fluids> mu{};  ///< ∂W₀/∂P₀ᵢ
    T fluid_energy;                  ///< Σ Jφ_c W_c(ρ_c) per unit referential volume
};

/// Solves the local fluid state for referential masses P0 at Jacobian J.
template <class T>
PointState<T> evaluate_point(const Mixture& mix, const T& J, const std::array<T, max_fluids>& P0) {
    using kinematics::phi_min;
    kinematics::require_positive_jacobian(J);
    PointState<T> s;
    s.nf = mix.n_fluids();
    s.J = J;
    T V_solid = mix.vf_kind == kinematics::VolumeFractionKind::IncompressibleSolid ? T(mix.phi0s) : mix.phi0s * J;
    T V = J - V_solid;
    std::array<const FluidModel*, max_fluids> comp{};
    std::array<int, max_fluids> comp_idx{};
    std::array<T, max_fluids> comp_P0{};
    int m = 0;
    for (int i = 0; i < s.nf; ++i) {
        const auto& f = mix.fluids[static_cast<std::size_t>(i)];
        if (const auto* liq = std::get_if<IncompressibleLiquidParams>(&f.model)) {
            const T VI = P0[i] / liq->rho_tilde;
            V = V - VI;
            s.phi[i] = VI / J;
            s.rho[i] = T(liq->rho_tilde);
        } else {
            comp[m] = &f.model;
            comp_idx[m] = i;
            comp_P0[m] = P0[i];
            ++m;
        }
    }
    if (s.nf > 0 && !(value_of(V) > phi_min * value_of(J)))
        throw DegeneratePhase("pore volume available to compressible fluids vanished (phi=" +
                              std::to_string(value_of(V) / value_of(J)) + ")");
    s.V_pore = V;
    s.p = T(0.0);
    s.fluid_energy = T(0.0);
    if (m > 0) {
        std::array<T, max_fluids> vol{};
        split_pore_volume<T, max_fluids>(std::span<const FluidModel* const>(comp.data(), static_cast<std::size_t>(m)),
                                         comp_P0, m, V, J, vol);
        for (int c = 0; c < m; ++c) {
            const int i = comp_idx[c];
            if (!(value_of(vol[c]) > phi_min * value_of(J)))
                throw DegeneratePhase("fluid '" + mix.fluids[static_cast<std::size_t>(i)].name +
                                      "' volume fraction below phi_min");
            s.phi[i] = vol[c] / J;
            s.rho[i] = comp_P0[c] / vol[c];
            const auto e = evaluate_fluid(*comp[c], s.rho[i]);
            s.mu[i] = e.mu;
            s.fluid_energy = s.fluid_energy + vol[c] * e.W;
            if (c == 0) s.p = e.p;
        }
    } else if (s.nf > 0) {
        throw std::invalid_argument("a mixture with fluids needs at least one compressible fluid");
    }
    for (int i = 0; i < s.nf; ++i) {
        if (const auto* liq = std::get_if<IncompressibleLiquidParams>(&mix.fluids[static_cast<std::size_t>(i)].model))
            s.mu[i] = s.p / liq->rho_tilde;
    }
    return s;
}

/// T = φ₀s ∂W_s/∂F − p (∂V_pore/∂J) cof F
template <class T>
Mat2<T> total_piola(const Mat2<T>& F, const Mixture& mix, const PointState<T>& s) {
    Mat2<T> P = mix.phi0s * solid_piola(F, mix.solid);
    if (s.nf > 0) P = P - (s.p * mix.pore_volume_slope()) * cofactor(F);
    return P;
}

/// W₀ = φ₀s W_s(F) + Σ Jφ_c W_c(ρ_c)
template <class T>
T total_energy_density(const Mat2<T>& F, const Mixture& mix, const PointState<T>& s) {
    return mix.phi0s * solid_energy(F, mix.solid) + s.fluid_energy;
}

/// Convenience wrappers on doubles.
PointState<double> evaluate_point(const Mixture& mix, const Mat2<double>& F, std::span<const double> P0);
Mat2<double> total_piola(const Mat2<double>& F, const Mixture& mix, std::span<const double> P0);
double total_energy_density(const Mat2<double>& F, const Mixture& mix, std::span<const double> P0);

}  // namespace poromech::constitutive
