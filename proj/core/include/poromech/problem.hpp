#pragma once

// Discretization-level description of a boundary value problem: mesh,
// mixture and boundary conditions, plus the row scales used by assembly.

#include <string>
#include <vector>

#include "poromech/material_point.hpp"
#include "poromech/mesh.hpp"

namespace poromech::fem {

/// u_component = value on every displacement node of the tag.
struct DisplacementBC {
    std::string tag;
    int component = 0;
    double value = 0.0;
};

/// Dead load per unit referential length [Pa].
struct TractionBC {
    std::string tag;
    Vec2<double> traction;
};

/// Prescribed chemical potential of one fluid on the tag (a reservoir).
struct PotentialBC {
    std::string tag;
    int fluid = 0;
    double eta = 0.0;  ///< [J/kg]
};

/// Prescribed referential density of one fluid on the tag.
struct DensityBC {
    std::string tag;
    int fluid = 0;
    double P0 = 0.0;
};

/// Inflow of one fluid across part of a tagged edge [kg/(m²·s)], positive into
/// the body. With width > 0 only the segment |s − center| ≤ width/2 is loaded,
/// s being x on horizontal edges and y on vertical ones.
struct MassFluxBC {
    std::string tag;
    int fluid = 0;
    double flux = 0.0;
    double center = 0.0;
    double width = 0.0;
};

/// All displacement nodes of the tag share one value of this component.
struct TieBC {
    std::string tag;
    int component = 1;
};

struct Problem {
    Mesh mesh;
    constitutive::Mixture mixture;
    std::vector<DisplacementBC> displacement;
    std::vector<TractionBC> traction;
    std::vector<PotentialBC> potential;
    std::vector<DensityBC> density;
    std::vector<MassFluxBC> mass_flux;
    std::vector<TieBC> ties;

    bool gravity = false;
    double g = 9.81;
    double solid_density = 0.0;  ///< true density of the grains, for the body force only

    double stress_scale = 1.0;          ///< momentum rows are divided by this [Pa]
    double pressure_scale = 1.0;        ///< potential rows are multiplied by ρ_ref / pressure_scale
    std::vector<double> density_scale;  ///< ρ_ref per fluid; transport rows are multiplied by dt / ρ_ref

    /// Transport mobility P₀ taken at the upstream corner of each element edge
    /// pair instead of at the quadrature points. Keeps densities positive when a
    /// fluid is nearly absent; the Galerkin form is the default.
    bool upwind_mobility = false;

    int threads = 1;

    int n_fluids() const { return mixture.n_fluids(); }
    Vec2<double> gravity_vector() const { return Vec2<double>{{0.0, gravity ? -g : 0.0}}; }
};

/// Checks tags, fluid indices and scales. Throws UnknownBoundaryTag or std::invalid_argument.
void validate(const Problem& problem);

}  // namespace poromech::fem
