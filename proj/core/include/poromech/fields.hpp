#pragma once

// Post-processing of a discrete state: per quadrature point material states,
// point samples, nodal output fields and the transport dissipation.

#include <array>
#include <vector>

#include <Eigen/Core>

#include "poromech/assembly.hpp"

namespace poromech::fem {

using constitutive::max_fluids;

/// Material state housed at one quadrature point.
struct QuadratureState {
    int element = 0;
    int point = 0;
    double weight = 0.0;  ///< referential volume dV
    Vec2<double> X;
    Mat2<double> F;
    double J = 1.0;
    int nf = 0;
    double p = 0.0;  ///< common pore pressure
    std::array<double, max_fluids> P0{};
    std::array<double, max_fluids> phi{};
    std::array<double, max_fluids> rho{};
    std::array<double, max_fluids> pressure{};  ///< each fluid's own pressure from its state
};

std::vector<QuadratureState> quadrature_states(const Assembler& as, const Eigen::VectorXd& x);

/// max over points of |p_i − p_j| / max(p_i, p_j) among compressible fluids.
double closure_defect(const Problem& problem, const std::vector<QuadratureState>& states);

struct PointSample {
    Vec2<double> X;
    Vec2<double> u;
    double J = 1.0;
    int nf = 0;
    double p = 0.0;
    std::array<double, max_fluids> P0{};
    std::array<double, max_fluids> phi{};
    std::array<double, max_fluids> rho{};
    std::array<double, max_fluids> eta{};
};

/// Element and natural coordinates of referential point X.
struct Location {
    int element = 0;
    double xi = 0.0;
    double eta = 0.0;
};

/// Throws std::out_of_range if X lies outside the mesh.
Location locate(const Mesh& mesh, const Vec2<double>& X);

PointSample sample_at(const Assembler& as, const Eigen::VectorXd& x, const Location& loc);
PointSample sample_point(const Assembler& as, const Eigen::VectorXd& x, const Vec2<double>& X);

/// Fields at the corner nodes, for VTK output.
struct NodalFields {
    std::vector<Vec2<double>> displacement;
    std::vector<std::vector<double>> pressure;  ///< [fluid][node]
    std::vector<std::vector<double>> phi;       ///< [fluid][node]
};

NodalFields nodal_fields(const Assembler& as, const Eigen::VectorXd& x);

/// Σ ∫ P₀ k C⁻¹∇₀η·∇₀η dV over fluids, the rate of free-energy dissipation by transport.
double dissipation_rate(const Assembler& as, const Eigen::VectorXd& x);

}  // namespace poromech::fem
