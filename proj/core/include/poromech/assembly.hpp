#pragma once

// Assembly of the coupled momentum / transport / potential residual and its
// tangent, and the sparse direct solve.
//
// Residual rows, per element and before scaling:
//   momentum   ∫ T : ∇₀v − ∫ b₀·v                        − tractions
//   transport  M_b (P₀ − P₀ⁿ)/dt + ∫ P₀ k C⁻¹∇₀η · ∇₀N_b  − inflow
//   potential  M_b η_b − ∫ (μ − g·x) N_b
// where M_b = ∫ N_b is the lumped mass of corner b.

#include <array>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "poromech/dofmap.hpp"
#include "poromech/problem.hpp"

namespace poromech::fem {

struct QpGeometry {
    double dV = 0.0;
    Vec2<double> X;
    std::array<double, 9> N2{};
    std::array<Vec2<double>, 9> dN2{};
    std::array<double, 4> N1{};
    std::array<Vec2<double>, 4> dN1{};
};

struct ElementGeometry {
    std::array<QpGeometry, 9> qp;
    std::array<double, 4> lumped{};
};

/// Shape data at natural point (xi, eta) of element e, with physical gradients.
QpGeometry point_geometry(const Mesh& mesh, int e, double xi, double eta, double weight = 0.0);

ElementGeometry element_geometry(const Mesh& mesh, int e);

/// Row `row` of the system is replaced by x[col] − value.
struct Constraint {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

struct SparseSystem {
    Eigen::SparseMatrix<double, Eigen::RowMajor> A;
    Eigen::VectorXd b;
};

/// Adds ∫ t*·v dS to momentum rows and the prescribed inflow to transport rows.
Eigen::VectorXd apply_neumann(const Problem& problem, const DofMap& dofs, Eigen::VectorXd rhs);

class Assembler {
public:
    explicit Assembler(Problem problem);

    const Problem& problem() const { return problem_; }
    const DofMap& dofs() const { return dofs_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const std::vector<ElementGeometry>& geometry() const { return geometry_; }
    const Eigen::VectorXd& external_load() const { return external_; }
    int n_dofs() const { return dofs_.n_dofs; }

    /// Scaled residual with constraint rows replaced.
    Eigen::VectorXd assemble_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& x_old, double dt) const;

    /// Tangent of assemble_residual together with the residual itself.
    SparseSystem assemble_tangent(const Eigen::VectorXd& x, const Eigen::VectorXd& x_old, double dt) const;

    /// Unscaled residual without constraint rows; at constrained transport rows it
    /// is the mass rate drawn from the boundary reservoir.
    Eigen::VectorXd raw_residual(const Eigen::VectorXd& x, const Eigen::VectorXd& x_old, double dt) const;

    Eigen::VectorXd row_scales(double dt) const;

    /// Zero displacement, uniform P₀ per fluid, consistent η, constraint values applied.
    Eigen::VectorXd initial_state(std::span<const double> P0) const;

    /// Recomputes the η dofs from (u, P₀); η rows are linear in η.
    void project_potential(Eigen::VectorXd& x) const;

    void apply_constraint_values(Eigen::VectorXd& x) const;

    double lumped_mass(int corner) const { return lumped_[static_cast<std::size_t>(corner)]; }

    /// Σ_c M_c P₀(c, f) for each fluid.
    std::vector<double> fluid_mass(const Eigen::VectorXd& x) const;

    /// Constrained transport rows, grouped by fluid.
    const std::vector<std::vector<int>>& reservoir_rows() const { return reservoir_rows_; }

    /// Owner element and local corner of every corner node.
    std::pair<int, int> corner_owner(int corner) const { return owner_[static_cast<std::size_t>(corner)]; }

private:
    struct Local;
    void run_elements(const Eigen::VectorXd& x, const Eigen::VectorXd& x_old, double dt, bool tangent,
                      std::vector<double>& res, std::vector<double>& mat) const;
    Eigen::VectorXd scatter_residual(const std::vector<double>& res) const;

    Problem problem_;
    DofMap dofs_;
    std::vector<ElementGeometry> geometry_;
    std::vector<std::vector<int>> element_dofs_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<int>> reservoir_rows_;
    std::vector<double> lumped_;
    std::vector<std::pair<int, int>> owner_;
    Eigen::VectorXd external_;
    Eigen::SparseMatrix<double, Eigen::RowMajor> pattern_;
    std::vector<std::vector<int>> positions_;
};

/// Direct sparse solve; throws SingularMatrix.
Eigen::VectorXd solve_linear(const SparseSystem& system);

/// Sparse LU that keeps the symbolic analysis between solves with the same pattern.
class LinearSolver {
public:
    LinearSolver();
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;
    Eigen::VectorXd solve(const SparseSystem& system);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace poromech::fem
