#pragma once

// Lagrange shape functions on the reference square [−1, 1]² and Gauss rules.
//
// Bilinear nodes: (−1,−1), (1,−1), (1,1), (−1,1).
// Biquadratic nodes: the four corners as above, then the midsides of the
// bottom, right, top and left edges, then the centre.

#include <array>
#include <span>

namespace poromech::fem {

enum class ShapeFamily { Bilinear, Biquadratic };

struct ShapeValues {
    int n = 0;
    std::array<double, 9> N{};
    std::array<std::array<double, 2>, 9> dN{};   ///< ∂/∂ξ, ∂/∂η
    std::array<std::array<double, 3>, 9> d2N{};  ///< ∂²/∂ξ², ∂²/∂ξ∂η, ∂²/∂η²
};

ShapeValues shape_eval(ShapeFamily family, double xi, double eta);

/// Natural coordinates of node a.
std::array<double, 2> node_coords(ShapeFamily family, int a);

struct QuadraturePoint {
    double xi = 0.0;
    double eta = 0.0;
    double w = 0.0;
};

/// Tensor-product Gauss rule with n points per direction (n = 1, 2 or 3).
std::span<const QuadraturePoint> gauss_rule_2d(int n);

/// One-dimensional Gauss points and weights on [−1, 1].
std::span<const std::array<double, 2>> gauss_rule_1d(int n);

}  // namespace poromech::fem
