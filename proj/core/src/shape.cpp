#include "poromech/shape.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace poromech::fem {

namespace {

constexpr std::array<std::array<int, 2>, 9> q2_index = {{
    {0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 0}, {2, 1}, {1, 2}, {0, 1}, {1, 1},
}};

// 1-D quadratic Lagrange basis on nodes −1, 0, 1 and its derivatives.
void quad1d(double s, std::array<double, 3>& L, std::array<double, 3>& dL, std::array<double, 3>& d2L) {
    L = {0.5 * s * (s - 1.0), 1.0 - s * s, 0.5 * s * (s + 1.0)};
    dL = {s - 0.5, -2.0 * s, s + 0.5};
    d2L = {1.0, -2.0, 1.0};
}

}  // namespace

ShapeValues shape_eval(ShapeFamily family, double xi, double eta) {
    ShapeValues r;
    if (family == ShapeFamily::Bilinear) {
        r.n = 4;
        constexpr std::array<std::array<double, 2>, 4> s = {{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
        for (int a = 0; a < 4; ++a) {
            const double gx = 1.0 + s[a][0] * xi;
            const double gy = 1.0 + s[a][1] * eta;
            r.N[a] = 0.25 * gx * gy;
            r.dN[a] = {0.25 * s[a][0] * gy, 0.25 * gx * s[a][1]};
            r.d2N[a] = {0.0, 0.25 * s[a][0] * s[a][1], 0.0};
        }
        return r;
    }
    r.n = 9;
    std::array<double, 3> Lx, dLx, d2Lx, Ly, dLy, d2Ly;
    quad1d(xi, Lx, dLx, d2Lx);
    quad1d(eta, Ly, dLy, d2Ly);
    for (int a = 0; a < 9; ++a) {
        const int i = q2_index[a][0];
        const int j = q2_index[a][1];
        r.N[a] = Lx[i] * Ly[j];
        r.dN[a] = {dLx[i] * Ly[j], Lx[i] * dLy[j]};
        r.d2N[a] = {d2Lx[i] * Ly[j], dLx[i] * dLy[j], Lx[i] * d2Ly[j]};
    }
    return r;
}

std::array<double, 2> node_coords(ShapeFamily family, int a) {
    if (family == ShapeFamily::Bilinear && a >= 4) throw std::out_of_range("bilinear element has 4 nodes");
    return {q2_index[a][0] - 1.0, q2_index[a][1] - 1.0};
}

std::span<const std::array<double, 2>> gauss_rule_1d(int n) {
    static const std::array<std::array<double, 2>, 1> g1 = {{{0.0, 2.0}}};
    static const std::array<std::array<double, 2>, 2> g2 = {{{-1.0 / std::sqrt(3.0), 1.0}, {1.0 / std::sqrt(3.0), 1.0}}};
    static const std::array<std::array<double, 2>, 3> g3 = {
        {{-std::sqrt(0.6), 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {std::sqrt(0.6), 5.0 / 9.0}}};
    switch (n) {
        case 1: return g1;
        case 2: return g2;
        case 3: return g3;
        default: throw std::invalid_argument("Gauss rule supports 1 to 3 points");
    }
}

std::span<const QuadraturePoint> gauss_rule_2d(int n) {
    static const auto make = [](int m) {
        std::vector<QuadraturePoint> pts;
        const auto g = gauss_rule_1d(m);
        for (const auto& b : g)
            for (const auto& a : g) pts.push_back({a[0], b[0], a[1] * b[1]});
        return pts;
    };
    static const std::vector<QuadraturePoint> r1 = make(1), r2 = make(2), r3 = make(3);
    switch (n) {
        case 1: return r1;
        case 2: return r2;
        case 3: return r3;
        default: throw std::invalid_argument("Gauss rule supports 1 to 3 points");
    }
}

}  // namespace poromech::fem
