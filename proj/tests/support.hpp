#pragma once

#include <cmath>
#include <random>

#include "poromech/tensor2.hpp"

namespace poromech::testing {

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline Mat2<double> random_matrix(double scale) {
    Mat2<double> m;
    for (auto& c : m.c) c = uniform(-scale, scale);
    return m;
}

inline double rel_diff(double a, double b, double floor = 0.0) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Fourth-order central difference of a scalar function.
template <class Fn>
double central_derivative(Fn&& f, double x, double h) {
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h);
}

}  // namespace poromech::testing
