#pragma once

// Small fixed-size plane tensors. Templated on the scalar so the same code runs
// on doubles and on dual numbers inside element kernels.

#include <array>

namespace poromech {

template <class T>
struct Vec2 {
    std::array<T, 2> c{};

    constexpr T& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    constexpr const T& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
};

/// Row-major 2×2 tensor; m(i, j) is row i, column j.
template <class T>
struct Mat2 {
    std::array<T, 4> c{};

    static constexpr Mat2 identity() {
        Mat2 m;
        m.c = {T(1.0), T(0.0), T(0.0), T(1.0)};
        return m;
    }
    static constexpr Mat2 diag(const T& a, const T& b) {
        Mat2 m;
        m.c = {a, T(0.0), T(0.0), b};
        return m;
    }

    constexpr T& operator()(int i, int j) { return c[static_cast<std::size_t>(2 * i + j)]; }
    constexpr const T& operator()(int i, int j) const { return c[static_cast<std::size_t>(2 * i + j)]; }
};

template <class T>
Mat2<T> operator+(const Mat2<T>& a, const Mat2<T>& b) {
    Mat2<T> r;
    for (int k = 0; k < 4; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}
template <class T>
Mat2<T> operator-(const Mat2<T>& a, const Mat2<T>& b) {
    Mat2<T> r;
    for (int k = 0; k < 4; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
}
template <class T, class S>
Mat2<T> operator*(const S& s, const Mat2<T>& a) {
    Mat2<T> r;
    for (int k = 0; k < 4; ++k) r.c[k] = s * a.c[k];
    return r;
}
template <class T>
Mat2<T> operator*(const Mat2<T>& a, const Mat2<T>& b) {
    Mat2<T> r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}
template <class T>
Vec2<T> operator*(const Mat2<T>& a, const Vec2<T>& v) {
    return Vec2<T>{{a(0, 0) * v[0] + a(0, 1) * v[1], a(1, 0) * v[0] + a(1, 1) * v[1]}};
}

template <class T>
T det(const Mat2<T>& a) {
    return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
}
template <class T>
T trace(const Mat2<T>& a) {
    return a(0, 0) + a(1, 1);
}
template <class T>
Mat2<T> transpose(const Mat2<T>& a) {
    Mat2<T> r;
    r.c = {a(0, 0), a(1, 0), a(0, 1), a(1, 1)};
    return r;
}
/// Cofactor matrix, cof(A) = det(A)·A⁻ᵀ = ∂det(A)/∂A.
template <class T>
Mat2<T> cofactor(const Mat2<T>& a) {
    Mat2<T> r;
    r.c = {a(1, 1), -a(1, 0), -a(0, 1), a(0, 0)};
    return r;
}
template <class T>
Mat2<T> inverse(const Mat2<T>& a) {
    const T inv_det = T(1.0) / det(a);
    return inv_det * transpose(cofactor(a));
}
/// A : B = Σ A_ij B_ij
template <class T>
T ddot(const Mat2<T>& a, const Mat2<T>& b) {
    return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2] + a.c[3] * b.c[3];
}
template <class T>
T dot(const Vec2<T>& a, const Vec2<T>& b) {
    return a[0] * b[0] + a[1] * b[1];
}

}  // namespace poromech
