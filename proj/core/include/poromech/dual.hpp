#pragma once

// Forward-mode dual numbers with a fixed number of directional derivatives.
// Nesting (Dual<Dual<double, N>, M>) yields mixed second derivatives; element
// kernels use this to obtain consistent tangents of residuals that already
// contain first derivatives of the chemical potential.

#include <array>
#include <cmath>
#include <type_traits>

namespace poromech {

template <class T, int N>
struct Dual {
    T v{};
    std::array<T, N> d{};

    constexpr Dual() = default;
    constexpr Dual(double x) : v(x) {}  // NOLINT: implicit by design of the arithmetic
    template <class U>
        requires(!std::is_arithmetic_v<U> && std::is_convertible_v<U, T> && !std::is_same_v<U, Dual>)
    constexpr Dual(const U& x) : v(x) {}

    static constexpr int size = N;

    /// A variable with unit derivative in slot `i`.
    static Dual variable(const T& x, int i) {
        Dual r(x);
        r.d[static_cast<std::size_t>(i)] = T(1.0);
        return r;
    }

    Dual& operator+=(const Dual& o) {
        v += o.v;
        for (int i = 0; i < N; ++i) d[i] += o.d[i];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        v -= o.v;
        for (int i = 0; i < N; ++i) d[i] -= o.d[i];
        return *this;
    }
    Dual& operator*=(const Dual& o) {
        for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    Dual& operator/=(const Dual& o) {
        const T inv = T(1.0) / o.v;
        v *= inv;
        for (int i = 0; i < N; ++i) d[i] = (d[i] - v * o.d[i]) * inv;
        return *this;
    }
};

template <class X>
struct is_dual : std::false_type {};
template <class T, int N>
struct is_dual<Dual<T, N>> : std::true_type {};
template <class X>
inline constexpr bool is_dual_v = is_dual<X>::value;

/// Plain value of a (possibly nested) dual number.
template <class X>
constexpr double value_of(const X& x) {
    if constexpr (is_dual_v<X>)
        return value_of(x.v);
    else
        return static_cast<double>(x);
}

template <class T, int N>
Dual<T, N> operator-(const Dual<T, N>& a) {
    Dual<T, N> r;
    r.v = -a.v;
    for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
    return r;
}
template <class T, int N>
Dual<T, N> operator+(const Dual<T, N>& a) {
    return a;
}

#define POROMECH_DUAL_BINARY(OP, OPEQ)                                                          \
    template <class T, int N>                                                                   \
    Dual<T, N> operator OP(Dual<T, N> a, const Dual<T, N>& b) {                                 \
        a OPEQ b;                                                                               \
        return a;                                                                               \
    }                                                                                           \
    template <class T, int N, class S>                                                          \
        requires(std::is_arithmetic_v<S> || std::is_same_v<S, T>)                              \
    Dual<T, N> operator OP(Dual<T, N> a, const S& b) {                                          \
        a OPEQ Dual<T, N>(b);                                                                   \
        return a;                                                                               \
    }                                                                                           \
    template <class T, int N, class S>                                                          \
        requires(std::is_arithmetic_v<S> || std::is_same_v<S, T>)                              \
    Dual<T, N> operator OP(const S& a, const Dual<T, N>& b) {                                   \
        Dual<T, N> r(a);                                                                        \
        r OPEQ b;                                                                               \
        return r;                                                                               \
    }

POROMECH_DUAL_BINARY(+, +=)
POROMECH_DUAL_BINARY(-, -=)
POROMECH_DUAL_BINARY(*, *=)
POROMECH_DUAL_BINARY(/, /=)
#undef POROMECH_DUAL_BINARY

#define POROMECH_DUAL_COMPARE(OP)                                                         \
    template <class A, class B>                                                           \
        requires(is_dual_v<A> || is_dual_v<B>)                                            \
    bool operator OP(const A& a, const B& b) {                                            \
        return value_of(a) OP value_of(b);                                                \
    }

POROMECH_DUAL_COMPARE(<)
POROMECH_DUAL_COMPARE(>)
POROMECH_DUAL_COMPARE(<=)
POROMECH_DUAL_COMPARE(>=)
#undef POROMECH_DUAL_COMPARE

namespace detail {
// Applies a scalar function with known derivative f' to a dual number.
template <class T, int N>
Dual<T, N> chain(const Dual<T, N>& a, const T& f, const T& df) {
    Dual<T, N> r;
    r.v = f;
    for (int i = 0; i < N; ++i) r.d[i] = df * a.d[i];
    return r;
}
}  // namespace detail

template <class T, int N>
Dual<T, N> log(const Dual<T, N>& a) {
    using std::log;
    return detail::chain(a, T(log(a.v)), T(T(1.0) / a.v));
}
template <class T, int N>
Dual<T, N> log1p(const Dual<T, N>& a) {
    using std::log1p;
    return detail::chain(a, T(log1p(a.v)), T(T(1.0) / (T(1.0) + a.v)));
}
template <class T, int N>
Dual<T, N> exp(const Dual<T, N>& a) {
    using std::exp;
    const T e = exp(a.v);
    return detail::chain(a, e, e);
}
template <class T, int N>
Dual<T, N> sqrt(const Dual<T, N>& a) {
    using std::sqrt;
    const T s = sqrt(a.v);
    return detail::chain(a, s, T(T(0.5) / s));
}
template <class T, int N>
Dual<T, N> sin(const Dual<T, N>& a) {
    using std::sin;
    using std::cos;
    return detail::chain(a, T(sin(a.v)), T(cos(a.v)));
}
template <class T, int N>
Dual<T, N> cos(const Dual<T, N>& a) {
    using std::sin;
    using std::cos;
    return detail::chain(a, T(cos(a.v)), T(-sin(a.v)));
}
template <class T, int N>
Dual<T, N> abs(const Dual<T, N>& a) {
    return value_of(a) < 0.0 ? -a : a;
}

}  // namespace poromech
