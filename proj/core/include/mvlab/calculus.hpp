#pragma once

// Forward-mode differentiation of expressions.
//
// Jet3 carries a univariate quantity with its first three derivatives (the
// actual derivatives, not Taylor coefficients). HyperDual carries two
// independent first-order perturbations and their mixed second-order term; seeding
// both with e_i gives the pure second partial along axis i.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "mvlab/expr.hpp"

namespace mvlab {

struct Jet3 {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    constexpr Jet3() = default;
    constexpr Jet3(double constant) : value(constant) {}  // NOLINT(google-explicit-constructor)
    constexpr Jet3(double v, double first, double second, double third)
        : value(v), d1(first), d2(second), d3(third) {}

    static constexpr Jet3 variable(double x) { return {x, 1.0, 0.0, 0.0}; }

    /// Composition with a scalar function g given g, g', g'', g''' at `value`.
    constexpr Jet3 chain(double g0, double g1, double g2, double g3) const {
        return {g0, g1 * d1, g2 * d1 * d1 + g1 * d2, g3 * d1 * d1 * d1 + 3.0 * g2 * d1 * d2 + g1 * d3};
    }

    friend constexpr Jet3 operator-(const Jet3& u) { return {-u.value, -u.d1, -u.d2, -u.d3}; }
    friend constexpr Jet3 operator+(const Jet3& u, const Jet3& v) {
        return {u.value + v.value, u.d1 + v.d1, u.d2 + v.d2, u.d3 + v.d3};
    }
    friend constexpr Jet3 operator-(const Jet3& u, const Jet3& v) {
        return {u.value - v.value, u.d1 - v.d1, u.d2 - v.d2, u.d3 - v.d3};
    }
    friend constexpr Jet3 operator*(const Jet3& u, const Jet3& v) {
        return {u.value * v.value, u.d1 * v.value + u.value * v.d1,
                u.d2 * v.value + 2.0 * u.d1 * v.d1 + u.value * v.d2,
                u.d3 * v.value + 3.0 * u.d2 * v.d1 + 3.0 * u.d1 * v.d2 + u.value * v.d3};
    }
    friend constexpr Jet3 operator/(const Jet3& u, const Jet3& v) {
        const double t = v.value;
        const double inv = 1.0 / t;
        return u * v.chain(inv, -inv * inv, 2.0 * inv * inv * inv, -6.0 * inv * inv * inv * inv);
    }
};

struct HyperDual {
    double value = 0.0;
    double da = 0.0;
    double db = 0.0;
    double dab = 0.0;

    constexpr HyperDual() = default;
    constexpr HyperDual(double constant) : value(constant) {}  // NOLINT(google-explicit-constructor)
    constexpr HyperDual(double v, double a, double b, double ab) : value(v), da(a), db(b), dab(ab) {}

    /// Composition with g given g, g', g'' at `value`.
    constexpr HyperDual chain(double g0, double g1, double g2) const {
        return {g0, g1 * da, g1 * db, g1 * dab + g2 * da * db};
    }

    friend constexpr HyperDual operator-(const HyperDual& u) { return {-u.value, -u.da, -u.db, -u.dab}; }
    friend constexpr HyperDual operator+(const HyperDual& u, const HyperDual& v) {
        return {u.value + v.value, u.da + v.da, u.db + v.db, u.dab + v.dab};
    }
    friend constexpr HyperDual operator-(const HyperDual& u, const HyperDual& v) {
        return {u.value - v.value, u.da - v.da, u.db - v.db, u.dab - v.dab};
    }
    friend constexpr HyperDual operator*(const HyperDual& u, const HyperDual& v) {
        return {u.value * v.value, u.da * v.value + u.value * v.da, u.db * v.value + u.value * v.db,
                u.dab * v.value + u.da * v.db + u.db * v.da + u.value * v.dab};
    }
    friend constexpr HyperDual operator/(const HyperDual& u, const HyperDual& v) {
        const double inv = 1.0 / v.value;
        return u * v.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
    }
};

// Evaluator customization points (see expr.hpp).

constexpr double scalar_value(const Jet3& x) noexcept { return x.value; }
constexpr double scalar_value(const HyperDual& x) noexcept { return x.value; }
constexpr bool is_constant(const Jet3& x) noexcept { return x.d1 == 0 && x.d2 == 0 && x.d3 == 0; }
constexpr bool is_constant(const HyperDual& x) noexcept { return x.da == 0 && x.db == 0 && x.dab == 0; }
bool all_finite(const Jet3& x) noexcept;
bool all_finite(const HyperDual& x) noexcept;
Jet3 elementary(Function fn, const Jet3& x);
HyperDual elementary(Function fn, const HyperDual& x);
Jet3 power(const Jet3& base, const Jet3& exponent);
HyperDual power(const HyperDual& base, const HyperDual& exponent);

/// f(x0) and its first three derivatives.
struct Derivatives1d {
    double value;
    double d1;
    double d2;
    double d3;
};

Derivatives1d derivatives_1d(const Expression& f, double x0);

/// f'(x0) alone; convenience for solvers that only need the slope.
double derivative(const Expression& f, double x0);

std::vector<double> gradient(const Expression& g, std::span<const double> point);

/// Sum of pure second partials, one HyperDual pass per axis.
double laplacian(const Expression& g, std::span<const double> point);

/// grad g . v, evaluated in a single pass seeded along v. |v| must be 1 within 1e-12.
double directional_derivative(const Expression& g, std::span<const double> point, std::span<const double> v);

/// Throws InvalidArgument unless |v| = 1 within 1e-12.
void require_unit(std::span<const double> v);

}  // namespace mvlab
