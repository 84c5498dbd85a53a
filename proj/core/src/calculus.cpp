#include "mvlab/calculus.hpp"

#include <string>

namespace mvlab {

namespace {

/// g, g', g'', g''' of an elementary function at u.
std::array<double, 4> elementary_derivatives(Function fn, double u) {
    switch (fn) {
        case Function::Sin: {
            const double s = std::sin(u), c = std::cos(u);
            return {s, c, -s, -c};
        }
        case Function::Cos: {
            const double s = std::sin(u), c = std::cos(u);
            return {c, -s, -c, s};
        }
        case Function::Exp: {
            const double e = std::exp(u);
            return {e, e, e, e};
        }
        case Function::Log: {
            const double inv = 1.0 / u;
            return {std::log(u), inv, -inv * inv, 2.0 * inv * inv * inv};
        }
        case Function::Sqrt: {
            const double r = std::sqrt(u);
            return {r, 0.5 / r, -0.25 / (r * r * r), 0.375 / (r * r * r * r * r)};
        }
        case Function::Tanh: {
            const double t = std::tanh(u);
            const double sech2 = 1.0 - t * t;
            return {t, sech2, -2.0 * t * sech2, -2.0 * sech2 * (1.0 - 3.0 * t * t)};
        }
        case Function::Abs: {
            const double sign = u > 0 ? 1.0 : -1.0;
            return {std::abs(u), sign, 0.0, 0.0};
        }
    }
    return {u, 0.0, 0.0, 0.0};
}

/// Derivatives of t -> t^c at x for a fixed exponent c.
std::array<double, 4> power_rule(double x, double c) {
    std::array<double, 4> g{};
    double falling = 1.0;
    for (int k = 0; k < 4; ++k) {
        g[static_cast<std::size_t>(k)] = falling == 0.0 ? 0.0 : falling * std::pow(x, c - k);
        falling *= c - k;
    }
    return g;
}

Jet3 compose_with(const Jet3& u, const std::array<double, 4>& g) { return u.chain(g[0], g[1], g[2], g[3]); }
HyperDual compose_with(const HyperDual& u, const std::array<double, 4>& g) { return u.chain(g[0], g[1], g[2]); }

template <class T>
T generic_power(const T& base, const T& exponent) {
    if (is_constant(exponent)) return compose_with(base, power_rule(base.value, exponent.value));
    return elementary(Function::Exp, exponent * elementary(Function::Log, base));
}

template <class T>
std::vector<T> seeded(std::span<const double> point) {
    return std::vector<T>(point.begin(), point.end());
}

void require_dimension(std::span<const double> point) {
    if (point.empty() || point.size() > static_cast<std::size_t>(kMaxVariables))
        throw InvalidArgument("point dimension must be in 1..10, got " + std::to_string(point.size()));
}

}  // namespace

bool all_finite(const Jet3& x) noexcept {
    return std::isfinite(x.value) && std::isfinite(x.d1) && std::isfinite(x.d2) && std::isfinite(x.d3);
}

bool all_finite(const HyperDual& x) noexcept {
    return std::isfinite(x.value) && std::isfinite(x.da) && std::isfinite(x.db) && std::isfinite(x.dab);
}

Jet3 elementary(Function fn, const Jet3& x) { return compose_with(x, elementary_derivatives(fn, x.value)); }
HyperDual elementary(Function fn, const HyperDual& x) { return compose_with(x, elementary_derivatives(fn, x.value)); }
Jet3 power(const Jet3& base, const Jet3& exponent) { return generic_power(base, exponent); }
HyperDual power(const HyperDual& base, const HyperDual& exponent) { return generic_power(base, exponent); }

Derivatives1d derivatives_1d(const Expression& f, double x0) {
    const Jet3 x = Jet3::variable(x0);
    const Jet3 r = f.evaluate<Jet3>(std::span<const Jet3>(&x, 1));
    return {r.value, r.d1, r.d2, r.d3};
}

double derivative(const Expression& f, double x0) {
    const HyperDual x(x0, 1.0, 0.0, 0.0);
    return f.evaluate<HyperDual>(std::span<const HyperDual>(&x, 1)).da;
}

std::vector<double> gradient(const Expression& g, std::span<const double> point) {
    require_dimension(point);
    std::vector<HyperDual> vars = seeded<HyperDual>(point);
    std::vector<double> grad(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) {
        vars[i].da = 1.0;
        grad[i] = g.evaluate<HyperDual>(vars).da;
        vars[i].da = 0.0;
    }
    return grad;
}

double laplacian(const Expression& g, std::span<const double> point) {
    require_dimension(point);
    std::vector<HyperDual> vars = seeded<HyperDual>(point);
    double sum = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        vars[i].da = 1.0;
        vars[i].db = 1.0;
        sum += g.evaluate<HyperDual>(vars).dab;
        vars[i].da = 0.0;
        vars[i].db = 0.0;
    }
    return sum;
}

void require_unit(std::span<const double> v) {
    double norm2 = 0.0;
    for (double c : v) norm2 += c * c;
    if (!(std::abs(std::sqrt(norm2) - 1.0) <= 1e-12))
        throw InvalidArgument("direction vector must have unit length (|v| = " + std::to_string(std::sqrt(norm2)) + ")");
}

double directional_derivative(const Expression& g, std::span<const double> point, std::span<const double> v) {
    require_dimension(point);
    if (v.size() != point.size()) throw InvalidArgument("direction and point dimensions differ");
    require_unit(v);
    std::vector<HyperDual> vars = seeded<HyperDual>(point);
    for (std::size_t i = 0; i < point.size(); ++i) vars[i].da = v[i];
    return g.evaluate<HyperDual>(vars).da;
}

}  // namespace mvlab
