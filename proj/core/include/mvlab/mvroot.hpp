#pragma once

// Mean value abscissas: points c in (a, b) with f'(c) = (f(b) - f(a)) / (b - a),
// and their weights lambda = (b - c) / (b - a), so that c = lambda*a + (1 - lambda)*b.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mvlab/expr.hpp"

namespace mvlab {

/// A finite interval [a, b] with a < b.
class Interval {
public:
    Interval(double a, double b);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double width() const noexcept { return b_ - a_; }
    double midpoint() const noexcept { return 0.5 * (a_ + b_); }

private:
    double a_;
    double b_;
};

/// Secant slope (f(b) - f(a)) / (b - a). The endpoint values are computed in
/// extended precision before the subtraction.
double average_slope(const Expression& f, const Interval& iv);

struct LambdaOf {
    double lambda;
    /// False when c sits on an endpoint (lambda is 0 or 1).
    bool interior;
};

/// lambda = (b - c) / (b - a); throws InvalidArgument for c outside [a, b].
LambdaOf lambda_of(double c, const Interval& iv);

struct AbscissaResult {
    Interval interval;
    double average_slope = 0.0;
    std::vector<double> abscissas;
    std::vector<double> lambdas;
    /// f' equals the secant slope at every grid point; abscissas is then empty.
    bool degenerate = false;
};

inline constexpr std::size_t kDefaultGrid = 1024;
inline constexpr double kDefaultRootTolerance = 1e-12;

/// Sign-change scan of phi(c) = f'(c) - slope over `grid` uniform cells, each
/// bracket refined by bisection to width <= tol * (b - a). Throws NoRootFound when
/// nothing is bracketed and f' is not constant.
AbscissaResult find_abscissas(const Expression& f, const Interval& iv, std::size_t grid = kDefaultGrid,
                              double tol = kDefaultRootTolerance);

enum class SweepStatus { Ok, Degenerate, Failed };

std::string_view to_string(SweepStatus status) noexcept;

struct SweepRow {
    double h = 0.0;
    /// Abscissa nearest the midpoint x0; NaN unless status is Ok.
    double c = 0.0;
    double lambda = 0.0;
    /// |lambda - 1/2|.
    double abs_dev = 0.0;
    SweepStatus status = SweepStatus::Ok;
    std::string message;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// Least-squares slope of log|lambda - 1/2| against log h; nullopt when every
    /// deviation is at or below kSweepDeviationFloor.
    std::optional<double> lambda_order;
    /// Least-squares slope of log|c - x0| against log h over the same rows.
    /// Since |c - x0| = 2h |lambda - 1/2| this is lambda_order + 1.
    std::optional<double> abscissa_order;
    std::size_t fitted_rows = 0;
};

inline constexpr double kSweepDeviationFloor = 1e-13;

/// Abscissas of f on [x0 - h, x0 + h] for `steps` geometrically spaced h in [h_min, h_max].
SweepResult sweep_lambda(const Expression& f, double x0, double h_min, double h_max, std::size_t steps,
                         std::size_t grid = kDefaultGrid, double tol = kDefaultRootTolerance);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mvlab
