#include "mvlab/mvroot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvlab/calculus.hpp"

namespace mvlab {

Interval::Interval(double a, double b) : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("interval endpoints must be finite");
    if (!(a < b)) throw InvalidArgument("interval requires a < b");
}

double average_slope(const Expression& f, const Interval& iv) {
    const long double a = iv.a();
    const long double b = iv.b();
    const long double fa = f.evaluate<long double>(std::span<const long double>(&a, 1));
    const long double fb = f.evaluate<long double>(std::span<const long double>(&b, 1));
    return static_cast<double>((fb - fa) / (b - a));
}

LambdaOf lambda_of(double c, const Interval& iv) {
    if (!(c >= iv.a() && c <= iv.b())) throw InvalidArgument("abscissa lies outside [a, b]");
    const double lambda = (iv.b() - c) / iv.width();
    return {lambda, lambda > 0.0 && lambda < 1.0};
}

AbscissaResult find_abscissas(const Expression& f, const Interval& iv, std::size_t grid, double tol) {
    if (grid < 2) throw InvalidArgument("grid must have at least 2 cells");
    if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");

    AbscissaResult result{iv, 0.0, {}, {}, false};
    const double slope = average_slope(f, iv);
    result.average_slope = slope;
    auto phi = [&](double c) { return derivative(f, c) - slope; };

    const double a = iv.a(), b = iv.b(), width = iv.width();
    std::vector<double> xs(grid + 1), values(grid + 1);
    for (std::size_t j = 0; j <= grid; ++j) {
        xs[j] = j == grid ? b : a + width * static_cast<double>(j) / static_cast<double>(grid);
        values[j] = phi(xs[j]);
    }

    const double flat = tol * (1.0 + std::abs(slope));
    if (std::all_of(values.begin(), values.end(), [flat](double v) { return std::abs(v) <= flat; })) {
        result.degenerate = true;
        return result;
    }

    std::vector<double> roots;
    auto keep = [&](double c) {
        if (c > a && c < b) roots.push_back(c);
    };
    const double target_width = tol * width;
    for (std::size_t j = 0; j < grid; ++j) {
        const double v0 = values[j], v1 = values[j + 1];
        if (j > 0 && v0 == 0.0) keep(xs[j]);
        if (!((v0 < 0 && v1 > 0) || (v0 > 0 && v1 < 0))) continue;
        double lo = xs[j], hi = xs[j + 1], flo = v0;
        double root = std::numeric_limits<double>::quiet_NaN();
        while (hi - lo > target_width) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double fm = phi(mid);
            if (fm == 0.0) {
                root = mid;
                break;
            }
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        keep(std::isnan(root) ? 0.5 * (lo + hi) : root);
    }
    // Tangential contacts: an isolated near-zero minimum of |phi| with no sign change around it.
    for (std::size_t j = 1; j < grid; ++j) {
        const double vm = values[j - 1], v = values[j], vp = values[j + 1];
        if (v == 0.0 || std::abs(v) > flat) continue;
        const bool same_side = (vm > 0 && v > 0 && vp > 0) || (vm < 0 && v < 0 && vp < 0);
        if (same_side && std::abs(v) <= std::abs(vm) && std::abs(v) <= std::abs(vp)) keep(xs[j]);
    }

    std::sort(roots.begin(), roots.end());
    const double merge = 2.0 * tol * width;
    for (double c : roots) {
        if (result.abscissas.empty() || c - result.abscissas.back() > merge) result.abscissas.push_back(c);
    }
    if (result.abscissas.empty())
        throw NoRootFound("no mean value abscissa bracketed on a grid of " + std::to_string(grid) +
                          " cells; raise the grid resolution (--grid)");
    for (double c : result.abscissas) result.lambdas.push_back(lambda_of(c, iv).lambda);
    return result;
}

std::string_view to_string(SweepStatus status) noexcept {
    switch (status) {
        case SweepStatus::Ok: return "ok";
        case SweepStatus::Degenerate: return "degenerate";
        case SweepStatus::Failed: return "failed";
    }
    return "?";
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0) throw InvalidArgument("slope fit needs distinct abscissae");
    return sxy / sxx;
}

SweepResult sweep_lambda(const Expression& f, double x0, double h_min, double h_max, std::size_t steps,
                         std::size_t grid, double tol) {
    if (!(h_min > 0 && h_min < h_max) || !std::isfinite(h_max)) throw InvalidArgument("sweep requires 0 < h_min < h_max");
    if (steps < 4) throw InvalidArgument("sweep requires at least 4 steps");
    if (!std::isfinite(x0)) throw InvalidArgument("x0 must be finite");

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    SweepResult out;
    const double ratio = h_max / h_min;
    for (std::size_t i = 0; i < steps; ++i) {
        SweepRow row;
        row.h = i + 1 == steps ? h_max : h_min * std::pow(ratio, static_cast<double>(i) / static_cast<double>(steps - 1));
        try {
            const Interval iv(x0 - row.h, x0 + row.h);
            const AbscissaResult found = find_abscissas(f, iv, grid, tol);
            if (found.degenerate) {
                row.status = SweepStatus::Degenerate;
                row.c = row.lambda = row.abs_dev = nan;
            } else {
                std::size_t best = 0;
                for (std::size_t k = 1; k < found.abscissas.size(); ++k)
                    if (std::abs(found.abscissas[k] - x0) < std::abs(found.abscissas[best] - x0)) best = k;
                row.c = found.abscissas[best];
                row.lambda = found.lambdas[best];
                row.abs_dev = std::abs(row.lambda - 0.5);
            }
        } catch (const Error& e) {
            row.status = SweepStatus::Failed;
            row.c = row.lambda = row.abs_dev = nan;
            row.message = e.what();
        }
        out.rows.push_back(std::move(row));
    }

    std::vector<double> log_h, log_dev, log_offset;
    for (const SweepRow& row : out.rows) {
        if (row.status != SweepStatus::Ok || !(row.abs_dev > kSweepDeviationFloor)) continue;
        log_h.push_back(std::log(row.h));
        log_dev.push_back(std::log(row.abs_dev));
        log_offset.push_back(std::log(std::abs(row.c - x0)));
    }
    out.fitted_rows = log_h.size();
    if (log_h.size() >= 2) {
        out.lambda_order = fit_slope(log_h, log_dev);
        out.abscissa_order = fit_slope(log_h, log_offset);
    }
    return out;
}

}  // namespace mvlab
