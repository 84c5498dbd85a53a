#include "mvlab/mvp.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mvlab/calculus.hpp"

namespace mvlab {

WeightSpec::WeightSpec(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("lambda must lie in (0,1)");
}

WeightSpec::WeightSpec(double lambda, std::vector<double> v) : WeightSpec(lambda) {
    if (v.empty() || v.size() > static_cast<std::size_t>(kMaxVariables))
        throw InvalidArgument("direction dimension must be in 1..10");
    require_unit(v);
    v_ = std::move(v);
}

Box Box::cube(std::size_t n, double lo, double hi) {
    Box box{std::vector<double>(n, lo), std::vector<double>(n, hi)};
    box.validate();
    return box;
}

void Box::validate() const {
    if (lo.empty() || lo.size() != hi.size() || lo.size() > static_cast<std::size_t>(kMaxVariables))
        throw InvalidArgument("box dimension must be in 1..10");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i]))
            throw InvalidArgument("box bounds must be finite with lo < hi");
}

namespace {

std::string format_point(std::span<const double> p) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ')';
    return os.str();
}

std::string format_number(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

class VerdictBuilder {
public:
    VerdictBuilder(std::string property, double tolerance, std::uint64_t seed) {
        verdict_.property = std::move(property);
        verdict_.tolerance = tolerance;
        verdict_.seed = seed;
    }

    void record(const std::string& where, double lhs, double rhs, double residual, double threshold) {
        ++verdict_.trials;
        verdict_.trial_residuals.push_back(residual);
        if (verdict_.trials == 1 || residual > verdict_.worst_residual) {
            verdict_.worst_residual = residual;
            verdict_.worst_case = where;
        }
        if (residual > threshold) {
            ++verdict_.violations;
            verdict_.holds = false;
            if (verdict_.counterexamples.size() < kMaxCounterexamples)
                verdict_.counterexamples.push_back({where, lhs, rhs, residual, threshold});
        }
    }

    PropertyVerdict finish() { return std::move(verdict_); }

private:
    PropertyVerdict verdict_;
};

void require_trials(std::size_t trials) {
    if (trials < 1) throw InvalidArgument("at least one trial is required");
}

std::string interval_text(const Interval& iv) {
    return "[a, b] = [" + format_number(iv.a()) + ", " + format_number(iv.b()) + "]";
}

template <class Fn>
auto with_context(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const DomainError& e) {
        throw e.with_context("while checking " + where);
    }
}

}  // namespace

Interval sample_subinterval(const Interval& domain, CounterRng& rng) {
    const double w = domain.width();
    const double width = w * (0.01 + 0.49 * rng.uniform());
    const double a = domain.a() + (w - width) * rng.uniform();
    return Interval(a, a + width);
}

PropertyVerdict check_weighted_property(const Expression& f, double lambda, std::size_t trials, const Interval& domain,
                                        std::uint64_t seed, double tol) {
    require_trials(trials);
    const WeightSpec w(lambda);
    CounterRng rng(seed);
    VerdictBuilder out("weighted_mean_value", tol, seed);
    for (std::size_t t = 0; t < trials; ++t) {
        const Interval iv = sample_subinterval(domain, rng);
        const std::string where = interval_text(iv);
        with_context(where, [&] {
            const double slope = average_slope(f, iv);
            const double c = w.lambda() * iv.a() + (1.0 - w.lambda()) * iv.b();
            const double fprime = derivative(f, c);
            out.record(where, slope, fprime, std::abs(slope - fprime) / (1.0 + std::abs(slope)), tol);
            return 0;
        });
    }
    return out.finish();
}

PropertyVerdict check_interval_mvp(const Expression& f, double lambda, std::size_t trials, const Interval& domain,
                                   std::uint64_t seed, double tol) {
    require_trials(trials);
    const WeightSpec w(lambda);
    CounterRng rng(seed);
    VerdictBuilder out("interval_mean_value", tol, seed);
    auto fprime = [&f](double t) { return derivative(f, t); };
    for (std::size_t t = 0; t < trials; ++t) {
        const Interval iv = sample_subinterval(domain, rng);
        const double x = iv.midpoint();
        const double h = 0.5 * iv.width();
        const std::string where = "x = " + format_number(x) + ", h = " + format_number(h);
        with_context(where, [&] {
            const double lhs = fprime(x + (1.0 - 2.0 * w.lambda()) * h);
            const double average = integrate_1d(fprime, x - h, x + h) / (2.0 * h);
            out.record(where, lhs, average, std::abs(average - lhs) / (1.0 + std::abs(average)), tol);
            return 0;
        });
    }
    return out.finish();
}

namespace {

using Averager = McEstimate (*)(const Expression&, const BallSpec&, std::size_t, std::uint64_t, unsigned);

MeanValueTrial run_trial(const Expression& g, const WeightSpec& w, const BallSpec& ball, std::size_t samples,
                         std::uint64_t seed, double tol_abs, unsigned threads, Averager average) {
    if (w.direction().size() != ball.dim()) throw InvalidArgument("direction and ball dimensions differ");
    MeanValueTrial trial;
    const double shift = (1.0 - 2.0 * w.lambda()) * ball.radius();
    trial.shifted_point.resize(ball.dim());
    for (std::size_t i = 0; i < ball.dim(); ++i) trial.shifted_point[i] = ball.center()[i] + shift * w.direction()[i];
    trial.lhs = g.evaluate<double>(trial.shifted_point);
    trial.average = average(g, ball, samples, seed, threads);
    trial.residual = std::abs(trial.lhs - trial.average.estimate);
    trial.threshold = std::max(tol_abs, kStderrMultiplier * trial.average.std_error);
    trial.violated = trial.residual > trial.threshold;
    return trial;
}

PropertyVerdict check_mvp(const Expression& g, const WeightSpec& w, const Box& box, const BallCheckOptions& options,
                          const char* property, Averager average) {
    box.validate();
    require_trials(options.trials);
    if (options.samples < kMinBallSamples) throw InvalidArgument("ball/sphere checks need at least 10^4 samples per trial");
    if (w.direction().size() != box.dim()) throw InvalidArgument("direction and box dimensions differ");
    if (!(options.radius_min > 0 && options.radius_min <= options.radius_max) || !std::isfinite(options.radius_max))
        throw InvalidArgument("radius range must satisfy 0 < radius_min <= radius_max");
    if (g.max_variable() > static_cast<int>(box.dim())) throw UnboundVariable(g.max_variable());

    CounterRng rng(options.seed);
    VerdictBuilder out(property, options.tol_abs, options.seed);
    std::vector<double> center(box.dim());
    for (std::size_t t = 0; t < options.trials; ++t) {
        for (std::size_t i = 0; i < box.dim(); ++i) center[i] = rng.uniform(box.lo[i], box.hi[i]);
        const double radius = rng.uniform(options.radius_min, options.radius_max);
        const BallSpec ball(center, radius);
        const std::string where = "x = " + format_point(center) + ", h = " + format_number(radius);
        const MeanValueTrial trial = with_context(where, [&] {
            return run_trial(g, w, ball, options.samples, derive_seed(options.seed, t + 1), options.tol_abs,
                             options.threads, average);
        });
        out.record(where, trial.lhs, trial.average.estimate, trial.residual, trial.threshold);
    }
    return out.finish();
}

}  // namespace

MeanValueTrial ball_trial(const Expression& g, const WeightSpec& w, const BallSpec& ball, std::size_t samples,
                          std::uint64_t seed, double tol_abs, unsigned threads) {
    return run_trial(g, w, ball, samples, seed, tol_abs, threads, &mc_ball_average);
}

MeanValueTrial sphere_trial(const Expression& g, const WeightSpec& w, const BallSpec& ball, std::size_t samples,
                            std::uint64_t seed, double tol_abs, unsigned threads) {
    return run_trial(g, w, ball, samples, seed, tol_abs, threads, &mc_sphere_average);
}

PropertyVerdict check_ball_mvp(const Expression& g, const WeightSpec& w, const Box& box, const BallCheckOptions& options) {
    return check_mvp(g, w, box, options, "ball_mean_value", &mc_ball_average);
}

PropertyVerdict check_sphere_mvp(const Expression& g, const WeightSpec& w, const Box& box,
                                 const BallCheckOptions& options) {
    if (box.dim() < 2) throw InvalidArgument("sphere checks need dimension >= 2");
    return check_mvp(g, w, box, options, "sphere_mean_value", &mc_sphere_average);
}

PropertyVerdict check_harmonicity(const Expression& g, const Box& box, std::size_t points, std::uint64_t seed,
                                  double tol) {
    box.validate();
    require_trials(points);
    CounterRng rng(seed);
    VerdictBuilder out("harmonicity", tol, seed);
    std::vector<double> x(box.dim());
    for (std::size_t t = 0; t < points; ++t) {
        for (std::size_t i = 0; i < box.dim(); ++i) x[i] = rng.uniform(box.lo[i], box.hi[i]);
        const std::string where = "x = " + format_point(x);
        with_context(where, [&] {
            const double lap = laplacian(g, x);
            const double value = g.evaluate<double>(x);
            out.record(where, lap, 0.0, std::abs(lap), tol * (1.0 + std::abs(value)));
            return 0;
        });
    }
    return out.finish();
}

PropertyVerdict check_v_constancy(const Expression& g, const std::vector<double>& v, const Box& box, std::size_t points,
                                  std::uint64_t seed, double tol) {
    box.validate();
    require_trials(points);
    if (v.size() != box.dim()) throw InvalidArgument("direction and box dimensions differ");
    require_unit(v);
    CounterRng rng(seed);
    VerdictBuilder out("v_constancy", tol, seed);
    std::vector<double> x(box.dim());
    for (std::size_t t = 0; t < points; ++t) {
        for (std::size_t i = 0; i < box.dim(); ++i) x[i] = rng.uniform(box.lo[i], box.hi[i]);
        const std::string where = "x = " + format_point(x);
        with_context(where, [&] {
            const double dv = directional_derivative(g, x, v);
            out.record(where, dv, 0.0, std::abs(dv), tol);
            return 0;
        });
    }
    return out.finish();
}

// ---------------------------------------------------------------------------
// Built-in fields

namespace {

constexpr int kMaxHarmonicDegree = 6;

std::string monomial(const char* var, int power) {
    if (power == 0) return "";
    if (power == 1) return var;
    return std::string(var) + "^" + std::to_string(power);
}

/// Re (x + iy)^k = sum over even j of C(k, j) (-1)^(j/2) x^(k-j) y^j.
std::string harmonic_polynomial_text(int k) {
    std::string out;
    long long binomial = 1;
    for (int j = 0; j <= k; ++j) {
        if (j % 2 == 0) {
            const bool negative = (j / 2) % 2 == 1;
            std::string term;
            if (binomial != 1) term = std::to_string(binomial);
            for (const std::string& factor : {monomial("x", k - j), monomial("y", j)}) {
                if (factor.empty()) continue;
                if (!term.empty()) term += "*";
                term += factor;
            }
            if (out.empty())
                out = negative ? "-" + term : term;
            else
                out += (negative ? " - " : " + ") + term;
        }
        binomial = binomial * (k - j) / (j + 1);
    }
    return out;
}

int parse_suffix(const std::string& name, std::size_t prefix_len) {
    int value = 0;
    const char* begin = name.data() + prefix_len;
    const char* end = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (begin == end || ec != std::errc{} || ptr != end) throw InvalidArgument("unknown builtin field '" + name + "'");
    return value;
}

void require_dim(const std::string& name, int n, int min_dim) {
    if (n < min_dim || n > kMaxVariables)
        throw InvalidArgument("builtin '" + name + "' needs dimension " + std::to_string(min_dim) + "..10, got " +
                              std::to_string(n));
}

int harmonic_degree(const std::string& name, int k) {
    if (k < 1 || k > kMaxHarmonicDegree) throw InvalidArgument("builtin '" + name + "': degree must be in 1..6");
    return k;
}

}  // namespace

std::vector<BuiltinInfo> builtin_catalog() {
    return {
        {"harmonic2d_k", "Re (x + iy)^k for k = 1..6, harmonic in (x1, x2)", 2},
        {"coordinate_i", "the coordinate x_i", 1},
        {"radial_sq", "sum of x_i^2 (Laplacian 2n, not harmonic)", 1},
        {"vconst_harmonic", "harmonic2d_2 lifted to n >= 3, constant along x3..xn", 3},
        {"vconst_harmonic_k", "harmonic2d_k lifted to n >= 3, constant along x3..xn", 3},
        {"affine", "1 + x1 - 2*x2 + 3*x3 - ... up to x_n", 1},
    };
}

Expression builtin_field(const std::string& name, int n) {
    static const std::string kHarmonic = "harmonic2d_";
    static const std::string kCoordinate = "coordinate_";
    static const std::string kVconst = "vconst_harmonic";

    if (name.rfind(kHarmonic, 0) == 0) {
        require_dim(name, n, 2);
        return parse(harmonic_polynomial_text(harmonic_degree(name, parse_suffix(name, kHarmonic.size()))));
    }
    if (name.rfind(kCoordinate, 0) == 0) {
        require_dim(name, n, 1);
        const int i = parse_suffix(name, kCoordinate.size());
        if (i < 1 || i > n) throw InvalidArgument("builtin '" + name + "': index outside 1.." + std::to_string(n));
        return Expression(make_variable(i));
    }
    if (name == kVconst || name.rfind(kVconst + "_", 0) == 0) {
        require_dim(name, n, 3);
        const int k = name == kVconst ? 2 : harmonic_degree(name, parse_suffix(name, kVconst.size() + 1));
        return parse(harmonic_polynomial_text(k));
    }
    if (name == "radial_sq") {
        require_dim(name, n, 1);
        std::string text;
        for (int i = 1; i <= n; ++i) text += (i > 1 ? " + x" : "x") + std::to_string(i) + "^2";
        return parse(text);
    }
    if (name == "affine") {
        require_dim(name, n, 1);
        std::string text = "1";
        for (int i = 1; i <= n; ++i) text += (i % 2 == 1 ? " + " : " - ") + std::to_string(i) + "*x" + std::to_string(i);
        return parse(text);
    }
    throw InvalidArgument("unknown builtin field '" + name + "'");
}

}  // namespace mvlab
