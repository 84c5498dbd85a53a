#pragma once

// Randomized checkers for the (weighted) mean value properties.
//
// One dimension, for an interval [a, b] and weight lambda in (0, 1):
//   (f(b) - f(a)) / (b - a) = f'(lambda*a + (1 - lambda)*b)
// and its integral form with x = (a + b)/2, h = (b - a)/2:
//   f'(x + (1 - 2 lambda) h) = 1/(2h) * integral of f' over [x - h, x + h].
//
// n dimensions, for a unit direction v:
//   g(x + (1 - 2 lambda) h v) = average of g over the ball (or sphere) B_h(x).
//
// The checkers are falsifiers: "holds" means no violation was found at the
// tested scale and tolerance. Only exactpoly proves anything.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mvlab/expr.hpp"
#include "mvlab/integrate.hpp"
#include "mvlab/mvroot.hpp"

namespace mvlab {

class WeightSpec {
public:
    /// 1-D weight (no direction).
    explicit WeightSpec(double lambda);
    /// n-D weight; v must have unit length within 1e-12.
    WeightSpec(double lambda, std::vector<double> v);

    double lambda() const noexcept { return lambda_; }
    const std::vector<double>& direction() const noexcept { return v_; }

private:
    double lambda_;
    std::vector<double> v_;
};

/// Axis-aligned box of centers/points in R^n.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    static Box cube(std::size_t n, double lo, double hi);
    std::size_t dim() const noexcept { return lo.size(); }
    void validate() const;
};

struct Counterexample {
    std::string where;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double threshold = 0.0;
};

inline constexpr std::size_t kMaxCounterexamples = 10;
inline constexpr const char* kHoldsScope = "holds at tested scale/tolerance; randomized checks falsify, they do not prove";

struct PropertyVerdict {
    std::string property;
    bool holds = true;
    std::size_t trials = 0;
    std::size_t violations = 0;
    double worst_residual = 0.0;
    std::string worst_case;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    /// First kMaxCounterexamples violations.
    std::vector<Counterexample> counterexamples;
    /// Residual of every trial, in trial order.
    std::vector<double> trial_residuals;
};

inline constexpr double kWeightedTolerance = 1e-9;
inline constexpr double kIntervalTolerance = 1e-8;
inline constexpr double kPointwiseTolerance = 1e-8;
inline constexpr double kBallAbsTolerance = 1e-9;
/// A Monte Carlo trial violates when |lhs - average| exceeds max(tol_abs, kStderrMultiplier * stderr).
inline constexpr double kStderrMultiplier = 4.0;

/// Random sub-interval of `domain` with width between 1% and 50% of the domain.
Interval sample_subinterval(const Interval& domain, CounterRng& rng);

/// Residual |slope - f'(lambda*a + (1-lambda)*b)| / (1 + |slope|) over random intervals.
PropertyVerdict check_weighted_property(const Expression& f, double lambda, std::size_t trials, const Interval& domain,
                                        std::uint64_t seed, double tol = kWeightedTolerance);

/// Integral form on the same random intervals as check_weighted_property for the same seed.
PropertyVerdict check_interval_mvp(const Expression& f, double lambda, std::size_t trials, const Interval& domain,
                                   std::uint64_t seed, double tol = kIntervalTolerance);

struct BallCheckOptions {
    std::size_t trials = 20;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    double tol_abs = kBallAbsTolerance;
    double radius_min = 0.1;
    double radius_max = 1.0;
    unsigned threads = 1;
};

inline constexpr std::size_t kMinBallSamples = 10000;

/// One (center, h) comparison of g at the shifted point against a Monte Carlo average.
struct MeanValueTrial {
    std::vector<double> shifted_point;
    double lhs = 0.0;
    McEstimate average;
    double residual = 0.0;
    double threshold = 0.0;
    bool violated = false;
};

MeanValueTrial ball_trial(const Expression& g, const WeightSpec& w, const BallSpec& ball, std::size_t samples,
                          std::uint64_t seed, double tol_abs = kBallAbsTolerance, unsigned threads = 1);
MeanValueTrial sphere_trial(const Expression& g, const WeightSpec& w, const BallSpec& ball, std::size_t samples,
                            std::uint64_t seed, double tol_abs = kBallAbsTolerance, unsigned threads = 1);

/// Centers uniform in `box`, radii uniform in [radius_min, radius_max]; trial t
/// samples with derive_seed(seed, t + 1).
PropertyVerdict check_ball_mvp(const Expression& g, const WeightSpec& w, const Box& box, const BallCheckOptions& options);
/// As check_ball_mvp with sphere averages; needs n >= 2.
PropertyVerdict check_sphere_mvp(const Expression& g, const WeightSpec& w, const Box& box,
                                 const BallCheckOptions& options);

/// Violation when |laplacian g| > tol * (1 + |g|) at a random point of `box`.
PropertyVerdict check_harmonicity(const Expression& g, const Box& box, std::size_t points, std::uint64_t seed,
                                  double tol = kPointwiseTolerance);

/// Violation when |dg/dv| > tol at a random point of `box`.
PropertyVerdict check_v_constancy(const Expression& g, const std::vector<double>& v, const Box& box, std::size_t points,
                                  std::uint64_t seed, double tol = kPointwiseTolerance);

struct BuiltinInfo {
    std::string name;
    std::string description;
    int min_dim;
};

/// Catalog of the built-in fields and their naming patterns.
std::vector<BuiltinInfo> builtin_catalog();

/// harmonic2d_k (k = 1..6): Re (x + iy)^k. coordinate_i: x_i. radial_sq: sum of x_i^2.
/// vconst_harmonic[_k]: harmonic2d_k (default k = 2) in (x1, x2), needs n >= 3 and is
/// constant along x3..xn. affine: 1 + sum (-1)^(i+1) i x_i.
Expression builtin_field(const std::string& name, int n);

}  // namespace mvlab
