#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mvlab/error.hpp"
#include "mvlab/expr.hpp"
#include "mvlab/random.hpp"

namespace mvlab {

/// Gauss-Legendre nodes and weights on [-1, 1]; exact for degree <= 2*size - 1.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(std::size_t nodes);

/// Composite Gauss-Legendre over `panels` equal panels.
template <class F>
double integrate_1d(F&& f, double a, double b, std::size_t panels = 64, std::size_t nodes = 16) {
    if (!(a < b)) throw InvalidArgument("integration bounds must satisfy a < b");
    if (panels == 0) throw InvalidArgument("panels must be positive");
    const GaussLegendreRule rule = gauss_legendre(nodes);
    const double width = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + width * static_cast<double>(p);
        const double mid = lo + 0.5 * width;
        double panel = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) panel += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
        total += 0.5 * width * panel;
    }
    return total;
}

double integrate_1d(const Expression& f, double a, double b, std::size_t panels = 64, std::size_t nodes = 16);

inline constexpr int kMaxDimension = 10;

/// The ball B_h(center) (or its boundary sphere) in R^n.
class BallSpec {
public:
    BallSpec(std::vector<double> center, double radius);

    const std::vector<double>& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    std::size_t dim() const noexcept { return center_.size(); }

private:
    std::vector<double> center_;
    double radius_;
};

double ball_volume(int n, double h);
/// Surface area of the sphere of radius h in R^n; n = 1 is rejected.
double sphere_area(int n, double h);

/// Writes a point uniform in the ball into `out` (size dim).
void sample_ball(const BallSpec& spec, CounterRng& rng, std::span<double> out);
/// Writes a point uniform on the sphere into `out` (size dim).
void sample_sphere(const BallSpec& spec, CounterRng& rng, std::span<double> out);

std::vector<double> sample_ball(const BallSpec& spec, CounterRng& rng);
std::vector<double> sample_sphere(const BallSpec& spec, CounterRng& rng);

/// Running (sum, sum of squares, count); merging is plain addition.
struct MomentSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;

    void add(double x) noexcept {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    void merge(const MomentSums& other) noexcept {
        sum += other.sum;
        sum_sq += other.sum_sq;
        count += other.count;
    }
};

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

McEstimate finish_estimate(const MomentSums& sums, std::uint64_t seed);

/// Samples per independently seeded chunk on the parallel path.
inline constexpr std::size_t kChunkSamples = 1 << 16;

/// threads == 1 draws every sample from a single stream keyed by `seed` and is
/// bit-reproducible. threads > 1 splits into chunks of kChunkSamples, chunk i
/// keyed by derive_seed(seed, i), merged in chunk order (reproducible for any
/// thread count, but not equal to the single-stream result).
McEstimate mc_ball_average(const Expression& g, const BallSpec& spec, std::size_t samples, std::uint64_t seed,
                           unsigned threads = 1);
McEstimate mc_sphere_average(const Expression& g, const BallSpec& spec, std::size_t samples, std::uint64_t seed,
                             unsigned threads = 1);

}  // namespace mvlab
