#include "mvlab/integrate.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

namespace mvlab {

std::uint64_t parse_seed(std::string_view text) {
    int base = 10;
    std::string_view digits = text;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
        base = 16;
        digits.remove_prefix(2);
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size())
        throw InvalidArgument("malformed seed '" + std::string(text) + "'");
    return value;
}

GaussLegendreRule gauss_legendre(std::size_t n) {
    if (n == 0 || n > 256) throw InvalidArgument("Gauss-Legendre node count must be in 1..256");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Three-term recurrence for P_n(x) and its derivative.
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 4e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = pk;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

double integrate_1d(const Expression& f, double a, double b, std::size_t panels, std::size_t nodes) {
    return integrate_1d([&f](double x) { return f(x); }, a, b, panels, nodes);
}

BallSpec::BallSpec(std::vector<double> center, double radius) : center_(std::move(center)), radius_(radius) {
    if (center_.empty() || center_.size() > static_cast<std::size_t>(kMaxDimension))
        throw InvalidArgument("ball dimension must be in 1..10");
    if (!(radius_ > 0) || !std::isfinite(radius_)) throw InvalidArgument("ball radius must be positive and finite");
    for (double c : center_)
        if (!std::isfinite(c)) throw InvalidArgument("ball center must be finite");
}

double ball_volume(int n, double h) {
    if (n < 1 || n > kMaxDimension) throw InvalidArgument("dimension must be in 1..10, got " + std::to_string(n));
    if (!(h > 0)) throw InvalidArgument("radius must be positive");
    double v = (n % 2 == 1) ? 2.0 * h : std::numbers::pi * h * h;
    for (int k = (n % 2 == 1) ? 3 : 4; k <= n; k += 2) v *= 2.0 * std::numbers::pi * h * h / k;
    return v;
}

double sphere_area(int n, double h) {
    if (n < 2 || n > kMaxDimension)
        throw InvalidArgument("sphere dimension must be in 2..10, got " + std::to_string(n));
    return n * ball_volume(n, h) / h;
}

namespace {

void gaussian_direction(CounterRng& rng, std::span<double> out) {
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (double& x : out) {
            x = rng.normal();
            norm2 += x * x;
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : out) x *= inv;
}

void require_size(const BallSpec& spec, std::span<double> out) {
    if (out.size() != spec.dim()) throw InvalidArgument("output span does not match ball dimension");
}

}  // namespace

void sample_ball(const BallSpec& spec, CounterRng& rng, std::span<double> out) {
    require_size(spec, out);
    gaussian_direction(rng, out);
    const double r = spec.radius() * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(spec.dim()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = spec.center()[i] + r * out[i];
}

void sample_sphere(const BallSpec& spec, CounterRng& rng, std::span<double> out) {
    require_size(spec, out);
    gaussian_direction(rng, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = spec.center()[i] + spec.radius() * out[i];
}

std::vector<double> sample_ball(const BallSpec& spec, CounterRng& rng) {
    std::vector<double> p(spec.dim());
    sample_ball(spec, rng, p);
    return p;
}

std::vector<double> sample_sphere(const BallSpec& spec, CounterRng& rng) {
    std::vector<double> p(spec.dim());
    sample_sphere(spec, rng, p);
    return p;
}

McEstimate finish_estimate(const MomentSums& sums, std::uint64_t seed) {
    McEstimate e;
    e.samples = sums.count;
    e.seed = seed;
    const double n = static_cast<double>(sums.count);
    e.estimate = sums.sum / n;
    const double variance = std::max(0.0, (sums.sum_sq - sums.sum * sums.sum / n) / (n - 1.0));
    e.std_error = std::sqrt(variance / n);
    return e;
}

namespace {

using Sampler = void (*)(const BallSpec&, CounterRng&, std::span<double>);

std::string format_point(std::span<const double> p) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ')';
    return os.str();
}

MomentSums accumulate(const Expression& g, const BallSpec& spec, std::size_t samples, CounterRng rng, Sampler sample) {
    std::vector<double> point(spec.dim());
    MomentSums sums;
    for (std::size_t i = 0; i < samples; ++i) {
        sample(spec, rng, point);
        try {
            sums.add(g.evaluate<double>(point));
        } catch (const DomainError& e) {
            throw e.with_context("at sampled point " + format_point(point));
        }
    }
    return sums;
}

McEstimate mc_average(const Expression& g, const BallSpec& spec, std::size_t samples, std::uint64_t seed,
                      unsigned threads, Sampler sample) {
    if (samples < 1000) throw InvalidArgument("Monte Carlo averages need at least 1000 samples");
    if (g.max_variable() > static_cast<int>(spec.dim())) throw UnboundVariable(g.max_variable());
    if (threads <= 1) return finish_estimate(accumulate(g, spec, samples, CounterRng(seed), sample), seed);

    const std::size_t chunks = (samples + kChunkSamples - 1) / kChunkSamples;
    std::vector<MomentSums> partial(chunks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t c = next++; c < chunks; c = next++) {
            const std::size_t count = std::min(kChunkSamples, samples - c * kChunkSamples);
            try {
                partial[c] = accumulate(g, spec, count, CounterRng(derive_seed(seed, c)), sample);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    MomentSums total;
    for (const auto& p : partial) total.merge(p);
    return finish_estimate(total, seed);
}

}  // namespace

McEstimate mc_ball_average(const Expression& g, const BallSpec& spec, std::size_t samples, std::uint64_t seed,
                           unsigned threads) {
    return mc_average(g, spec, samples, seed, threads, &sample_ball);
}

McEstimate mc_sphere_average(const Expression& g, const BallSpec& spec, std::size_t samples, std::uint64_t seed,
                             unsigned threads) {
    if (spec.dim() < 2) throw InvalidArgument("sphere averages need dimension >= 2");
    return mc_average(g, spec, samples, seed, threads, &sample_sphere);
}

}  // namespace mvlab
