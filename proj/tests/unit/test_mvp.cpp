#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "corpus.hpp"
#include "mvlab/mvp.hpp"

using namespace mvlab;

namespace {

const Interval kDomain(-2.0, 2.0);

BallCheckOptions quick(std::uint64_t seed, std::size_t trials = 10) {
    BallCheckOptions o;
    o.trials = trials;
    o.samples = 20000;
    o.seed = seed;
    return o;
}

void expect_consistent(const PropertyVerdict& v) {
    EXPECT_EQ(v.holds, v.counterexamples.empty());
    EXPECT_EQ(v.holds, v.violations == 0);
    EXPECT_GE(v.worst_residual, 0.0);
    EXPECT_LE(v.counterexamples.size(), kMaxCounterexamples);
    EXPECT_EQ(v.trial_residuals.size(), v.trials);
}

}  // namespace

TEST(WeightSpec, Validation) {
    EXPECT_THROW(WeightSpec(0.0), InvalidArgument);
    EXPECT_THROW(WeightSpec(1.0), InvalidArgument);
    EXPECT_THROW(WeightSpec(0.5, {1, 1}), InvalidArgument);
    EXPECT_THROW(WeightSpec(0.5, {}), InvalidArgument);
    EXPECT_NO_THROW(WeightSpec(0.3, {0.6, 0.8}));
}

TEST(Box, Validation) {
    EXPECT_THROW(Box::cube(0, -1, 1), InvalidArgument);
    EXPECT_THROW(Box::cube(2, 1, 1), InvalidArgument);
    EXPECT_THROW(Box::cube(11, -1, 1), InvalidArgument);
    EXPECT_EQ(Box::cube(3, -1, 1).dim(), 3u);
}

TEST(SampleSubinterval, WidthsAndContainment) {
    CounterRng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const Interval iv = sample_subinterval(kDomain, rng);
        EXPECT_GE(iv.a(), -2.0);
        EXPECT_LE(iv.b(), 2.0 + 1e-15);
        EXPECT_GE(iv.width(), 0.04 * (1 - 1e-12));
        EXPECT_LE(iv.width(), 2.0 * (1 + 1e-12));
    }
}

TEST(CheckWeighted, Examples) {
    const PropertyVerdict quad = check_weighted_property(parse("1 + 3*x - 2*x^2"), 0.5, 200, kDomain, 1);
    EXPECT_TRUE(quad.holds);
    expect_consistent(quad);

    const PropertyVerdict cube = check_weighted_property(parse("x^3"), 0.5, 50, kDomain, 1);
    EXPECT_FALSE(cube.holds);
    expect_consistent(cube);
    const PropertyVerdict unit = check_weighted_property(parse("x^3"), 0.5, 1, Interval(0, 1), 3);
    EXPECT_FALSE(unit.holds);

    const PropertyVerdict lin = check_weighted_property(parse("2*x + 5"), 0.25, 200, kDomain, 1);
    EXPECT_TRUE(lin.holds);
}

TEST(CheckWeighted, ResidualOnUnitInterval) {
    // On [0, 1]: slope 1, f'(1/2) = 3/4, relative residual (1/4)/(1 + 1) = 1/8.
    const Expression f = parse("x^3");
    const double slope = average_slope(f, Interval(0, 1));
    EXPECT_EQ(slope, 1.0);
    EXPECT_NEAR(std::abs(slope - 3 * 0.25) / (1 + slope), 0.125, 1e-15);
}

TEST(CheckWeighted, Errors) {
    EXPECT_THROW(check_weighted_property(parse("x"), 0.5, 0, kDomain, 1), InvalidArgument);
    EXPECT_THROW(check_weighted_property(parse("x"), 1.5, 10, kDomain, 1), InvalidArgument);
    try {
        check_weighted_property(parse("log(x)"), 0.5, 10, kDomain, 1);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("[a, b]"), std::string::npos);
    }
}

TEST(CheckInterval, Examples) {
    EXPECT_TRUE(check_interval_mvp(parse("x^2"), 0.5, 100, kDomain, 2).holds);
    EXPECT_TRUE(check_interval_mvp(parse("7 - 4*x"), 0.2, 100, kDomain, 2).holds);
    EXPECT_TRUE(check_interval_mvp(parse("7 - 4*x"), 0.9, 100, kDomain, 2).holds);
    const PropertyVerdict v = check_interval_mvp(parse("exp(x)"), 0.5, 50, kDomain, 2);
    EXPECT_FALSE(v.holds);
    expect_consistent(v);
    // x = 0, h = 1: the average of exp over [-1, 1] is sinh(1), against exp(0) = 1.
    const double average = integrate_1d(parse("exp(x)"), -1, 1) / 2;
    EXPECT_NEAR(average, std::sinh(1.0), 1e-15);
    EXPECT_NEAR(std::abs(average - 1.0), 0.1752, 1e-4);
}

TEST(Property, MidpointIdentityNumericForm) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> coef(-3, 3);
    for (int i = 0; i < 10; ++i) {
        const double c0 = coef(rng), c1 = coef(rng);
        double c2 = coef(rng);
        if (std::abs(c2) < 0.2) c2 = 1.0;
        const Expression quad(make_binary(
            BinaryOp::Add, make_literal(c0),
            make_binary(BinaryOp::Add, make_binary(BinaryOp::Mul, make_literal(c1), parse("x").root_ptr()),
                        make_binary(BinaryOp::Mul, make_literal(c2), parse("x^2").root_ptr()))));
        const Expression affine(
            make_binary(BinaryOp::Add, make_literal(c0), make_binary(BinaryOp::Mul, make_literal(c1), parse("x").root_ptr())));
        EXPECT_TRUE(check_weighted_property(quad, 0.5, 50, kDomain, 100 + i).holds);
        EXPECT_FALSE(check_weighted_property(quad, 0.25, 50, kDomain, 100 + i).holds);
        EXPECT_FALSE(check_weighted_property(quad, 0.75, 50, kDomain, 100 + i).holds);
        for (double lambda : {0.1, 0.25, 0.5, 0.75, 0.9})
            EXPECT_TRUE(check_weighted_property(affine, lambda, 50, kDomain, 200 + i).holds);
    }
}

TEST(Property, WeightedAndIntervalFormsAgree) {
    for (const auto& c : oracle::smooth_corpus()) {
        const Expression f = parse(c.text);
        const Interval domain(c.lo, c.hi);
        for (double lambda : {0.25, 0.5, 0.8}) {
            const PropertyVerdict w = check_weighted_property(f, lambda, 30, domain, 5);
            const PropertyVerdict i = check_interval_mvp(f, lambda, 30, domain, 5);
            EXPECT_EQ(w.holds, i.holds) << c.text << " lambda=" << lambda;
            EXPECT_NEAR(w.worst_residual, i.worst_residual, 1e-6) << c.text;
        }
    }
}

TEST(CheckBall, Examples) {
    const Box box2 = Box::cube(2, -2, 2);
    const PropertyVerdict coord = check_ball_mvp(parse("x"), WeightSpec(0.3, {0, 1}), box2, quick(1));
    EXPECT_TRUE(coord.holds);
    expect_consistent(coord);

    const MeanValueTrial spot =
        ball_trial(parse("x^2 - y^2"), WeightSpec(0.3, {1, 0}), BallSpec({1, 2}, 0.5), 200000, 42);
    EXPECT_NEAR(spot.lhs, -2.56, 1e-14);
    EXPECT_NEAR(spot.residual, 0.44, std::max(0.01, 4 * spot.average.std_error));
    EXPECT_TRUE(spot.violated);

    EXPECT_TRUE(check_ball_mvp(parse("5"), WeightSpec(0.2, {0.6, 0.8}), box2, quick(2)).holds);
    EXPECT_TRUE(check_ball_mvp(parse("x^2 - y^2"), WeightSpec(0.5, {0, 1}), box2, quick(3)).holds);

    const PropertyVerdict bad = check_ball_mvp(parse("x^2 - y^2"), WeightSpec(0.3, {1, 0}), box2, quick(42, 20));
    EXPECT_FALSE(bad.holds);
    expect_consistent(bad);
}

TEST(CheckBall, Errors) {
    const Box box2 = Box::cube(2, -2, 2);
    auto o = quick(1);
    o.samples = 9999;
    EXPECT_THROW(check_ball_mvp(parse("x"), WeightSpec(0.3, {0, 1}), box2, o), InvalidArgument);
    EXPECT_THROW(check_ball_mvp(parse("x"), WeightSpec(0.3, {0, 0, 1}), box2, quick(1)), InvalidArgument);
    EXPECT_THROW(check_ball_mvp(parse("z"), WeightSpec(0.3, {0, 1}), box2, quick(1)), UnboundVariable);
    EXPECT_THROW(check_sphere_mvp(parse("x"), WeightSpec(0.3, {1}), Box::cube(1, -1, 1), quick(1)), InvalidArgument);
    try {
        check_ball_mvp(parse("log(x + 1)"), WeightSpec(0.5, {0, 1}), Box::cube(2, -2, 2), quick(1));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("while checking x = "), std::string::npos);
    }
}

TEST(CheckSphere, Examples) {
    const Box box2 = Box::cube(2, -2, 2);
    EXPECT_TRUE(check_sphere_mvp(parse("x^2 - y^2"), WeightSpec(0.5, {1, 0}), box2, quick(4)).holds);
    EXPECT_TRUE(check_sphere_mvp(parse("x"), WeightSpec(0.3, {0, 1}), box2, quick(5)).holds);
    const MeanValueTrial radial =
        sphere_trial(parse("x^2 + y^2"), WeightSpec(0.5, {1, 0}), BallSpec({0, 0}, 1), 20000, 6);
    EXPECT_EQ(radial.lhs, 0.0);
    EXPECT_NEAR(radial.average.estimate, 1.0, 1e-14);
    EXPECT_TRUE(radial.violated);
}

TEST(CheckHarmonicity, Examples) {
    const Box box2 = Box::cube(2, -2, 2);
    EXPECT_TRUE(check_harmonicity(parse("x^2 - y^2"), box2, 100, 1).holds);
    EXPECT_TRUE(check_harmonicity(parse("x^3 - 3*x*y^2"), box2, 100, 1).holds);
    const PropertyVerdict v = check_harmonicity(parse("x^2 + y^2"), box2, 100, 1);
    EXPECT_FALSE(v.holds);
    EXPECT_EQ(v.violations, 100u);
    EXPECT_EQ(v.counterexamples.size(), kMaxCounterexamples);
    EXPECT_EQ(v.worst_residual, 4.0);
}

TEST(CheckVConstancy, Examples) {
    const Box box2 = Box::cube(2, -2, 2);
    EXPECT_TRUE(check_v_constancy(parse("x"), {0, 1}, box2, 100, 1).holds);
    const PropertyVerdict lin = check_v_constancy(parse("x + y"), {0, 1}, box2, 100, 1);
    EXPECT_FALSE(lin.holds);
    EXPECT_NEAR(lin.worst_residual, 1.0, 1e-15);
    const double s = 1 / std::sqrt(2.0);
    EXPECT_FALSE(check_v_constancy(parse("x^2 - y^2"), {s, s}, box2, 100, 1).holds);
    EXPECT_THROW(check_v_constancy(parse("x"), {1, 1}, box2, 10, 1), InvalidArgument);
}

TEST(Builtins, Expansions) {
    EXPECT_EQ(builtin_field("harmonic2d_2", 2), parse("x^2 - y^2"));
    EXPECT_EQ(builtin_field("harmonic2d_3", 2), parse("x^3 - 3*x*y^2"));
    EXPECT_EQ(builtin_field("vconst_harmonic", 3), parse("x^2 - y^2"));
    EXPECT_EQ(builtin_field("coordinate_3", 4), parse("x3"));
    EXPECT_EQ(builtin_field("radial_sq", 2), parse("x1^2 + x2^2"));
    EXPECT_EQ(builtin_field("affine", 3), parse("1 + 1*x1 - 2*x2 + 3*x3"));
    for (const char* bad : {"harmonic2d_7", "harmonic2d_0", "nope", "coordinate_5", "harmonic2d_x"})
        EXPECT_THROW(builtin_field(bad, 4), InvalidArgument) << bad;
    EXPECT_THROW(builtin_field("vconst_harmonic", 2), InvalidArgument);
    EXPECT_FALSE(builtin_catalog().empty());
}

TEST(Builtins, HarmonicExpansionMatchesComplexPower) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 1; k <= 6; ++k) {
        const Expression g = builtin_field("harmonic2d_" + std::to_string(k), 2);
        for (int i = 0; i < 20; ++i) {
            const double x = u(rng), y = u(rng);
            const double want = std::pow(std::complex<double>(x, y), k).real();
            EXPECT_NEAR(g(std::vector<double>{x, y}), want, 1e-12 * (1 + std::abs(want))) << k;
        }
    }
}

TEST(Property, ConstantAlongVFamilyHolds) {
    struct Case {
        std::string name;
        int n;
        std::vector<double> v;
    };
    std::vector<Case> family{{"coordinate_1", 2, {0, 1}}};
    for (int k = 1; k <= 4; ++k) family.push_back({"vconst_harmonic_" + std::to_string(k), 3, {0, 0, 1}});
    for (const Case& c : family) {
        const Expression g = builtin_field(c.name, c.n);
        const Box box = Box::cube(static_cast<std::size_t>(c.n), -2, 2);
        for (double lambda : {0.3, 0.5, 0.7}) {
            const WeightSpec w(lambda, c.v);
            EXPECT_TRUE(check_ball_mvp(g, w, box, quick(31)).holds) << c.name << " " << lambda;
            EXPECT_TRUE(check_sphere_mvp(g, w, box, quick(32)).holds) << c.name << " " << lambda;
        }
        EXPECT_TRUE(check_harmonicity(g, box, 50, 33).holds) << c.name;
        EXPECT_TRUE(check_v_constancy(g, c.v, box, 50, 34).holds) << c.name;
    }
}

TEST(Property, HarmonicNotConstantAlongVNeedsMidpoint) {
    const Expression g = builtin_field("harmonic2d_2", 2);
    const Box box = Box::cube(2, -2, 2);
    EXPECT_FALSE(check_ball_mvp(g, WeightSpec(0.3, {1, 0}), box, quick(41)).holds);
    EXPECT_FALSE(check_ball_mvp(g, WeightSpec(0.7, {1, 0}), box, quick(41)).holds);
    EXPECT_TRUE(check_ball_mvp(g, WeightSpec(0.5, {1, 0}), box, quick(41)).holds);
}

TEST(Property, HalfWeightIgnoresDirection) {
    const Expression g = parse("x^3 - 3*x*y^2 + sin(x)");
    const Box box = Box::cube(2, -1, 1);
    const double s = 1 / std::sqrt(2.0);
    const PropertyVerdict a = check_ball_mvp(g, WeightSpec(0.5, {1, 0}), box, quick(51));
    const PropertyVerdict b = check_ball_mvp(g, WeightSpec(0.5, {s, -s}), box, quick(51));
    EXPECT_EQ(a.trial_residuals, b.trial_residuals);
}

TEST(Property, VerdictsAreReplayable) {
    const Expression g = parse("x^2 - y^2");
    const Box box = Box::cube(2, -2, 2);
    const PropertyVerdict a = check_sphere_mvp(g, WeightSpec(0.3, {1, 0}), box, quick(61));
    const PropertyVerdict b = check_sphere_mvp(g, WeightSpec(0.3, {1, 0}), box, quick(61));
    EXPECT_EQ(a.trial_residuals, b.trial_residuals);
    EXPECT_EQ(a.worst_case, b.worst_case);
}
