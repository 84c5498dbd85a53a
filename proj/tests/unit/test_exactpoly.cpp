#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mvlab/error.hpp"
#include "mvlab/exactpoly.hpp"

using namespace mvlab;

namespace {

Rational q(long long p, long long d = 1) { return Rational(p) / Rational(d); }

Rational random_rational(std::mt19937_64& rng, bool nonzero = false) {
    std::uniform_int_distribution<long long> num(-50, 50), den(1, 12);
    while (true) {
        const Rational r = q(num(rng), den(rng));
        if (!nonzero || r != 0) return r;
    }
}

RationalPolynomial random_poly(std::mt19937_64& rng, std::size_t degree) {
    std::vector<Rational> c(degree + 1);
    for (auto& x : c) x = random_rational(rng);
    c.back() = random_rational(rng, true);
    return poly_from_coeffs(c);
}

// Independent oracle: Horner evaluation of p and p' from the raw coefficient list.
Rational horner(const std::vector<Rational>& c, const Rational& x) {
    Rational acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Rational direct_residual(const std::vector<Rational>& c, const Rational& lambda, const Rational& a, const Rational& b) {
    std::vector<Rational> dc;
    for (std::size_t i = 1; i < c.size(); ++i) dc.push_back(Rational(static_cast<long long>(i)) * c[i]);
    return horner(c, b) - horner(c, a) - (b - a) * horner(dc, lambda * a + (1 - lambda) * b);
}

bool dichotomy_predicts_satisfies(std::optional<std::size_t> degree, const Rational& lambda) {
    const std::size_t d = degree.value_or(0);
    return d <= 1 || (d == 2 && lambda == q(1, 2));
}

}  // namespace

TEST(Rationals, Parse) {
    EXPECT_EQ(parse_rational("3/6"), q(1, 2));
    EXPECT_EQ(parse_rational("-7"), q(-7));
    EXPECT_EQ(parse_rational("0.3"), q(3, 10));
    EXPECT_EQ(parse_rational("-2.5e-1"), q(-1, 4));
    EXPECT_EQ(parse_rational("4/-8"), q(-1, 2));
    EXPECT_EQ(to_string(q(6, -4)), "-3/2");
    for (const char* bad : {"", "1/0", "abc", "1/2/3", "0x10", "1.2.3", "/3"})
        EXPECT_THROW(parse_rational(bad), InvalidArgument) << bad;
}

TEST(PolyFromCoeffs, Examples) {
    const RationalPolynomial p = poly_from_coeffs({1, 2, 3});
    EXPECT_EQ(p.degree(), 2u);
    EXPECT_EQ(p.to_string(), "3*x^2 + 2*x + 1");
    const RationalPolynomial z = poly_from_coeffs({0, 0});
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.degree(), std::nullopt);
    const RationalPolynomial r = poly_from_coeffs({q(2, 4), q(-1, 3)});
    EXPECT_EQ(r.coefficient(0), q(1, 2));
    EXPECT_EQ(r.coefficient(1), q(-1, 3));
    EXPECT_EQ(r.to_string(), "-1/3*x + 1/2");
    EXPECT_THROW(poly_from_coeffs({}), InvalidArgument);
}

TEST(PolyArithmetic, RingOperations) {
    const auto p = poly_from_coeffs({1, 1});
    const auto sq = p * p;
    EXPECT_EQ(sq, poly_from_coeffs({1, 2, 1}));
    EXPECT_EQ(sq - sq, RationalPolynomial());
    EXPECT_EQ(sq.derivative(), poly_from_coeffs({2, 2}));
    EXPECT_EQ(sq(q(1, 2)), q(9, 4));
    EXPECT_EQ(q(2) * p, poly_from_coeffs({2, 2}));
}

TEST(MvtResidual, QuadraticsAtMidpointVanish) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const MvtResidual r = mvt_residual(random_poly(rng, 2), q(1, 2));
        EXPECT_TRUE(r.is_identically_zero);
        EXPECT_TRUE(r.residual.is_zero());
        EXPECT_EQ(r.display(), "0");
    }
}

TEST(MvtResidual, CubicAtMidpoint) {
    const MvtResidual r = mvt_residual(poly_from_coeffs({0, 0, 0, 1}), q(1, 2));
    EXPECT_FALSE(r.is_identically_zero);
    // b^3 - a^3 - 3(b - a)((a + b)/2)^2 = (b - a)^3 / 4
    EXPECT_EQ(r.residual.coefficient(0, 3), q(1, 4));
    EXPECT_EQ(r.residual.coefficient(1, 2), q(-3, 4));
    EXPECT_EQ(r.residual.coefficient(2, 1), q(3, 4));
    EXPECT_EQ(r.residual.coefficient(3, 0), q(-1, 4));
    EXPECT_EQ(r.residual.terms().size(), 4u);
    EXPECT_EQ(r.display(), "(1/4)(b-a)^3");
}

TEST(MvtResidual, SquareAtOneThird) {
    const MvtResidual r = mvt_residual(poly_from_coeffs({0, 0, 1}), q(1, 3));
    const auto shape = r.residual.as_power_of_difference();
    ASSERT_TRUE(shape);
    EXPECT_EQ(shape->first, q(-1, 3));
    EXPECT_EQ(shape->second, 2u);
}

TEST(MvtResidual, RejectsBadInput) {
    EXPECT_THROW(mvt_residual(poly_from_coeffs({1}), q(0)), InvalidArgument);
    EXPECT_THROW(mvt_residual(poly_from_coeffs({1}), q(1)), InvalidArgument);
    EXPECT_THROW(mvt_residual(RationalPolynomial::monomial(65), q(1, 2)), InvalidArgument);
    EXPECT_NO_THROW(mvt_residual(RationalPolynomial::monomial(64), q(1, 2)));
}

TEST(Classify, Examples) {
    EXPECT_TRUE(classify(poly_from_coeffs({1, 2, 3}), q(1, 2)).satisfies);
    EXPECT_TRUE(classify(poly_from_coeffs({5, -7}), q(3, 10)).satisfies);
    const Classification c = classify(poly_from_coeffs({0, 0, 1}), q(3, 10));
    EXPECT_FALSE(c.satisfies);
    EXPECT_EQ(c.residual.display(), "(-2/5)(b-a)^2");
}

TEST(Property, MonomialDichotomy) {
    for (const Rational& lambda : {q(1, 2), q(1, 3), q(2, 5), q(9, 10)}) {
        for (std::size_t d = 0; d <= 8; ++d) {
            const auto p = RationalPolynomial::monomial(d);
            EXPECT_EQ(classify(p, lambda).satisfies, dichotomy_predicts_satisfies(p.degree(), lambda))
                << "x^" << d << " lambda=" << to_string(lambda);
        }
    }
}

TEST(Property, RandomPolynomialsFollowDichotomy) {
    std::mt19937_64 rng(2);
    for (const Rational& lambda : {q(1, 2), q(1, 3), q(2, 5), q(9, 10), q(1, 7)}) {
        for (std::size_t d = 0; d <= 6; ++d) {
            for (int i = 0; i < 5; ++i) {
                const auto p = random_poly(rng, d);
                EXPECT_EQ(classify(p, lambda).satisfies, dichotomy_predicts_satisfies(p.degree(), lambda));
            }
        }
    }
}

TEST(Property, AffineClosure) {
    std::mt19937_64 rng(3);
    for (const Rational& lambda : {q(1, 2), q(2, 5)}) {
        for (int i = 0; i < 30; ++i) {
            const std::size_t d = lambda == q(1, 2) ? 2 : 1;
            const auto p = random_poly(rng, d), r = random_poly(rng, d);
            ASSERT_TRUE(classify(p, lambda).satisfies);
            ASSERT_TRUE(classify(r, lambda).satisfies);
            EXPECT_TRUE(classify(p + r, lambda).satisfies);
            EXPECT_TRUE(classify(random_rational(rng) * p, lambda).satisfies);
        }
    }
}

TEST(Property, ResidualIsLinearInPolynomial) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        const Rational lambda = q(std::uniform_int_distribution<int>(1, 9)(rng), 10);
        const auto p = random_poly(rng, 4), r = random_poly(rng, 3);
        const Rational s = random_rational(rng);
        EXPECT_EQ(mvt_residual(p + s * r, lambda).residual,
                  mvt_residual(p, lambda).residual + s * mvt_residual(r, lambda).residual);
    }
}

TEST(Property, SymbolicResidualMatchesExactOracle) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i) {
        const auto p = random_poly(rng, static_cast<std::size_t>(i % 7));
        const Rational lambda = q(std::uniform_int_distribution<int>(1, 11)(rng), 12);
        const MvtResidual r = mvt_residual(p, lambda);
        for (int t = 0; t < 20; ++t) {
            const Rational a = random_rational(rng), b = random_rational(rng);
            EXPECT_EQ(r.residual.evaluate(a, b), direct_residual(p.coefficients(), lambda, a, b));
        }
    }
}

TEST(Property, SymbolicResidualMatchesFloatingEvaluation) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 30; ++i) {
        const auto p = random_poly(rng, 3 + static_cast<std::size_t>(i % 4));
        const double lambda = 0.3;
        const MvtResidual r = mvt_residual(p, parse_rational("0.3"));
        const auto dp = p.derivative();
        for (int t = 0; t < 20; ++t) {
            const double a = u(rng), b = u(rng);
            const double direct = p.evaluate(b) - p.evaluate(a) - (b - a) * dp.evaluate(lambda * a + (1 - lambda) * b);
            const double symbolic = r.residual.evaluate(a, b);
            EXPECT_LE(std::abs(symbolic - direct), 1e-10 * std::max(1.0, std::abs(direct)));
        }
    }
}

namespace {

// Root-finder oracle: c in (0, 1) with (k + 1) c^k = 1, i.e. f'(c) equals the secant slope of x^(k+1) on [0, 1].
double ratio_by_bisection(int k) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((k + 1) * std::pow(mid, k) < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(LambdaFamily, Examples) {
    const LambdaFamily k1 = lambda_family(1);
    EXPECT_EQ(k1.ratio, 0.5);
    EXPECT_EQ(k1.lambda_left_weight, 0.5);
    EXPECT_EQ(k1.lambda_right_weight, 0.5);
    EXPECT_NEAR(lambda_family(2).ratio, 0.5773503, 1e-7);
    EXPECT_NEAR(lambda_family(3).ratio, 0.6299605, 1e-7);
    EXPECT_THROW(lambda_family(0), InvalidArgument);
    EXPECT_THROW(lambda_family(21), InvalidArgument);
}

TEST(Property, LambdaFamilyMatchesRootFinder) {
    for (int k = 1; k <= 20; ++k) {
        const LambdaFamily f = lambda_family(k);
        EXPECT_NEAR(f.ratio, ratio_by_bisection(k), 1e-14) << k;
        EXPECT_EQ(f.lambda_right_weight, f.ratio);
        EXPECT_DOUBLE_EQ(f.lambda_left_weight, 1.0 - f.ratio);
        EXPECT_LE(f.residual_check, 1e-12) << k;
    }
}

TEST(Property, LambdaFamilyToleratesAffineAdditions) {
    std::mt19937_64 rng(8);
    for (int k = 1; k <= 20; ++k) {
        for (int i = 0; i < 5; ++i)
            EXPECT_LE(lambda_family_residual(k, random_rational(rng), random_rational(rng)), 1e-12) << k;
    }
}
