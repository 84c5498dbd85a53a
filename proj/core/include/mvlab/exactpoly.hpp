#pragma once

// Exact rational polynomials and the symbolic mean value residual
//
//   R(a, b) = p(b) - p(a) - (b - a) * p'(lambda*a + (1 - lambda)*b)
//
// which vanishes identically exactly when every interval has the weighted point
// lambda*a + (1 - lambda)*b as a mean value abscissa.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mvlab {

using Rational = boost::multiprecision::cpp_rational;

/// Accepts "p/q", integers and plain decimals ("0.3", "-1.5e-2"), all converted exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);
double to_double(const Rational& value);

inline constexpr std::size_t kMaxSymbolicDegree = 64;

/// Dense univariate polynomial, lowest degree first, trailing zeros stripped.
class RationalPolynomial {
public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<Rational> coefficients);

    static RationalPolynomial monomial(std::size_t degree, const Rational& coefficient = 1);

    const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
    /// nullopt for the zero polynomial.
    std::optional<std::size_t> degree() const noexcept;
    bool is_zero() const noexcept { return coeffs_.empty(); }
    Rational coefficient(std::size_t power) const;

    RationalPolynomial derivative() const;
    Rational operator()(const Rational& x) const;
    double evaluate(double x) const;

    std::string to_string() const;

    friend RationalPolynomial operator+(const RationalPolynomial& p, const RationalPolynomial& q);
    friend RationalPolynomial operator-(const RationalPolynomial& p, const RationalPolynomial& q);
    friend RationalPolynomial operator*(const RationalPolynomial& p, const RationalPolynomial& q);
    friend RationalPolynomial operator*(const Rational& s, const RationalPolynomial& p);
    friend bool operator==(const RationalPolynomial& p, const RationalPolynomial& q) { return p.coeffs_ == q.coeffs_; }

private:
    void canonicalize();
    std::vector<Rational> coeffs_;
};

RationalPolynomial poly_from_coeffs(std::vector<Rational> coefficients);

/// Sparse polynomial in the formal variables a and b; (i, j) keys a^i b^j.
class BivariatePolynomial {
public:
    using Exponents = std::pair<unsigned, unsigned>;

    BivariatePolynomial() = default;
    static BivariatePolynomial constant(const Rational& c);
    static BivariatePolynomial variable_a();
    static BivariatePolynomial variable_b();

    const std::map<Exponents, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    Rational coefficient(unsigned i, unsigned j) const;
    /// nullopt for the zero polynomial.
    std::optional<unsigned> total_degree() const noexcept;

    Rational evaluate(const Rational& a, const Rational& b) const;
    double evaluate(double a, double b) const;

    /// (c, m) with this == c * (b - a)^m, if it has that shape.
    std::optional<std::pair<Rational, unsigned>> as_power_of_difference() const;

    /// Expanded form, e.g. "1/4*b^3 - 3/4*a*b^2 + 3/4*a^2*b - 1/4*a^3".
    std::string to_string() const;

    friend BivariatePolynomial operator+(const BivariatePolynomial& p, const BivariatePolynomial& q);
    friend BivariatePolynomial operator-(const BivariatePolynomial& p, const BivariatePolynomial& q);
    friend BivariatePolynomial operator*(const BivariatePolynomial& p, const BivariatePolynomial& q);
    friend BivariatePolynomial operator*(const Rational& s, const BivariatePolynomial& p);
    friend bool operator==(const BivariatePolynomial&, const BivariatePolynomial&) = default;

private:
    void add_term(Exponents e, const Rational& c);
    std::map<Exponents, Rational> terms_;
};

struct MvtResidual {
    BivariatePolynomial residual;
    bool is_identically_zero = true;

    /// "(c)(b-a)^m" when the residual has that shape, otherwise the expanded form; "0" when zero.
    std::string display() const;
};

/// Throws InvalidArgument unless 0 < lambda < 1 and deg p <= kMaxSymbolicDegree.
MvtResidual mvt_residual(const RationalPolynomial& p, const Rational& lambda);

struct Classification {
    bool satisfies = false;
    MvtResidual residual;
};

Classification classify(const RationalPolynomial& p, const Rational& lambda);

/// Fixed left endpoint a = 0 with f(x) = x^(k+1): the abscissa on [0, b] sits at
/// ratio * b with ratio = (k+1)^(-1/k), independent of b.
struct LambdaFamily {
    int k = 0;
    double ratio = 0.0;
    /// Weight on the left endpoint, c = lambda*a + (1 - lambda)*b; 1 - ratio, rounded once from 50 digits.
    double lambda_left_weight = 0.0;
    /// Weight on the right endpoint, c = lambda*b; equals ratio.
    double lambda_right_weight = 0.0;
    /// max over b in {1/2, 1, 2, 5} of |(f(b) - f(0))/b - f'(ratio*b)|.
    double residual_check = 0.0;
};

inline constexpr int kMaxFamilyExponent = 20;

LambdaFamily lambda_family(int k);

/// The same fixed-endpoint residual for f(x) = x^(k+1) + beta*x + gamma.
double lambda_family_residual(int k, const Rational& beta, const Rational& gamma);

}  // namespace mvlab
