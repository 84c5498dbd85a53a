#include "mvlab/exactpoly.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "mvlab/error.hpp"

namespace mvlab {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// Rationals

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

mp::cpp_int parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw InvalidArgument("malformed rational '" + std::string(whole) + "'");
    const mp::cpp_int value{std::string(s)};
    return negative ? mp::cpp_int(-value) : value;
}

Rational ipow(const Rational& x, unsigned n) {
    Rational r = 1;
    for (unsigned i = 0; i < n; ++i) r *= x;
    return r;
}

mp::cpp_int pow10(unsigned n) {
    mp::cpp_int r = 1;
    for (unsigned i = 0; i < n; ++i) r *= 10;
    return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw InvalidArgument("empty rational");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const mp::cpp_int num = parse_integer(s.substr(0, slash), text);
        std::string_view den_text = s.substr(slash + 1);
        if (!den_text.empty() && den_text[0] == '+') den_text.remove_prefix(1);
        const mp::cpp_int den = parse_integer(den_text, text);
        if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
        // The two-argument constructor rejects a negative denominator.
        return den < 0 ? Rational(-num, -den) : Rational(num, den);
    }

    // Decimal: [sign] digits [. digits] [e [sign] digits]
    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = s.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text[0] == '+' || exp_text[0] == '-')) {
            exp_negative = exp_text[0] == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 4) throw InvalidArgument("malformed rational '" + std::string(text) + "'");
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) exponent = -exponent;
        s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = s.substr(0, dot);
        std::string_view frac_part = s.substr(dot + 1);
        if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part)))
            throw InvalidArgument("malformed rational '" + std::string(text) + "'");
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        if (!all_digits(s)) throw InvalidArgument("malformed rational '" + std::string(text) + "'");
        digits = std::string(s);
    }
    if (digits.empty()) digits = "0";
    mp::cpp_int mantissa(digits);
    if (negative) mantissa = -mantissa;
    if (exponent >= 0) return Rational(mantissa * pow10(static_cast<unsigned>(exponent)));
    return Rational(mantissa, pow10(static_cast<unsigned>(-exponent)));
}

std::string to_string(const Rational& value) {
    if (mp::denominator(value) == 1) return mp::numerator(value).str();
    return mp::numerator(value).str() + "/" + mp::denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

// ---------------------------------------------------------------------------
// RationalPolynomial

RationalPolynomial::RationalPolynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
    canonicalize();
}

RationalPolynomial RationalPolynomial::monomial(std::size_t degree, const Rational& coefficient) {
    std::vector<Rational> c(degree + 1);
    c[degree] = coefficient;
    return RationalPolynomial(std::move(c));
}

void RationalPolynomial::canonicalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::optional<std::size_t> RationalPolynomial::degree() const noexcept {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.size() - 1;
}

Rational RationalPolynomial::coefficient(std::size_t power) const {
    return power < coeffs_.size() ? coeffs_[power] : Rational(0);
}

RationalPolynomial RationalPolynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long long>(i);
    return RationalPolynomial(std::move(d));
}

Rational RationalPolynomial::operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double RationalPolynomial::evaluate(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
}

std::string RationalPolynomial::to_string() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        const Rational& c = coeffs_[i];
        if (c == 0) continue;
        const bool negative = c < 0;
        const Rational mag = negative ? Rational(-c) : c;
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        const bool unit = mag == 1;
        if (!unit || i == 0) out += mvlab::to_string(mag);
        if (i > 0) {
            if (!unit) out += '*';
            out += 'x';
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

RationalPolynomial operator+(const RationalPolynomial& p, const RationalPolynomial& q) {
    std::vector<Rational> r(std::max(p.coeffs_.size(), q.coeffs_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p.coefficient(i) + q.coefficient(i);
    return RationalPolynomial(std::move(r));
}

RationalPolynomial operator-(const RationalPolynomial& p, const RationalPolynomial& q) {
    std::vector<Rational> r(std::max(p.coeffs_.size(), q.coeffs_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p.coefficient(i) - q.coefficient(i);
    return RationalPolynomial(std::move(r));
}

RationalPolynomial operator*(const RationalPolynomial& p, const RationalPolynomial& q) {
    if (p.is_zero() || q.is_zero()) return {};
    std::vector<Rational> r(p.coeffs_.size() + q.coeffs_.size() - 1);
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < q.coeffs_.size(); ++j) r[i + j] += p.coeffs_[i] * q.coeffs_[j];
    return RationalPolynomial(std::move(r));
}

RationalPolynomial operator*(const Rational& s, const RationalPolynomial& p) {
    std::vector<Rational> r = p.coeffs_;
    for (auto& c : r) c *= s;
    return RationalPolynomial(std::move(r));
}

RationalPolynomial poly_from_coeffs(std::vector<Rational> coefficients) {
    if (coefficients.empty()) throw InvalidArgument("coefficient list must be nonempty");
    return RationalPolynomial(std::move(coefficients));
}

// ---------------------------------------------------------------------------
// BivariatePolynomial

BivariatePolynomial BivariatePolynomial::constant(const Rational& c) {
    BivariatePolynomial p;
    p.add_term({0, 0}, c);
    return p;
}

BivariatePolynomial BivariatePolynomial::variable_a() {
    BivariatePolynomial p;
    p.add_term({1, 0}, 1);
    return p;
}

BivariatePolynomial BivariatePolynomial::variable_b() {
    BivariatePolynomial p;
    p.add_term({0, 1}, 1);
    return p;
}

void BivariatePolynomial::add_term(Exponents e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational BivariatePolynomial::coefficient(unsigned i, unsigned j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<unsigned> BivariatePolynomial::total_degree() const noexcept {
    if (terms_.empty()) return std::nullopt;
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
}

Rational BivariatePolynomial::evaluate(const Rational& a, const Rational& b) const {
    Rational sum = 0;
    for (const auto& [e, c] : terms_) sum += c * ipow(a, e.first) * ipow(b, e.second);
    return sum;
}

double BivariatePolynomial::evaluate(double a, double b) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) sum += to_double(c) * std::pow(a, e.first) * std::pow(b, e.second);
    return sum;
}

std::optional<std::pair<Rational, unsigned>> BivariatePolynomial::as_power_of_difference() const {
    const auto degree = total_degree();
    if (!degree) return std::nullopt;
    const unsigned m = *degree;
    const Rational lead = coefficient(0, m);
    if (lead == 0) return std::nullopt;
    // c (b - a)^m = c * sum_i C(m, i) (-1)^i a^i b^(m-i)
    std::size_t expected_terms = 0;
    mp::cpp_int binomial = 1;
    for (unsigned i = 0; i <= m; ++i) {
        const Rational want = (i % 2 == 0 ? lead : Rational(-lead)) * Rational(binomial);
        if (coefficient(i, m - i) != want) return std::nullopt;
        ++expected_terms;
        binomial = binomial * (m - i) / (i + 1);
    }
    if (terms_.size() != expected_terms) return std::nullopt;
    return std::make_pair(lead, m);
}

std::string BivariatePolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Exponents, Rational>> ordered(terms_.begin(), terms_.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
        const unsigned dx = x.first.first + x.first.second;
        const unsigned dy = y.first.first + y.first.second;
        if (dx != dy) return dx > dy;
        return x.first.second > y.first.second;
    });
    std::string out;
    for (const auto& [e, c] : ordered) {
        const bool negative = c < 0;
        const Rational mag = negative ? Rational(-c) : c;
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        const bool constant = e.first == 0 && e.second == 0;
        std::string monomial;
        auto append = [&monomial](char var, unsigned power) {
            if (power == 0) return;
            if (!monomial.empty()) monomial += '*';
            monomial += var;
            if (power > 1) monomial += "^" + std::to_string(power);
        };
        append('a', e.first);
        append('b', e.second);
        if (constant)
            out += mvlab::to_string(mag);
        else if (mag == 1)
            out += monomial;
        else
            out += mvlab::to_string(mag) + "*" + monomial;
    }
    return out;
}

BivariatePolynomial operator+(const BivariatePolynomial& p, const BivariatePolynomial& q) {
    BivariatePolynomial r = p;
    for (const auto& [e, c] : q.terms_) r.add_term(e, c);
    return r;
}

BivariatePolynomial operator-(const BivariatePolynomial& p, const BivariatePolynomial& q) {
    BivariatePolynomial r = p;
    for (const auto& [e, c] : q.terms_) r.add_term(e, -c);
    return r;
}

BivariatePolynomial operator*(const BivariatePolynomial& p, const BivariatePolynomial& q) {
    BivariatePolynomial r;
    for (const auto& [ep, cp] : p.terms_)
        for (const auto& [eq, cq] : q.terms_) r.add_term({ep.first + eq.first, ep.second + eq.second}, cp * cq);
    return r;
}

BivariatePolynomial operator*(const Rational& s, const BivariatePolynomial& p) {
    BivariatePolynomial r;
    for (const auto& [e, c] : p.terms_) r.add_term(e, s * c);
    return r;
}

// ---------------------------------------------------------------------------
// Residuals

namespace {

BivariatePolynomial compose(const RationalPolynomial& p, const BivariatePolynomial& x) {
    BivariatePolynomial acc;
    const auto& c = p.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + BivariatePolynomial::constant(*it);
    return acc;
}

}  // namespace

std::string MvtResidual::display() const {
    if (is_identically_zero) return "0";
    if (auto shape = residual.as_power_of_difference()) {
        std::string out = "(" + to_string(shape->first) + ")(b-a)";
        if (shape->second > 1) out += "^" + std::to_string(shape->second);
        return out;
    }
    return residual.to_string();
}

MvtResidual mvt_residual(const RationalPolynomial& p, const Rational& lambda) {
    if (!(lambda > 0 && lambda < 1)) throw InvalidArgument("lambda must lie in (0,1), got " + to_string(lambda));
    if (p.degree().value_or(0) > kMaxSymbolicDegree)
        throw InvalidArgument("polynomial degree exceeds the symbolic cap of " + std::to_string(kMaxSymbolicDegree));
    const auto a = BivariatePolynomial::variable_a();
    const auto b = BivariatePolynomial::variable_b();
    const auto weighted = lambda * a + (Rational(1) - lambda) * b;
    MvtResidual r;
    r.residual = compose(p, b) - compose(p, a) - (b - a) * compose(p.derivative(), weighted);
    r.is_identically_zero = r.residual.is_zero();
    return r;
}

Classification classify(const RationalPolynomial& p, const Rational& lambda) {
    Classification c;
    c.residual = mvt_residual(p, lambda);
    c.satisfies = c.residual.is_identically_zero;
    return c;
}

// ---------------------------------------------------------------------------
// Fixed-endpoint monomial family

namespace {

using Float50 = mp::cpp_bin_float_50;

constexpr std::array<std::pair<int, int>, 4> kCheckEndpoints{{{1, 2}, {1, 1}, {2, 1}, {5, 1}}};

void require_family_exponent(int k) {
    if (k < 1 || k > kMaxFamilyExponent)
        throw InvalidArgument("k must lie in 1.." + std::to_string(kMaxFamilyExponent) + ", got " + std::to_string(k));
}

Float50 family_ratio(int k) { return Float50(1) / mp::pow(Float50(k + 1), Float50(1) / k); }

Float50 to_float50(const Rational& r) { return Float50(mp::numerator(r)) / Float50(mp::denominator(r)); }

// Evaluated at 50 digits: b^k reaches 5^20 ~ 1e14, where a binary64 evaluation of
// the same identity cannot resolve residuals below ~1e-2.
double fixed_endpoint_residual(int k, const Float50& ratio, const Float50& beta, const Float50& gamma) {
    auto f = [&](const Float50& x) { return mp::pow(x, k + 1) + beta * x + gamma; };
    auto fprime = [&](const Float50& x) { return Float50(k + 1) * mp::pow(x, k) + beta; };
    Float50 worst = 0;
    for (const auto& [num, den] : kCheckEndpoints) {
        const Float50 b = Float50(num) / den;
        const Float50 r = mp::abs((f(b) - f(Float50(0))) / b - fprime(ratio * b));
        if (r > worst) worst = r;
    }
    return worst.convert_to<double>();
}

}  // namespace

LambdaFamily lambda_family(int k) {
    require_family_exponent(k);
    const Float50 ratio = family_ratio(k);
    LambdaFamily out;
    out.k = k;
    out.ratio = ratio.convert_to<double>();
    out.lambda_right_weight = out.ratio;
    out.lambda_left_weight = Float50(1 - ratio).convert_to<double>();
    out.residual_check = fixed_endpoint_residual(k, ratio, 0, 0);
    return out;
}

double lambda_family_residual(int k, const Rational& beta, const Rational& gamma) {
    require_family_exponent(k);
    return fixed_endpoint_residual(k, family_ratio(k), to_float50(beta), to_float50(gamma));
}

}  // namespace mvlab
