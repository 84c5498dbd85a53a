#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "mvlab/calculus.hpp"
#include "mvlab/exactpoly.hpp"
#include "mvlab/integrate.hpp"
#include "mvlab/mvp.hpp"
#include "mvlab/mvroot.hpp"

namespace mvlab::cli {
namespace {

using json = nlohmann::ordered_json;

struct Options {
    std::string fn;
    std::optional<double> a, b;
    double x0 = 0.0;
    std::optional<double> hmin, hmax;
    std::size_t steps = 20;
    std::string lambda;
    std::string v;
    std::optional<int> dim;
    std::string coeffs;
    std::optional<int> k;
    std::optional<std::size_t> trials;
    std::size_t samples = 100000;
    std::string seed = "0";
    std::optional<double> tol;
    std::size_t grid = kDefaultGrid;
    unsigned threads = 1;
    std::string format = "json";
    std::string out;
    std::string at;
};

/// Thrown for bad flag values detected after CLI11 parsing.
struct UsageError : Error {
    using Error::Error;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> parts;
    std::string_view rest = text;
    while (true) {
        const auto comma = rest.find(',');
        parts.push_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return parts;
}

std::vector<double> parse_reals(const std::string& flag, const std::string& text) {
    std::vector<double> values;
    for (const std::string& part : split_csv(text)) {
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size() || !std::isfinite(x))
            throw UsageError(flag + ": malformed number '" + part + "'");
        values.push_back(x);
    }
    return values;
}

Rational parse_lambda_rational(const std::string& text) {
    try {
        return parse_rational(trim(text));
    } catch (const Error& e) {
        throw UsageError(std::string("--lambda: ") + e.what());
    }
}

double parse_lambda(const std::string& text) { return to_double(parse_lambda_rational(text)); }

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json verdict_json(const PropertyVerdict& v, json input) {
    json out;
    out["property"] = v.property;
    out["holds"] = v.holds;
    out["trials"] = v.trials;
    out["violations"] = v.violations;
    out["worst_residual"] = number_or_null(v.worst_residual);
    out["worst_case"] = v.worst_case;
    out["tolerance"] = v.tolerance;
    out["seed"] = v.seed;
    json ces = json::array();
    for (const Counterexample& c : v.counterexamples) {
        ces.push_back({{"where", c.where},
                       {"lhs", number_or_null(c.lhs)},
                       {"rhs", number_or_null(c.rhs)},
                       {"residual", number_or_null(c.residual)},
                       {"threshold", c.threshold}});
    }
    out["counterexamples"] = std::move(ces);
    out["note"] = kHoldsScope;
    out["input"] = std::move(input);
    return out;
}

std::string shortest(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

struct Outcome {
    std::string text;
    int code = kHolds;
};

Outcome emit(const json& j, int code) { return {j.dump(2), code}; }

// ---------------------------------------------------------------------------
// Function resolution

Expression parse_fn(const Options& o) {
    if (o.fn.empty()) throw UsageError("--fn is required");
    return parse(o.fn);
}

Expression univariate(const Options& o) {
    Expression f = parse_fn(o);
    if (f.max_variable() > 1) throw UsageError("--fn must be a function of x only");
    return f;
}

struct Field {
    Expression g;
    int dim;
    bool builtin;
};

/// --fn is an expression or, failing that, a builtin field name.
Field resolve_field(const Options& o, std::size_t v_size, int min_dim) {
    if (o.fn.empty()) throw UsageError("--fn is required");
    try {
        Expression g = parse(o.fn);
        int dim = o.dim.value_or(static_cast<int>(std::max<std::size_t>(
            {static_cast<std::size_t>(g.max_variable()), v_size, static_cast<std::size_t>(min_dim)})));
        if (dim < 1 || dim > kMaxVariables) throw UsageError("--dim must be in 1..10");
        if (g.max_variable() > dim) throw UsageError("--fn uses x" + std::to_string(g.max_variable()) + " but --dim is " + std::to_string(dim));
        return {std::move(g), dim, false};
    } catch (const LexError&) {
    } catch (const ParseError&) {
    }
    int dim = o.dim.value_or(0);
    if (dim == 0) {
        dim = std::max(min_dim, static_cast<int>(v_size));
        for (const BuiltinInfo& info : builtin_catalog()) {
            const std::string stem = info.name.substr(0, info.name.find_last_of('_'));
            if (o.fn.rfind(stem, 0) == 0) dim = std::max(dim, info.min_dim);
        }
    }
    try {
        return {builtin_field(o.fn, dim), dim, true};
    } catch (const InvalidArgument& e) {
        if (std::string_view(e.what()).find("unknown builtin") == std::string_view::npos) throw;
    }
    parse(o.fn);  // rethrows the original parse error
    throw UsageError("--fn: cannot resolve '" + o.fn + "'");
}

std::vector<double> direction_or_default(const Options& o, int dim) {
    if (o.v.empty()) {
        std::vector<double> e1(static_cast<std::size_t>(dim), 0.0);
        e1[0] = 1.0;
        return e1;
    }
    std::vector<double> v = parse_reals("--v", o.v);
    if (static_cast<int>(v.size()) != dim) throw UsageError("--v has " + std::to_string(v.size()) + " components but --dim is " + std::to_string(dim));
    try {
        require_unit(v);
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string("--v: ") + e.what());
    }
    return v;
}

Box box_of(const Options& o, int dim) {
    const double lo = o.a.value_or(-2.0), hi = o.b.value_or(2.0);
    if (!(lo < hi)) throw UsageError("--a must be less than --b");
    return Box::cube(static_cast<std::size_t>(dim), lo, hi);
}

Interval domain_of(const Options& o) {
    const double lo = o.a.value_or(-2.0), hi = o.b.value_or(2.0);
    if (!(lo < hi)) throw UsageError("--a must be less than --b");
    return Interval(lo, hi);
}

json box_json(const Box& box) { return {{"lo", box.lo}, {"hi", box.hi}}; }

// ---------------------------------------------------------------------------
// Subcommands

Outcome cmd_parse(const Options& o) {
    const Expression f = parse_fn(o);
    json j;
    j["input"] = o.fn;
    j["canonical"] = print_canonical(f);
    j["max_variable"] = f.max_variable();
    return emit(j, kHolds);
}

Outcome cmd_abscissa(const Options& o) {
    const Expression f = univariate(o);
    const Interval iv(*o.a, *o.b);
    const AbscissaResult r = find_abscissas(f, iv, o.grid, o.tol.value_or(kDefaultRootTolerance));
    json j;
    j["fn"] = print_canonical(f);
    j["a"] = iv.a();
    j["b"] = iv.b();
    j["average_slope"] = r.average_slope;
    j["degenerate"] = r.degenerate;
    j["abscissas"] = r.abscissas;
    j["lambdas"] = r.lambdas;
    if (r.abscissas.size() == 1) {
        j["c"] = r.abscissas.front();
        j["lambda"] = r.lambdas.front();
    }
    return emit(j, kHolds);
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

Outcome cmd_sweep(const Options& o) {
    const Expression f = univariate(o);
    const SweepResult r = sweep_lambda(f, o.x0, *o.hmin, *o.hmax, o.steps, o.grid, o.tol.value_or(kDefaultRootTolerance));
    json fit;
    fit["fn"] = print_canonical(f);
    fit["x0"] = o.x0;
    fit["lambda_order"] = optional_number(r.lambda_order);
    fit["abscissa_order"] = optional_number(r.abscissa_order);
    fit["fitted_rows"] = r.fitted_rows;

    if (o.format == "csv") {
        std::ostringstream os;
        os << "h,c,lambda,abs_dev,status\n";
        for (const SweepRow& row : r.rows) {
            const bool ok = row.status == SweepStatus::Ok;
            os << shortest(row.h) << ',' << (ok ? shortest(row.c) : "") << ',' << (ok ? shortest(row.lambda) : "") << ','
               << (ok ? shortest(row.abs_dev) : "") << ',' << to_string(row.status) << '\n';
        }
        os << "# " << fit.dump();
        return {os.str(), kHolds};
    }
    json rows = json::array();
    for (const SweepRow& row : r.rows) {
        json jr;
        jr["h"] = row.h;
        jr["c"] = number_or_null(row.c);
        jr["lambda"] = number_or_null(row.lambda);
        jr["abs_dev"] = number_or_null(row.abs_dev);
        jr["status"] = std::string(to_string(row.status));
        if (!row.message.empty()) jr["message"] = row.message;
        rows.push_back(std::move(jr));
    }
    json j = fit;
    j["rows"] = std::move(rows);
    return emit(j, kHolds);
}

enum class OneDim { Weighted, Interval };

Outcome cmd_check_1d(const Options& o, OneDim kind, std::optional<std::string> fixed_lambda) {
    const Expression f = univariate(o);
    const std::string lambda_text = fixed_lambda.value_or(o.lambda);
    if (lambda_text.empty()) throw UsageError("--lambda is required");
    const double lambda = parse_lambda(lambda_text);
    const Interval domain = domain_of(o);
    const std::size_t trials = o.trials.value_or(100);
    const std::uint64_t seed = parse_seed(o.seed);
    const PropertyVerdict v =
        kind == OneDim::Weighted
            ? check_weighted_property(f, lambda, trials, domain, seed, o.tol.value_or(kWeightedTolerance))
            : check_interval_mvp(f, lambda, trials, domain, seed, o.tol.value_or(kIntervalTolerance));
    json input{{"fn", print_canonical(f)}, {"lambda", lambda}, {"domain", {domain.a(), domain.b()}}};
    return emit(verdict_json(v, std::move(input)), v.holds ? kHolds : kViolated);
}

Outcome cmd_poly_verify(const Options& o) {
    if (o.coeffs.empty()) throw UsageError("--coeffs is required");
    if (o.lambda.empty()) throw UsageError("--lambda is required");
    std::vector<Rational> coeffs;
    for (const std::string& part : split_csv(o.coeffs)) {
        try {
            coeffs.push_back(parse_rational(part));
        } catch (const Error& e) {
            throw UsageError(std::string("--coeffs: ") + e.what());
        }
    }
    const Rational lambda = parse_lambda_rational(o.lambda);
    const RationalPolynomial p = poly_from_coeffs(coeffs);
    const Classification c = classify(p, lambda);
    json j;
    j["polynomial"] = p.to_string();
    j["lambda"] = to_string(lambda);
    j["satisfies"] = c.satisfies;
    j["residual"] = c.residual.display();
    j["residual_expanded"] = c.residual.residual.to_string();
    j["identity"] = "p(b) - p(a) - (b - a) p'(lambda*a + (1 - lambda)*b)";
    j["note"] = "exact rational arithmetic; the verdict is a proof for this polynomial";
    return emit(j, c.satisfies ? kHolds : kViolated);
}

json family_json(const LambdaFamily& f) {
    return {{"k", f.k},
            {"ratio", f.ratio},
            {"lambda_left_weight", f.lambda_left_weight},
            {"lambda_right_weight", f.lambda_right_weight},
            {"residual_check", f.residual_check}};
}

Outcome cmd_lambda_family(const Options& o) {
    if (o.k) return emit(family_json(lambda_family(*o.k)), kHolds);
    json all = json::array();
    for (int k = 1; k <= 20; ++k) all.push_back(family_json(lambda_family(k)));
    return emit(all, kHolds);
}

enum class Region { Ball, Sphere };

Outcome cmd_mean_value(const Options& o, Region region) {
    const std::size_t v_size = o.v.empty() ? 0 : split_csv(o.v).size();
    const Field field = resolve_field(o, v_size, region == Region::Sphere ? 2 : 1);
    const std::vector<double> v = direction_or_default(o, field.dim);
    const double lambda = o.lambda.empty() ? 0.5 : parse_lambda(o.lambda);
    const WeightSpec w(lambda, v);
    const Box box = box_of(o, field.dim);
    BallCheckOptions opt;
    opt.trials = o.trials.value_or(20);
    opt.samples = o.samples;
    opt.seed = parse_seed(o.seed);
    opt.tol_abs = o.tol.value_or(kBallAbsTolerance);
    opt.radius_min = o.hmin.value_or(0.1);
    opt.radius_max = o.hmax.value_or(1.0);
    opt.threads = o.threads;
    const PropertyVerdict verdict =
        region == Region::Ball ? check_ball_mvp(field.g, w, box, opt) : check_sphere_mvp(field.g, w, box, opt);
    json input{{"fn", print_canonical(field.g)},
               {"dim", field.dim},
               {"lambda", lambda},
               {"v", v},
               {"box", box_json(box)},
               {"radius", {opt.radius_min, opt.radius_max}},
               {"samples", opt.samples},
               {"stderr_multiplier", kStderrMultiplier}};
    if (field.builtin) input["builtin"] = o.fn;
    return emit(verdict_json(verdict, std::move(input)), verdict.holds ? kHolds : kViolated);
}

Outcome cmd_laplacian(const Options& o) {
    const Field field = resolve_field(o, 0, 1);
    if (!o.at.empty()) {
        const std::vector<double> x = parse_reals("--at", o.at);
        if (static_cast<int>(x.size()) != field.dim) throw UsageError("--at must have --dim components");
        json j{{"fn", print_canonical(field.g)}, {"point", x}, {"value", field.g.evaluate<double>(x)},
               {"laplacian", laplacian(field.g, x)}};
        return emit(j, kHolds);
    }
    const Box box = box_of(o, field.dim);
    const PropertyVerdict v = check_harmonicity(field.g, box, o.trials.value_or(100), parse_seed(o.seed),
                                                o.tol.value_or(kPointwiseTolerance));
    json input{{"fn", print_canonical(field.g)}, {"dim", field.dim}, {"box", box_json(box)}};
    return emit(verdict_json(v, std::move(input)), v.holds ? kHolds : kViolated);
}

Outcome cmd_vderiv(const Options& o) {
    if (o.v.empty()) throw UsageError("--v is required");
    const Field field = resolve_field(o, split_csv(o.v).size(), 1);
    const std::vector<double> v = direction_or_default(o, field.dim);
    if (!o.at.empty()) {
        const std::vector<double> x = parse_reals("--at", o.at);
        if (static_cast<int>(x.size()) != field.dim) throw UsageError("--at must have --dim components");
        json j{{"fn", print_canonical(field.g)}, {"point", x}, {"v", v}, {"gradient", gradient(field.g, x)},
               {"directional_derivative", directional_derivative(field.g, x, v)}};
        return emit(j, kHolds);
    }
    const Box box = box_of(o, field.dim);
    const PropertyVerdict verdict = check_v_constancy(field.g, v, box, o.trials.value_or(100), parse_seed(o.seed),
                                                      o.tol.value_or(kPointwiseTolerance));
    json input{{"fn", print_canonical(field.g)}, {"dim", field.dim}, {"v", v}, {"box", box_json(box)}};
    return emit(verdict_json(verdict, std::move(input)), verdict.holds ? kHolds : kViolated);
}

Outcome cmd_builtins(const Options& o) {
    if (!o.fn.empty()) {
        const Field field = resolve_field(o, 0, 1);
        if (!field.builtin) throw UsageError("--fn: '" + o.fn + "' is not a builtin field");
        return emit(json{{"name", o.fn}, {"dim", field.dim}, {"expression", print_canonical(field.g)}}, kHolds);
    }
    json list = json::array();
    for (const BuiltinInfo& info : builtin_catalog())
        list.push_back({{"name", info.name}, {"description", info.description}, {"min_dim", info.min_dim}});
    return emit(list, kHolds);
}

void report_error(std::ostream& err, std::string_view category, std::string_view message) {
    err << json{{"error", category}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Numerical and exact checks of weighted mean value properties", "mvlab"};
    app.require_subcommand(1);

    auto fn = [&](CLI::App* c, const char* help = "expression in x1..x10 (x, y, z alias x1..x3)") {
        c->add_option("--fn", o.fn, help);
    };
    auto out_flags = [&](CLI::App* c) {
        c->add_option("--out", o.out, "write output to PATH instead of stdout");
        c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    };
    auto seed_trials = [&](CLI::App* c, const char* trials_help) {
        c->add_option("--trials", o.trials, trials_help);
        c->add_option("--seed", o.seed, "master seed, decimal or 0x-hex");
        c->add_option("--tol", o.tol, "tolerance");
    };
    auto domain = [&](CLI::App* c, const char* what) {
        c->add_option("--a", o.a, std::string("lower bound of the ") + what + " (default -2)");
        c->add_option("--b", o.b, std::string("upper bound of the ") + what + " (default 2)");
    };

    auto* parse_cmd = app.add_subcommand("parse", "Parse --fn and print its fully parenthesized canonical form.");
    fn(parse_cmd);
    out_flags(parse_cmd);

    auto* abscissa = app.add_subcommand(
        "abscissa", "Find every c in (a,b) with f'(c) = (f(b) - f(a))/(b - a) and its weight lambda = (b - c)/(b - a).");
    fn(abscissa);
    abscissa->add_option("--a", o.a, "left endpoint")->required();
    abscissa->add_option("--b", o.b, "right endpoint")->required();
    abscissa->add_option("--grid", o.grid, "scan cells");
    abscissa->add_option("--tol", o.tol, "root tolerance relative to b - a");
    out_flags(abscissa);

    auto* sweep = app.add_subcommand(
        "sweep", "Track the abscissa of [x0 - h, x0 + h] over geometric h; c -> x0 and lambda -> 1/2 as h -> 0.");
    fn(sweep);
    sweep->add_option("--x0", o.x0, "interval midpoint");
    sweep->add_option("--hmin", o.hmin, "smallest half-width")->required();
    sweep->add_option("--hmax", o.hmax, "largest half-width")->required();
    sweep->add_option("--steps", o.steps, "number of half-widths");
    sweep->add_option("--grid", o.grid, "scan cells");
    sweep->add_option("--tol", o.tol, "root tolerance relative to the interval width");
    out_flags(sweep);

    const char* weighted_help =
        "Falsify (f(b) - f(a))/(b - a) = f'(lambda*a + (1 - lambda)*b) on random subintervals of [a, b].";
    auto* weighted = app.add_subcommand("check-weighted", weighted_help);
    auto* midpoint = app.add_subcommand(
        "check-midpoint", "Falsify (f(b) - f(a))/(b - a) = f'((a + b)/2) on random subintervals (lambda = 1/2).");
    auto* interval = app.add_subcommand(
        "check-interval",
        "Falsify f'(x + (1 - 2 lambda) h) = (1/2h) * integral of f' over [x - h, x + h] on random subintervals.");
    for (auto* c : {weighted, midpoint, interval}) {
        fn(c);
        if (c != midpoint) c->add_option("--lambda", o.lambda, "weight in (0,1), real or p/q")->required();
        domain(c, "sampling domain");
        seed_trials(c, "number of random intervals (default 100)");
        out_flags(c);
    }

    auto* poly = app.add_subcommand(
        "poly-verify", "Decide p(b) - p(a) = (b - a) p'(lambda*a + (1 - lambda)*b) exactly over the rationals.");
    poly->add_option("--coeffs", o.coeffs, "ascending coefficients c0,c1,... as integers, decimals or p/q")->required();
    poly->add_option("--lambda", o.lambda, "weight in (0,1), p/q or exact decimal")->required();
    out_flags(poly);

    auto* family = app.add_subcommand(
        "lambda-family", "Abscissa ratio c/b = (k+1)^(-1/k) of f = x^(k+1) on [0, b]; all k = 1..20 without --k.");
    family->add_option("--k", o.k, "exponent parameter in 1..20");
    out_flags(family);

    auto* ball = app.add_subcommand(
        "ball-check", "Falsify g(x + (1 - 2 lambda) h v) = average of g over the ball B_h(x), by Monte Carlo.");
    auto* sphere = app.add_subcommand(
        "sphere-check", "Falsify g(x + (1 - 2 lambda) h v) = average of g over the sphere of radius h about x.");
    for (auto* c : {ball, sphere}) {
        fn(c, "expression or builtin field name");
        c->add_option("--dim", o.dim, "dimension n in 1..10");
        c->add_option("--lambda", o.lambda, "weight in (0,1), default 1/2");
        c->add_option("--v", o.v, "unit direction, comma separated (default e1)");
        domain(c, "center box");
        c->add_option("--hmin", o.hmin, "smallest radius (default 0.1)");
        c->add_option("--hmax", o.hmax, "largest radius (default 1)");
        seed_trials(c, "number of (center, radius) trials (default 20)");
        c->add_option("--samples", o.samples, "Monte Carlo samples per trial (>= 10000)");
        c->add_option("--threads", o.threads, "sampling threads; 1 is bit-reproducible across machines");
        out_flags(c);
    }

    auto* lap = app.add_subcommand("laplacian", "Falsify sum_i d^2 g/dx_i^2 = 0 at random points of the box.");
    auto* vder = app.add_subcommand("vderiv", "Falsify dg/dv = grad g . v = 0 at random points of the box.");
    for (auto* c : {lap, vder}) {
        fn(c, "expression or builtin field name");
        c->add_option("--dim", o.dim, "dimension n in 1..10");
        if (c == vder) c->add_option("--v", o.v, "unit direction, comma separated")->required();
        domain(c, "point box");
        seed_trials(c, "number of random points (default 100)");
        c->add_option("--at", o.at, "evaluate at this single point instead of checking");
        out_flags(c);
    }

    auto* builtins = app.add_subcommand("builtins", "List built-in fields; with --fn NAME print its expression.");
    builtins->add_option("--fn", o.fn, "builtin field name");
    builtins->add_option("--dim", o.dim, "dimension n");
    out_flags(builtins);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream cli_out, cli_err;
        const int code = app.exit(e, cli_out, cli_err);
        out << cli_out.str();
        if (code != 0) {
            report_error(err, "usage", e.what());
            return kUsage;
        }
        return kHolds;
    }

    std::function<Outcome()> action;
    if (*parse_cmd) action = [&] { return cmd_parse(o); };
    else if (*abscissa) action = [&] { return cmd_abscissa(o); };
    else if (*sweep) action = [&] { return cmd_sweep(o); };
    else if (*weighted) action = [&] { return cmd_check_1d(o, OneDim::Weighted, std::nullopt); };
    else if (*midpoint) action = [&] { return cmd_check_1d(o, OneDim::Weighted, std::string("1/2")); };
    else if (*interval) action = [&] { return cmd_check_1d(o, OneDim::Interval, std::nullopt); };
    else if (*poly) action = [&] { return cmd_poly_verify(o); };
    else if (*family) action = [&] { return cmd_lambda_family(o); };
    else if (*ball) action = [&] { return cmd_mean_value(o, Region::Ball); };
    else if (*sphere) action = [&] { return cmd_mean_value(o, Region::Sphere); };
    else if (*lap) action = [&] { return cmd_laplacian(o); };
    else if (*vder) action = [&] { return cmd_vderiv(o); };
    else action = [&] { return cmd_builtins(o); };

    Outcome result;
    try {
        if (o.format == "csv" && !*sweep) throw UsageError("--format csv is only available for sweep");
        result = action();
    } catch (const NumericError& e) {
        report_error(err, "numeric", e.what());
        return kNumeric;
    } catch (const LexError& e) {
        report_error(err, "lex", e.what());
        return kUsage;
    } catch (const ParseError& e) {
        report_error(err, "parse", e.what());
        return kUsage;
    } catch (const Error& e) {
        report_error(err, "usage", e.what());
        return kUsage;
    }

    if (o.out.empty()) {
        out << result.text << '\n';
    } else {
        std::ofstream file(o.out, std::ios::binary);
        if (!(file << result.text << '\n')) {
            report_error(err, "usage", "cannot write --out file '" + o.out + "'");
            return kUsage;
        }
    }
    return result.code;
}

}  // namespace mvlab::cli
