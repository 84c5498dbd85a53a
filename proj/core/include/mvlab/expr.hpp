#pragma once

// Expression language used for every f and g handled by the library.
//
// Grammar:
//   expr  := term (("+"|"-") term)*
//   term  := unary (("*"|"/") unary)*
//   unary := "-" unary | power
//   power := atom ("^" unary)?
//   atom  := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
//
// `^` is right-associative and binds tighter than unary minus, so -x^2 is -(x^2).
// Variables are x1..x10 with the aliases x, y, z for x1, x2, x3. Constants pi and e
// expand to literals at parse time. There is no implicit multiplication.

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "mvlab/error.hpp"

namespace mvlab {

inline constexpr int kMaxVariables = 10;

enum class TokenKind { Number, Identifier, Operator, LeftParen, RightParen, Comma };

struct Token {
    TokenKind kind;
    std::string text;
    double number = 0.0;
    std::size_t offset = 0;

    friend bool operator==(const Token&, const Token&) = default;
};

std::vector<Token> tokenize(std::string_view source);

enum class NodeKind { Number, Variable, Negate, Binary, Call };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Exp, Log, Sqrt, Tanh, Abs };

std::string_view function_name(Function fn) noexcept;
std::optional<Function> function_from_name(std::string_view name) noexcept;
/// 1-based index for x1..x10 and the aliases x, y, z.
std::optional<int> variable_index(std::string_view name) noexcept;

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable AST node. Number literals are finite and non-negative; a negative
/// constant is represented as Negate(Number).
struct Node {
    NodeKind kind = NodeKind::Number;
    double number = 0.0;
    int variable = 0;
    BinaryOp op = BinaryOp::Add;
    Function function = Function::Sin;
    std::vector<NodePtr> children;
};

NodePtr make_number(double value);
/// Like make_number but accepts negative values by wrapping them in Negate.
NodePtr make_literal(double value);
NodePtr make_variable(int index);
NodePtr make_negate(NodePtr operand);
NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs);
NodePtr make_call(Function fn, NodePtr argument);

bool structurally_equal(const Node& lhs, const Node& rhs) noexcept;

std::string print_canonical(const Node& node);

namespace detail {

enum class OpCode : std::uint8_t { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

struct Instruction {
    OpCode code;
    Function function = Function::Sin;
    int variable = 0;
    double constant = 0.0;
    const Node* node = nullptr;
};

struct Program {
    std::vector<Instruction> code;
    std::size_t max_depth = 0;
    std::uint16_t used_variables = 0;  // bit i-1 set when x_i occurs
    int max_variable = 0;
};

[[noreturn]] void throw_domain_error(const Node& node, const char* what);
[[noreturn]] void throw_derivative_undefined(const Node& node);

}  // namespace detail

// Scalar customization points for the evaluator. Derivative-carrying types in
// calculus.hpp provide the same set of functions for ADL.

template <std::floating_point F>
constexpr F scalar_value(F x) noexcept { return x; }

template <std::floating_point F>
constexpr bool is_constant(F) noexcept { return true; }

template <std::floating_point F>
bool all_finite(F x) noexcept { return std::isfinite(x); }

template <std::floating_point F>
F elementary(Function fn, F x) {
    switch (fn) {
        case Function::Sin: return std::sin(x);
        case Function::Cos: return std::cos(x);
        case Function::Exp: return std::exp(x);
        case Function::Log: return std::log(x);
        case Function::Sqrt: return std::sqrt(x);
        case Function::Tanh: return std::tanh(x);
        case Function::Abs: return std::abs(x);
    }
    return x;
}

template <std::floating_point F>
F power(F base, F exponent) { return std::pow(base, exponent); }

namespace detail {

template <class T>
T run_tape(std::span<const Instruction> code, std::span<const T> vars, T* stack) {
    std::size_t top = 0;
    for (const Instruction& in : code) {
        switch (in.code) {
            case OpCode::Constant: stack[top++] = T(in.constant); break;
            case OpCode::Variable: stack[top++] = vars[static_cast<std::size_t>(in.variable - 1)]; break;
            case OpCode::Negate: stack[top - 1] = -stack[top - 1]; break;
            case OpCode::Add: --top; stack[top - 1] = stack[top - 1] + stack[top]; break;
            case OpCode::Sub: --top; stack[top - 1] = stack[top - 1] - stack[top]; break;
            case OpCode::Mul: --top; stack[top - 1] = stack[top - 1] * stack[top]; break;
            case OpCode::Div:
                --top;
                if (scalar_value(stack[top]) == 0) throw_domain_error(*in.node, "division by zero");
                stack[top - 1] = stack[top - 1] / stack[top];
                break;
            case OpCode::Pow: {
                --top;
                const double b = static_cast<double>(scalar_value(stack[top - 1]));
                const double e = static_cast<double>(scalar_value(stack[top]));
                const bool fixed = is_constant(stack[top]);
                if (b < 0 && (!fixed || e != std::trunc(e)))
                    throw_domain_error(*in.node, "negative base with non-integer exponent");
                if (b == 0 && (e < 0 || !fixed)) throw_domain_error(*in.node, "zero base with negative or variable exponent");
                stack[top - 1] = power(stack[top - 1], stack[top]);
                break;
            }
            case OpCode::Call: {
                const double x = static_cast<double>(scalar_value(stack[top - 1]));
                if (in.function == Function::Log && x <= 0) throw_domain_error(*in.node, "log of non-positive argument");
                if (in.function == Function::Sqrt && x < 0) throw_domain_error(*in.node, "sqrt of negative argument");
                if constexpr (!std::is_floating_point_v<T>) {
                    if (in.function == Function::Abs && x == 0) throw_derivative_undefined(*in.node);
                }
                stack[top - 1] = elementary(in.function, stack[top - 1]);
                break;
            }
        }
        if (!all_finite(stack[top - 1])) throw_domain_error(*in.node, "non-finite value");
    }
    return stack[0];
}

}  // namespace detail

/// A parsed expression: the AST plus a compiled postfix program. Cheap to copy,
/// immutable, and safe to share across threads.
class Expression {
public:
    explicit Expression(NodePtr root);

    const Node& root() const noexcept { return *root_; }
    const NodePtr& root_ptr() const noexcept { return root_; }

    /// Highest variable index occurring in the expression (0 for constants).
    int max_variable() const noexcept { return program_->max_variable; }
    bool uses_variable(int index) const noexcept;

    /// Evaluates with x_i bound to vars[i-1]. Any scalar type providing the
    /// customization points above works (double, long double, jets).
    template <class T>
    T evaluate(std::span<const T> vars) const {
        if (max_variable() > static_cast<int>(vars.size()))
            throw UnboundVariable(first_unbound(vars.size()));
        constexpr std::size_t kInline = 32;
        if (program_->max_depth <= kInline) {
            std::array<T, kInline> stack{};
            return detail::run_tape<T>(program_->code, vars, stack.data());
        }
        std::vector<T> stack(program_->max_depth);
        return detail::run_tape<T>(program_->code, vars, stack.data());
    }

    double operator()(std::span<const double> vars) const { return evaluate<double>(vars); }
    double operator()(double x) const { return evaluate<double>(std::span<const double>(&x, 1)); }

    friend bool operator==(const Expression& lhs, const Expression& rhs) noexcept {
        return structurally_equal(*lhs.root_, *rhs.root_);
    }

private:
    int first_unbound(std::size_t bound) const noexcept;

    NodePtr root_;
    std::shared_ptr<const detail::Program> program_;
};

Expression parse(std::string_view source);

std::string print_canonical(const Expression& expr);

/// Named variable bindings for eval(); unbound variables are reported, not defaulted.
class Bindings {
public:
    Bindings() = default;
    Bindings(std::initializer_list<std::pair<std::string_view, double>> values);

    Bindings& set(int index, double value);
    Bindings& set(std::string_view name, double value);

    bool bound(int index) const noexcept;
    double value(int index) const noexcept { return values_[static_cast<std::size_t>(index - 1)]; }

private:
    std::array<double, kMaxVariables> values_{};
    std::uint16_t mask_ = 0;
};

double eval(const Expression& expr, const Bindings& bindings);

}  // namespace mvlab
