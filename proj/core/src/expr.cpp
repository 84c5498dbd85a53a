#include "mvlab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numbers>
#include <system_error>

namespace mvlab {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 7> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sqrt", Function::Sqrt},
    {"tanh", Function::Tanh},
    {"abs", Function::Abs},
}};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::string_view function_name(Function fn) noexcept {
    for (const auto& [name, f] : kFunctions)
        if (f == fn) return name;
    return "?";
}

std::optional<Function> function_from_name(std::string_view name) noexcept {
    for (const auto& [n, f] : kFunctions)
        if (n == name) return f;
    return std::nullopt;
}

std::optional<int> variable_index(std::string_view name) noexcept {
    if (name == "x") return 1;
    if (name == "y") return 2;
    if (name == "z") return 3;
    if (name.size() < 2 || name.size() > 3 || name[0] != 'x') return std::nullopt;
    if (name[1] == '0') return std::nullopt;
    int index = 0;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
    if (ec != std::errc{} || ptr != name.data() + name.size()) return std::nullopt;
    if (index < 1 || index > kMaxVariables) return std::nullopt;
    return index;
}

// ---------------------------------------------------------------------------
// Lexer

std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = source.size();
    while (i < n) {
        const char c = source[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(source[i + 1]))) {
            while (i < n && is_digit(source[i])) ++i;
            if (i < n && source[i] == '.') {
                ++i;
                while (i < n && is_digit(source[i])) ++i;
            }
            if (i < n && (source[i] == 'e' || source[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < n && (source[j] == '+' || source[j] == '-')) ++j;
                if (j < n && is_digit(source[j])) {
                    i = j;
                    while (i < n && is_digit(source[i])) ++i;
                }
            }
            if (i < n && (is_ident_char(source[i]) || source[i] == '.'))
                throw LexError("number immediately followed by '" + std::string(1, source[i]) + "'", i);
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(source.data() + start, source.data() + i, value);
            if (ec != std::errc{} || ptr != source.data() + i || !std::isfinite(value))
                throw LexError("numeric literal out of range", start);
            tokens.push_back({TokenKind::Number, std::string(source.substr(start, i - start)), value, start});
            continue;
        }
        if (is_ident_start(c)) {
            while (i < n && is_ident_char(source[i])) ++i;
            tokens.push_back({TokenKind::Identifier, std::string(source.substr(start, i - start)), 0.0, start});
            continue;
        }
        switch (c) {
            case '+':
            case '-':
            case '*':
            case '/':
            case '^': tokens.push_back({TokenKind::Operator, std::string(1, c), 0.0, start}); break;
            case '(': tokens.push_back({TokenKind::LeftParen, "(", 0.0, start}); break;
            case ')': tokens.push_back({TokenKind::RightParen, ")", 0.0, start}); break;
            case ',': tokens.push_back({TokenKind::Comma, ",", 0.0, start}); break;
            default: throw LexError("illegal character '" + std::string(1, c) + "'", start);
        }
        ++i;
    }
    return tokens;
}

// ---------------------------------------------------------------------------
// AST construction

NodePtr make_number(double value) {
    if (!std::isfinite(value) || value < 0 || std::signbit(value))
        throw InvalidArgument("number literals must be finite and non-negative");
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Number;
    node->number = value;
    return node;
}

NodePtr make_literal(double value) {
    if (value < 0 || std::signbit(value)) return make_negate(make_number(-value));
    return make_number(value);
}

NodePtr make_variable(int index) {
    if (index < 1 || index > kMaxVariables)
        throw InvalidArgument("variable index " + std::to_string(index) + " outside 1..10");
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Variable;
    node->variable = index;
    return node;
}

NodePtr make_negate(NodePtr operand) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Negate;
    node->children.push_back(std::move(operand));
    return node;
}

NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Binary;
    node->op = op;
    node->children.push_back(std::move(lhs));
    node->children.push_back(std::move(rhs));
    return node;
}

NodePtr make_call(Function fn, NodePtr argument) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Call;
    node->function = fn;
    node->children.push_back(std::move(argument));
    return node;
}

bool structurally_equal(const Node& lhs, const Node& rhs) noexcept {
    if (lhs.kind != rhs.kind || lhs.children.size() != rhs.children.size()) return false;
    switch (lhs.kind) {
        case NodeKind::Number:
            if (lhs.number != rhs.number) return false;
            break;
        case NodeKind::Variable:
            if (lhs.variable != rhs.variable) return false;
            break;
        case NodeKind::Binary:
            if (lhs.op != rhs.op) return false;
            break;
        case NodeKind::Call:
            if (lhs.function != rhs.function) return false;
            break;
        case NodeKind::Negate: break;
    }
    for (std::size_t i = 0; i < lhs.children.size(); ++i)
        if (!structurally_equal(*lhs.children[i], *rhs.children[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

char op_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return '+';
        case BinaryOp::Sub: return '-';
        case BinaryOp::Mul: return '*';
        case BinaryOp::Div: return '/';
        case BinaryOp::Pow: return '^';
    }
    return '?';
}

void print_to(const Node& node, std::string& out) {
    switch (node.kind) {
        case NodeKind::Number: {
            std::array<char, 32> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), node.number);
            out.append(buf.data(), ptr);
            break;
        }
        case NodeKind::Variable:
            // x1 keeps its short name; everything else is normalized to x<i>.
            if (node.variable == 1)
                out += 'x';
            else
                out += "x" + std::to_string(node.variable);
            break;
        case NodeKind::Negate:
            out += "(-";
            print_to(*node.children[0], out);
            out += ')';
            break;
        case NodeKind::Binary:
            out += '(';
            print_to(*node.children[0], out);
            out += op_symbol(node.op);
            print_to(*node.children[1], out);
            out += ')';
            break;
        case NodeKind::Call:
            out += function_name(node.function);
            out += '(';
            print_to(*node.children[0], out);
            out += ')';
            break;
    }
}

}  // namespace

std::string print_canonical(const Node& node) {
    std::string out;
    print_to(node, out);
    return out;
}

std::string print_canonical(const Expression& expr) { return print_canonical(expr.root()); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view source) : source_size_(source.size()), tokens_(tokenize(source)) {}

    NodePtr parse_all() {
        if (tokens_.empty()) fail("empty expression");
        NodePtr result = expr();
        if (pos_ < tokens_.size()) {
            if (tokens_[pos_].kind == TokenKind::RightParen) fail("unmatched closing parenthesis");
            fail("unexpected token '" + tokens_[pos_].text + "'");
        }
        return result;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        const std::size_t offset = pos_ < tokens_.size() ? tokens_[pos_].offset : source_size_;
        throw ParseError(what, pos_, offset);
    }

    bool at_operator(char c) const {
        return pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Operator && tokens_[pos_].text[0] == c;
    }
    bool at(TokenKind kind) const { return pos_ < tokens_.size() && tokens_[pos_].kind == kind; }

    NodePtr expr() {
        NodePtr lhs = term();
        while (at_operator('+') || at_operator('-')) {
            const BinaryOp op = tokens_[pos_++].text[0] == '+' ? BinaryOp::Add : BinaryOp::Sub;
            lhs = make_binary(op, std::move(lhs), term());
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (at_operator('*') || at_operator('/')) {
            const BinaryOp op = tokens_[pos_++].text[0] == '*' ? BinaryOp::Mul : BinaryOp::Div;
            lhs = make_binary(op, std::move(lhs), unary());
        }
        return lhs;
    }

    NodePtr unary() {
        if (at_operator('-')) {
            ++pos_;
            return make_negate(unary());
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (at_operator('^')) {
            ++pos_;
            return make_binary(BinaryOp::Pow, std::move(base), unary());
        }
        return base;
    }

    NodePtr atom() {
        if (pos_ >= tokens_.size()) fail("unexpected end of input");
        const Token& tok = tokens_[pos_];
        switch (tok.kind) {
            case TokenKind::Number: ++pos_; return make_number(tok.number);
            case TokenKind::LeftParen: {
                ++pos_;
                NodePtr inner = expr();
                if (!at(TokenKind::RightParen)) fail("unclosed parenthesis");
                ++pos_;
                return inner;
            }
            case TokenKind::Identifier: return identifier();
            default: fail("unexpected token '" + tok.text + "'");
        }
    }

    NodePtr identifier() {
        const std::size_t ident_pos = pos_;
        const std::string& name = tokens_[pos_++].text;
        const bool call = at(TokenKind::LeftParen);
        if (auto fn = function_from_name(name)) {
            if (!call) {
                pos_ = ident_pos;
                fail("function '" + name + "' requires an argument list");
            }
            ++pos_;
            std::vector<NodePtr> args;
            args.push_back(expr());
            while (at(TokenKind::Comma)) {
                ++pos_;
                args.push_back(expr());
            }
            if (!at(TokenKind::RightParen)) fail("unclosed parenthesis");
            ++pos_;
            if (args.size() != 1) {
                throw ArityError("function '" + name + "' takes 1 argument, got " + std::to_string(args.size()),
                                 ident_pos, tokens_[ident_pos].offset);
            }
            return make_call(*fn, std::move(args.front()));
        }
        if (call) {
            pos_ = ident_pos;
            fail("'" + name + "' is not a function");
        }
        if (auto index = variable_index(name)) return make_variable(*index);
        if (name == "pi") return make_number(std::numbers::pi);
        if (name == "e") return make_number(std::numbers::e);
        pos_ = ident_pos;
        fail("unknown identifier '" + name + "'");
    }

    std::size_t source_size_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

void compile(const Node& node, detail::Program& program, std::size_t depth) {
    using detail::OpCode;
    detail::Instruction in{OpCode::Constant};
    in.node = &node;
    switch (node.kind) {
        case NodeKind::Number:
            in.code = OpCode::Constant;
            in.constant = node.number;
            ++depth;
            break;
        case NodeKind::Variable:
            in.code = OpCode::Variable;
            in.variable = node.variable;
            program.used_variables |= static_cast<std::uint16_t>(1u << (node.variable - 1));
            program.max_variable = std::max(program.max_variable, node.variable);
            ++depth;
            break;
        case NodeKind::Negate:
            compile(*node.children[0], program, depth);
            in.code = OpCode::Negate;
            ++depth;
            break;
        case NodeKind::Call:
            compile(*node.children[0], program, depth);
            in.code = OpCode::Call;
            in.function = node.function;
            ++depth;
            break;
        case NodeKind::Binary:
            compile(*node.children[0], program, depth);
            compile(*node.children[1], program, depth + 1);
            switch (node.op) {
                case BinaryOp::Add: in.code = OpCode::Add; break;
                case BinaryOp::Sub: in.code = OpCode::Sub; break;
                case BinaryOp::Mul: in.code = OpCode::Mul; break;
                case BinaryOp::Div: in.code = OpCode::Div; break;
                case BinaryOp::Pow: in.code = OpCode::Pow; break;
            }
            ++depth;
            break;
    }
    program.max_depth = std::max(program.max_depth, depth);
    program.code.push_back(in);
}

}  // namespace

Expression parse(std::string_view source) { return Expression(Parser(source).parse_all()); }

Expression::Expression(NodePtr root) : root_(std::move(root)) {
    if (!root_) throw InvalidArgument("null expression");
    auto program = std::make_shared<detail::Program>();
    compile(*root_, *program, 0);
    program_ = std::move(program);
}

bool Expression::uses_variable(int index) const noexcept {
    if (index < 1 || index > kMaxVariables) return false;
    return (program_->used_variables >> (index - 1)) & 1u;
}

int Expression::first_unbound(std::size_t bound) const noexcept {
    for (int i = static_cast<int>(bound) + 1; i <= kMaxVariables; ++i)
        if (uses_variable(i)) return i;
    return program_->max_variable;
}

namespace detail {

void throw_domain_error(const Node& node, const char* what) { throw DomainError(what, print_canonical(node)); }

void throw_derivative_undefined(const Node& node) {
    throw DerivativeUndefined("derivative undefined (abs at 0)", print_canonical(node));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Bindings

Bindings::Bindings(std::initializer_list<std::pair<std::string_view, double>> values) {
    for (const auto& [name, value] : values) set(name, value);
}

Bindings& Bindings::set(int index, double value) {
    if (index < 1 || index > kMaxVariables)
        throw InvalidArgument("variable index " + std::to_string(index) + " outside 1..10");
    values_[static_cast<std::size_t>(index - 1)] = value;
    mask_ |= static_cast<std::uint16_t>(1u << (index - 1));
    return *this;
}

Bindings& Bindings::set(std::string_view name, double value) {
    auto index = variable_index(name);
    if (!index) throw InvalidArgument("unknown variable '" + std::string(name) + "'");
    return set(*index, value);
}

bool Bindings::bound(int index) const noexcept {
    if (index < 1 || index > kMaxVariables) return false;
    return (mask_ >> (index - 1)) & 1u;
}

double eval(const Expression& expr, const Bindings& bindings) {
    std::array<double, kMaxVariables> values{};
    for (int i = 1; i <= kMaxVariables; ++i) {
        if (!expr.uses_variable(i)) continue;
        if (!bindings.bound(i)) throw UnboundVariable(i);
        values[static_cast<std::size_t>(i - 1)] = bindings.value(i);
    }
    return expr.evaluate<double>(std::span<const double>(values.data(), static_cast<std::size_t>(expr.max_variable())));
}

}  // namespace mvlab
