#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: malformed arguments, out-of-range parameters.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class LexError : public Error {
public:
    LexError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t token_index, std::size_t offset)
        : Error(what + " (token " + std::to_string(token_index) + ", offset " +
                std::to_string(offset) + ")"),
          token_index_(token_index),
          offset_(offset) {}
    std::size_t token_index() const noexcept { return token_index_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t token_index_;
    std::size_t offset_;
};

class ArityError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Failures of a numerical computation, as opposed to bad input.
class NumericError : public Error {
public:
    using Error::Error;
};

class UnboundVariable : public NumericError {
public:
    explicit UnboundVariable(int index)
        : NumericError("unbound variable x" + std::to_string(index)), index_(index) {}
    int index() const noexcept { return index_; }

private:
    int index_;
};

/// Evaluation left the real domain; `subexpression` is the canonical text of the offending node.
class DomainError : public NumericError {
public:
    DomainError(const std::string& what, std::string subexpression)
        : NumericError(what + " in " + subexpression), subexpression_(std::move(subexpression)) {}
    const std::string& subexpression() const noexcept { return subexpression_; }

    /// Same error with `context` appended to the message.
    DomainError with_context(const std::string& context) const {
        return DomainError(Annotated{}, std::string(what()) + " " + context, subexpression_);
    }

private:
    struct Annotated {};
    DomainError(Annotated, const std::string& message, std::string subexpression)
        : NumericError(message), subexpression_(std::move(subexpression)) {}

    std::string subexpression_;
};

/// abs() differentiated at a kink.
class DerivativeUndefined : public DomainError {
public:
    using DomainError::DomainError;
};

class NoRootFound : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace mvlab
