#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed machine-definition text. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A definition that parses but violates a structural invariant.
class InvariantError : public Error {
public:
    InvariantError(std::string entity, const std::string& message)
        : Error(message + " ('" + entity + "')"), entity_(std::move(entity)) {}

    const std::string& entity() const noexcept { return entity_; }

private:
    std::string entity_;
};

class AlphabetError : public Error {
public:
    using Error::Error;
};

/// A transducer run hit a (state, symbol) pair with no transition.
class UndefinedTransition : public Error {
public:
    UndefinedTransition(std::string state, std::string symbol, std::size_t position)
        : Error("no transition from '" + state + "' on '" + symbol + "' at position " +
                std::to_string(position)),
          state_(std::move(state)), symbol_(std::move(symbol)), position_(position) {}

    const std::string& state() const noexcept { return state_; }
    const std::string& symbol() const noexcept { return symbol_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::string state_;
    std::string symbol_;
    std::size_t position_;
};

/// Semantic misuse: wrong flavor for a mode, unsupported construction input, etc.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace evm
