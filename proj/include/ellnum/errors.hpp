#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ellnum {

/// Base class for every recoverable error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed curve text or numeric argument.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Weierstrass model with zero discriminant.
class SingularModelError : public Error {
public:
    using Error::Error;
};

/// Prime dividing the discriminant of the model.
class BadReductionError : public Error {
public:
    BadReductionError(std::uint64_t p, const std::string& disc)
        : Error("bad reduction: prime " + std::to_string(p) + " divides discriminant " + disc), prime_(p) {}

    std::uint64_t prime() const noexcept { return prime_; }

private:
    std::uint64_t prime_;
};

/// A resource or range budget was exhausted; carries how far the work got.
class BudgetExceededError : public Error {
public:
    BudgetExceededError(const std::string& what, std::uint64_t completed)
        : Error(what + " (completed through " + std::to_string(completed) + ")"), completed_(completed) {}

    std::uint64_t completed() const noexcept { return completed_; }

private:
    std::uint64_t completed_;
};

}  // namespace ellnum
