#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace remeta {

// Argument outside the mathematical domain of a function (p outside (0,1), negative tau2, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Mismatched lengths, empty inputs and similar caller mistakes.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Heterogeneity estimation and q need at least two studies.
class InsufficientDataError : public std::invalid_argument {
public:
    explicit InsufficientDataError(std::size_t k)
        : std::invalid_argument("at least 2 studies required (k >= 2), got k = " + std::to_string(k)),
          k_(k) {}

    std::size_t k() const noexcept { return k_; }

private:
    std::size_t k_;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_iterate, int iterations)
        : std::runtime_error(what), last_iterate_(last_iterate), iterations_(iterations) {}

    double last_iterate() const noexcept { return last_iterate_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_iterate_;
    int iterations_;
};

// Malformed input text. line() is 1-based, 0 when the error is not tied to a line.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace remeta
