#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ergohrc {

// Input that breaks a file or datagram grammar. Carries the 1-based line
// number when the source is line-oriented (0 = not applicable).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& message, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message
                                  : message),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Well-formed input that violates a precondition or domain invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ergohrc
