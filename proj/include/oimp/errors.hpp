#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oimp {

/// Malformed input text. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input whose values break a model invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range ids and similar argument errors.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A call whose precondition on accumulated state does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The operation is not defined for this environment or policy kind.
class UnsupportedOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Invalid or inconsistent campaign configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace oimp
