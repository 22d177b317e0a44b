#pragma once

#include <stdexcept>
#include <string>

namespace vroute {

/// Invalid or inconsistent user-supplied configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A point sits exactly on the road line, so its plane is undefined.
class DegeneratePositionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Random topology generation gave up after too many rejected draws.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Brute-force enumeration would exceed its configured sequence budget.
class InstanceTooLargeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed JSON document, or a document missing a required field.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::string field = {}, int line = 0)
        : std::runtime_error(what), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

}  // namespace vroute
