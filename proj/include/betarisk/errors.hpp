#pragma once

#include <stdexcept>
#include <string>

namespace betarisk {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Iterative method failed to converge, or a non-finite value appeared.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shapes or identifiers that do not line up (dimension mismatch, bad geometry,
// checkpoint/config disagreement).
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid user configuration. `field()` names the offending setting.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), m_field(std::move(field)) {}

    const std::string& field() const noexcept { return m_field; }

private:
    std::string m_field;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace betarisk
