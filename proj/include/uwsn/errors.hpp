#pragma once

#include <stdexcept>
#include <string>

namespace uwsn {

/// Input outside a model's domain (e.g. salinity < 0, temperature outside seawater range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Channel model undefined for the current medium (conductivity <= 0).
class InvalidChannelError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Configuration or argument validation failure. `field()` names the offending field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(message), _field(std::move(field)) {}

    const std::string& field() const noexcept { return _field; }

private:
    std::string _field;
};

}  // namespace uwsn
