#pragma once

#include <stdexcept>
#include <string>

namespace arelab {

/// A caller supplied a value outside an operation's domain (c <= 0, t <= 0, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a result (search cap exceeded,
/// horizon too short, state space too large).
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration entry. `key()` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace arelab
