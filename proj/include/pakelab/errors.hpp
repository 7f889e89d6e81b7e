#pragma once

#include <stdexcept>
#include <string>

namespace pakelab {

/// Programming or API misuse (mismatched group params, mixed-config
/// aggregation, mismatched run ids). Not recoverable by the caller.
struct UsageError : std::logic_error {
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

/// Invalid scenario or store configuration. The CLI maps this to exit 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Attempt to register an identity that already exists in a store.
struct RegistrationError : std::runtime_error {
    explicit RegistrationError(const std::string& what) : std::runtime_error(what) {}
};

/// Truncated or out-of-range wire data. Session code catches this and
/// turns it into a malformed-message rejection.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pakelab
