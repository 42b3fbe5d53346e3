#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liquid {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wrong length or malformed hex/JSON for a wire or file value.
class EncodingError : public Error {
public:
    using Error::Error;
};

/// A transition or reversal could not be built from the supplied secrets.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// A stored ledger does not replay cleanly.
class ReplayError : public Error {
public:
    ReplayError(std::size_t slot, std::size_t position, const std::string& why)
        : Error("replay failed at slot " + std::to_string(slot) + ", entry " +
                std::to_string(position) + ": " + why),
          slot_(slot), position_(position) {}

    std::size_t slot() const { return slot_; }
    std::size_t position() const { return position_; }

private:
    std::size_t slot_;
    std::size_t position_;
};

/// Unreadable, truncated, or wrong-version file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Wallet file could not be decrypted (wrong passphrase or tampering).
class DecryptionError : public Error {
public:
    using Error::Error;
};

/// Operation called in a state that violates its precondition.
class StateError : public Error {
public:
    using Error::Error;
};

/// Bad scenario script or CLI configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace liquid
