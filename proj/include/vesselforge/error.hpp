#pragma once

#include <stdexcept>
#include <string>

namespace vesselforge {

/// Invalid argument to a pure operation (out-of-range t, mismatched grids, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inconsistent or invalid user configuration. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem or codec failure. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace vesselforge
