// error.hpp: exception types shared by the simulation modules

#pragma once

#include <stdexcept>
#include <string>

namespace otto {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Invalid or inconsistent run configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested combination is valid input but not supported by the chosen path
// (e.g. anharmonic potential on the moment propagator).
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Density grid lost mass through its boundary frame or produced NaN.
class GridOverflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Run-level failure (too many aborted trajectories, I/O, ...).
class RunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace otto
