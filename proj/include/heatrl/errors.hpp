#pragma once

#include <stdexcept>
#include <string>

namespace heatrl {

// Error taxonomy used across the library. The C API maps each class to a
// status code; everything else surfaces as HEATRL_E_INTERNAL.

// Invalid configuration value or inconsistent component wiring.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file. Messages name file, row and column where possible.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failure (missing file, unwritable directory).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid caller-supplied value (out of range, negative energy, ...).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite value reached a numeric kernel.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training diverged or could not proceed.
struct TrainingError : std::runtime_error {
    explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

// API contract violated by the caller (e.g. querying the safety filter
// after its window has ended).
struct ContractError : std::logic_error {
    explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace heatrl
