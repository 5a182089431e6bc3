#pragma once

#include <stdexcept>
#include <string>

namespace gtsim {

/// Raised for any invalid configuration value or combination. The CLI maps it
/// to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace gtsim
