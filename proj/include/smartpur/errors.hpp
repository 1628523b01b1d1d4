#pragma once

#include <stdexcept>
#include <string>

namespace smartpur {

/// Raised for malformed or contradictory experiment configuration.
/// Messages carry the offending key path (e.g. "channel.measurement.n_crs_subframes").
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for malformed datasets, model files, or degenerate data
/// (single-class training sets, empty metric inputs, ...).
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace smartpur
