#pragma once

#include "otswarm/simulation.hpp"

#include <stdexcept>
#include <string>

namespace otswarm {

/// Scenario file problem; the message names the offending key path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses and fully validates a JSON scenario. Unknown keys are rejected.
SimConfig parse_config(const std::string& text);

/// Normalized JSON dump with every default made explicit; stable key order.
/// parse_config(dump_config(c)) reproduces c.
std::string dump_config(const SimConfig& config);

/// Reads the file and parses it; file problems surface as ConfigError.
SimConfig load_config(const std::string& path);

}  // namespace otswarm
