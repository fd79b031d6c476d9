#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "fpl/operator_core.hpp"
#include "fpl/schemes.hpp"

namespace fpl::cli {

/// Problems with the configuration file or command line (exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numeric or invariant failures during execution (exit code 3).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json load_json(const std::string& path);

/// Builds an operator from {"catalog": name} or
/// {"expr": text, "domain": [lo, hi]}, with an optional "domain" override
/// for catalog entries and an optional "name".
ScalarOperator operator_from_json(const nlohmann::json& spec);

/// Reads {"a": ..., "c": ..., "d": ...} where each entry is
/// {"constant": v} | {"reciprocal": k} | {"list": [...]}.
ControlSequences control_from_json(const nlohmann::json* spec);

StopRule stop_from_json(const nlohmann::json* spec, const StopRule& defaults);

/// Certification grid density: FPL_GRID_POINTS when set (must be an
/// integer >= 2), 100001 otherwise.
int default_grid_points();

}  // namespace fpl::cli
