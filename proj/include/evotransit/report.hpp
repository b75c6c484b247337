#pragma once

#include "json.hpp"

#include "evotransit/engine.hpp"

namespace evotransit {

// Insertion-ordered so the serialized key order is stable.
using Json = nlohmann::ordered_json;

[[nodiscard]] Json to_json(const OperatorSpec& spec);
[[nodiscard]] Json to_json(const RunConfig& config);

/// {config, generations, accepted, rejected, final_fraction,
///  milestones:[{fraction, generation, frame, reached_fraction}],
///  termination, mutable_total, fitness_trajectory:[[g, f], ...]}
/// `config` is echoed verbatim.
[[nodiscard]] Json to_json(const RunReport& report, Json config);

/// Two-space indented dump with a trailing newline.
[[nodiscard]] std::string dump(const Json& json);

}  // namespace evotransit
