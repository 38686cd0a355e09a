#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "crossdrop/sim/scenario.hpp"

namespace crossdrop::sim {

// Compact JSON with sorted keys and every non-integer number printed as
// fixed 9-decimal text ("-0.000000000" is written as "0.000000000").
std::string canonical_dump(const nlohmann::json& j);

// One {"message": ..., "tick": N} record per line.
std::string serialize_log(const EventLog& log);

struct Diff {
  std::optional<std::size_t> index;  // first divergent record
  std::string rendered;

  bool empty() const noexcept { return !index.has_value(); }
};

// Structural comparison of two NDJSON logs. Throws Error{kConfigurationError}
// when either does not parse.
Diff diff_logs(std::string_view log, std::string_view golden, std::string_view log_source = "log",
               std::string_view golden_source = "golden");
Diff verify_log(const std::filesystem::path& log_path, const std::filesystem::path& golden_path);

}  // namespace crossdrop::sim
