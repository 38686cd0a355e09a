#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crossdrop/core/model.hpp"
#include "crossdrop/hub/protocol.hpp"
#include "crossdrop/transfer/transfer.hpp"

namespace crossdrop::sim {

struct ScriptEntry {
  double at = 0.0;  // seconds of virtual time
  hub::Message event;
};

// Displays are registered before the first tick; the script only carries
// operator traffic (or extra display registrations).
struct Scenario {
  std::string name;
  std::filesystem::path content_library;
  std::optional<std::filesystem::path> ruleset;  // built-in default rules when absent
  std::vector<DisplayProfile> displays;
  std::vector<ScriptEntry> script;  // sorted by `at`
  double end_time = 0.0;            // >= last `at`
  std::optional<transfer::TransferPolicy> policy;
};

// Relative paths resolve against base_dir. Throws Error{kConfigurationError}.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir,
                        std::string_view source = "<memory>");
Scenario load_scenario(const std::filesystem::path& path);

// Throws Error{kConfigurationError} naming the first violation.
void validate_scenario(const Scenario& scenario);

struct LogRecord {
  std::uint64_t tick = 0;
  hub::Message message;  // Delta (session "*") or Error (offending session)

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

using EventLog = std::vector<LogRecord>;

// Virtual clock at k/tick_hz for k = 0..ceil(end_time*tick_hz). On each tick
// due transfers complete first, then script events whose `at` rounds up to
// that tick are applied in file order.
EventLog run_scenario(const Scenario& scenario, int tick_hz);

}  // namespace crossdrop::sim
