#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "crossdrop/hub/engine.hpp"
#include "crossdrop/hub/state.hpp"

namespace crossdrop::hub {

// {"port", "tick_hz", "policy": {...}, "ruleset_path", "content_library_path",
//  "session_timeout"}. Relative paths resolve against the config file's directory.
struct HubConfig {
  std::uint16_t port = 7460;
  double tick_hz = 60.0;
  transfer::TransferPolicy policy{};
  std::optional<std::filesystem::path> ruleset_path;  // built-in default rules when absent
  std::filesystem::path content_library_path;
  double session_timeout = 30.0;  // s without inbound traffic
};

HubConfig parse_hub_config(std::string_view text, const std::filesystem::path& base_dir,
                           std::string_view source = "<memory>");
HubConfig load_hub_config(const std::filesystem::path& path);

HubContext make_context(const HubConfig& config);
HubState make_initial_state(const HubConfig& config);

}  // namespace crossdrop::hub
