#include "crossdrop/hub/config.hpp"

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/json_io.hpp"

namespace crossdrop::hub {

HubConfig parse_hub_config(std::string_view text, const std::filesystem::path& base_dir, std::string_view source) {
  const auto fail = [&](const std::string& what) {
    return Error(ErrorCode::kConfigurationError, std::string(source) + ": " + what);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw fail("line " + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  HubConfig config;
  try {
    const auto port = j.value("port", static_cast<int>(config.port));
    if (port < 0 || port > 65535) {
      throw fail("port out of range");
    }
    config.port = static_cast<std::uint16_t>(port);
    config.tick_hz = j.value("tick_hz", config.tick_hz);
    if (j.contains("policy")) {
      config.policy = j.at("policy").get<transfer::TransferPolicy>();
    }
    if (j.contains("ruleset_path") && !j.at("ruleset_path").is_null()) {
      config.ruleset_path = resolve(j.at("ruleset_path").get<std::string>());
    }
    config.content_library_path = resolve(j.at("content_library_path").get<std::string>());
    config.session_timeout = j.value("session_timeout", config.session_timeout);
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigurationError) {
      throw;
    }
    throw fail(e.detail());
  }
  if (!(config.tick_hz > 0.0)) {
    throw fail("tick_hz must be positive");
  }
  if (!config.policy.is_valid()) {
    throw fail("policy needs duration > 0 and fit_fraction in (0,1]");
  }
  if (!(config.session_timeout > 0.0)) {
    throw fail("session_timeout must be positive");
  }
  return config;
}

HubConfig load_hub_config(const std::filesystem::path& path) {
  return parse_hub_config(read_text_file(path), path.parent_path(), path.string());
}

HubContext make_context(const HubConfig& config) {
  HubContext ctx;
  ctx.policy = config.policy;
  if (config.ruleset_path) {
    ctx.ruleset = interpreter::load_ruleset(*config.ruleset_path);
  }
  return ctx;
}

HubState make_initial_state(const HubConfig& config) {
  const auto items = load_content_library(config.content_library_path);
  return make_hub_state(make_world(items, {}));
}

}  // namespace crossdrop::hub
