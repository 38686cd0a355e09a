#include "crossdrop/sim/scenario.hpp"

#include <cmath>

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/json_io.hpp"
#include "crossdrop/hub/hub.hpp"
#include "crossdrop/interpreter/interpreter.hpp"

namespace crossdrop::sim {

namespace {

Error config_error(std::string_view source, const std::string& what) {
  return Error(ErrorCode::kConfigurationError, std::string(source) + ": " + what);
}

// Rounds up so an event never fires before its stated time; the epsilon
// keeps at = k/hz on tick k despite the division.
std::uint64_t tick_of(double at, int tick_hz) {
  return static_cast<std::uint64_t>(std::ceil(at * tick_hz - 1e-9));
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir, std::string_view source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(source, "line " + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " +
                                   e.what());
  }
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  Scenario s;
  try {
    s.name = j.at("name").get<std::string>();
    s.content_library = resolve(j.at("content_library").get<std::string>());
    if (j.contains("ruleset") && !j.at("ruleset").is_null()) {
      s.ruleset = resolve(j.at("ruleset").get<std::string>());
    }
    s.displays = j.value("displays", std::vector<DisplayProfile>{});
    const auto& script = j.at("script");
    for (std::size_t i = 0; i < script.size(); ++i) {
      try {
        s.script.push_back({script[i].at("at").get<double>(), hub::message_from_json(script[i].at("event"))});
      } catch (const nlohmann::json::exception& e) {
        throw config_error(source, "script[" + std::to_string(i) + "]: " + e.what());
      } catch (const Error& e) {
        throw config_error(source, "script[" + std::to_string(i) + "]: " + e.detail());
      }
    }
    s.end_time = j.at("end_time").get<double>();
    if (j.contains("policy")) {
      s.policy = j.at("policy").get<transfer::TransferPolicy>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(source, e.what());
  }
  try {
    validate_scenario(s);
  } catch (const Error& e) {
    throw config_error(source, e.detail());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigurationError, e.detail());
  }
  return parse_scenario(text, path.parent_path(), path.string());
}

void validate_scenario(const Scenario& scenario) {
  const auto fail = [](const std::string& what) { return Error(ErrorCode::kConfigurationError, what); };
  if (!std::isfinite(scenario.end_time) || scenario.end_time < 0.0) {
    throw fail("end_time must be finite and >= 0");
  }
  double previous = 0.0;
  for (std::size_t i = 0; i < scenario.script.size(); ++i) {
    const double at = scenario.script[i].at;
    if (!std::isfinite(at) || at < 0.0) {
      throw fail("script[" + std::to_string(i) + "]: at must be finite and >= 0");
    }
    if (at < previous) {
      throw fail("script[" + std::to_string(i) + "]: script is not sorted by at");
    }
    previous = at;
  }
  if (scenario.end_time < previous) {
    throw fail("end_time precedes the last script event");
  }
  if (scenario.policy && !scenario.policy->is_valid()) {
    throw fail("policy needs duration > 0 and fit_fraction in (0,1]");
  }
}

EventLog run_scenario(const Scenario& scenario, int tick_hz) {
  if (tick_hz <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "tick_hz must be positive");
  }
  validate_scenario(scenario);

  hub::HubContext ctx;
  hub::HubState initial;
  try {
    if (scenario.ruleset) {
      ctx.ruleset = interpreter::load_ruleset(*scenario.ruleset);
    }
    if (scenario.policy) {
      ctx.policy = *scenario.policy;
    }
    const auto items = load_content_library(scenario.content_library);
    initial = hub::make_hub_state(make_world(items, scenario.displays));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigurationError) {
      throw;
    }
    throw Error(ErrorCode::kConfigurationError, e.detail());
  }

  hub::Hub hub(std::move(ctx), std::move(initial));
  EventLog log;
  std::uint64_t tick = 0;
  hub.set_observer([&](const hub::Message& m) { log.push_back({tick, m}); });

  const std::uint64_t last_tick = tick_of(scenario.end_time, tick_hz);
  std::size_t next = 0;
  for (tick = 0; tick <= last_tick; ++tick) {
    const double now = static_cast<double>(tick) / tick_hz;
    hub.tick(now);
    while (next < scenario.script.size() && tick_of(scenario.script[next].at, tick_hz) <= tick) {
      const auto& message = scenario.script[next].event;
      if (!hub.has_session(message.session_id)) {
        hub.open_session(message.session_id, now);
      }
      hub.handle(message, now);
      ++next;
    }
    for (const auto& entry : scenario.script) {
      hub.drain(entry.event.session_id);
    }
  }
  return log;
}

}  // namespace crossdrop::sim
