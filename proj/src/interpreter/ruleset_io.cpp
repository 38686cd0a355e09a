#include <limits>
#include <set>
#include <tuple>

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/json_io.hpp"
#include "crossdrop/interpreter/interpreter.hpp"

namespace crossdrop::interpreter {

namespace {

// Byte offsets of each object in the top-level "rules" array.
std::vector<std::size_t> rule_offsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  int depth = 0;
  int rules_depth = -1;
  bool in_string = false;
  bool escaped = false;
  std::size_t string_start = 0;
  std::string_view last_string;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
        last_string = text.substr(string_start, i - string_start);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_string = true;
        string_start = i + 1;
        break;
      case '[':
        if (depth == 1 && rules_depth < 0 && last_string == "rules") {
          rules_depth = depth + 1;
        }
        ++depth;
        break;
      case '{':
        if (depth == rules_depth) {
          offsets.push_back(i);
        }
        ++depth;
        break;
      case ']':
      case '}':
        --depth;
        if (rules_depth >= 0 && depth < rules_depth) {
          rules_depth = std::numeric_limits<int>::max();  // closed
        }
        break;
      default:
        break;
    }
  }
  return offsets;
}

template <typename Enum>
void put_optional(nlohmann::json& j, const char* key, const std::optional<Enum>& value) {
  if (value) {
    j[key] = std::string(to_string(*value));
  }
}

}  // namespace

void to_json(nlohmann::json& j, const Produce& p) {
  j = {{"mode", to_string(p.mode)},
       {"explosion_factor", p.explosion_factor},
       {"labels", p.labels},
       {"details", p.details},
       {"title", p.title}};
}

void from_json(const nlohmann::json& j, Produce& p) {
  p.mode = representation_mode_from_string(j.at("mode").get<std::string>());
  p.explosion_factor = j.value("explosion_factor", 0.0);
  p.labels = j.value("labels", false);
  p.details = j.value("details", false);
  p.title = j.value("title", true);
}

void to_json(nlohmann::json& j, const RuleMatch& m) {
  j = nlohmann::json::object();
  put_optional(j, "content_kind", m.content_kind);
  put_optional(j, "display_kind", m.display_kind);
  put_optional(j, "audience", m.audience);
}

void from_json(const nlohmann::json& j, RuleMatch& m) {
  m = {};
  if (j.contains("content_kind") && !j.at("content_kind").is_null()) {
    m.content_kind = content_kind_from_string(j.at("content_kind").get<std::string>());
  }
  if (j.contains("display_kind") && !j.at("display_kind").is_null()) {
    m.display_kind = display_kind_from_string(j.at("display_kind").get<std::string>());
  }
  if (j.contains("audience") && !j.at("audience").is_null()) {
    m.audience = audience_from_string(j.at("audience").get<std::string>());
  }
}

void to_json(nlohmann::json& j, const Rule& r) {
  j = {{"match", r.match}, {"produce", r.produce}, {"priority", r.priority}};
}

void from_json(const nlohmann::json& j, Rule& r) {
  r.match = j.value("match", nlohmann::json::object()).get<RuleMatch>();
  r.produce = j.at("produce").get<Produce>();
  r.priority = j.value("priority", 0);
}

void to_json(nlohmann::json& j, const RuleSet& r) { j = {{"rules", r.rules}, {"default", r.fallback}}; }

RuleSet parse_ruleset(std::string_view text, std::string_view source) {
  const auto fail = [&](std::size_t line, const std::string& what) -> Error {
    return Error(ErrorCode::kConfigurationError, std::string(source) + ":" + std::to_string(line) + ": " + what);
  };

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw fail(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object() || !doc.contains("default")) {
    throw fail(1, "ruleset must be an object with a \"default\" clause");
  }

  const auto offsets = rule_offsets(text);
  const auto line_of_rule = [&](std::size_t index) {
    return index < offsets.size() ? line_of_offset(text, offsets[index]) : std::size_t{1};
  };

  RuleSet set;
  try {
    set.fallback = doc.at("default").get<Produce>();
  } catch (const std::exception& e) {
    throw fail(1, std::string("default clause: ") + e.what());
  }
  if (!(set.fallback.explosion_factor >= 0.0)) {
    throw fail(1, "default clause: explosion_factor must be >= 0");
  }

  const nlohmann::json rules = doc.value("rules", nlohmann::json::array());
  if (!rules.is_array()) {
    throw fail(1, "\"rules\" must be an array");
  }
  std::set<std::tuple<int, int, int>> seen;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    Rule rule;
    try {
      rule = rules[i].get<Rule>();
    } catch (const std::exception& e) {
      throw fail(line_of_rule(i), "rules[" + std::to_string(i) + "]: " + e.what());
    }
    if (!(rule.produce.explosion_factor >= 0.0)) {
      throw fail(line_of_rule(i), "rules[" + std::to_string(i) + "]: explosion_factor must be >= 0");
    }
    const auto key = std::make_tuple(rule.match.content_kind ? static_cast<int>(*rule.match.content_kind) : -1,
                                     rule.match.display_kind ? static_cast<int>(*rule.match.display_kind) : -1,
                                     rule.match.audience ? static_cast<int>(*rule.match.audience) : -1);
    if (!seen.insert(key).second) {
      throw fail(line_of_rule(i), "rules[" + std::to_string(i) + "]: duplicate match triple");
    }
    set.rules.push_back(std::move(rule));
  }
  return set;
}

RuleSet load_ruleset(const std::filesystem::path& path) {
  return parse_ruleset(read_text_file(path), path.string());
}

}  // namespace crossdrop::interpreter
