#include "crossdrop/sim/event_log.hpp"

#include <cstdio>
#include <sstream>

#include "crossdrop/core/error.hpp"
#include "crossdrop/core/json_io.hpp"

namespace crossdrop::sim {

namespace {

void write(std::string& out, const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // std::map order: sorted
        if (!first) {
          out += ',';
        }
        first = false;
        out += nlohmann::json(key).dump();
        out += ':';
        write(out, value);
      }
      out += '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i != 0) {
          out += ',';
        }
        write(out, j[i]);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::number_float: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.9f", j.get<double>());
      std::string text(buf);
      if (text == "-0.000000000") {
        text.erase(0, 1);
      }
      out += text;
      break;
    }
    default:
      out += j.dump();
  }
}

std::vector<nlohmann::json> parse_lines(std::string_view text, std::string_view source) {
  std::vector<nlohmann::json> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    ++line_no;
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      continue;
    }
    try {
      records.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kConfigurationError,
                  std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace

std::string canonical_dump(const nlohmann::json& j) {
  std::string out;
  write(out, j);
  return out;
}

std::string serialize_log(const EventLog& log) {
  std::string out;
  for (const auto& record : log) {
    nlohmann::json j;
    j["tick"] = record.tick;
    j["message"] = hub::message_to_json(record.message);
    write(out, j);
    out += '\n';
  }
  return out;
}

Diff diff_logs(std::string_view log, std::string_view golden, std::string_view log_source,
               std::string_view golden_source) {
  const auto a = parse_lines(log, log_source);
  const auto b = parse_lines(golden, golden_source);
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (a[i] != b[i]) {
      std::ostringstream os;
      os << "record " << i << " differs; patch from golden to log:\n"
         << nlohmann::json::diff(b[i], a[i]).dump(2) << "\n";
      return {i, os.str()};
    }
  }
  if (a.size() != b.size()) {
    std::ostringstream os;
    if (a.size() > b.size()) {
      os << "record " << common << " only in log:\n" << canonical_dump(a[common]) << "\n";
    } else {
      os << "record " << common << " only in golden:\n" << canonical_dump(b[common]) << "\n";
    }
    return {common, os.str()};
  }
  return {};
}

Diff verify_log(const std::filesystem::path& log_path, const std::filesystem::path& golden_path) {
  const auto read = [](const std::filesystem::path& p) {
    try {
      return read_text_file(p);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigurationError, e.detail());
    }
  };
  return diff_logs(read(log_path), read(golden_path), log_path.string(), golden_path.string());
}

}  // namespace crossdrop::sim
