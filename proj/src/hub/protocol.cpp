#include "crossdrop/hub/protocol.hpp"

#include "crossdrop/core/json_io.hpp"
#include "crossdrop/core/overloaded.hpp"

namespace crossdrop::hub {

using nlohmann::json;

std::string_view type_name(const Body& body) {
  return std::visit(overloaded{
                        [](const msg::RegisterDisplay&) { return std::string_view("RegisterDisplay"); },
                        [](const msg::RegisterOperator&) { return std::string_view("RegisterOperator"); },
                        [](const msg::Gesture&) { return std::string_view("Gesture"); },
                        [](const msg::PlaceCommand&) { return std::string_view("PlaceCommand"); },
                        [](const msg::RetrieveCommand&) { return std::string_view("RetrieveCommand"); },
                        [](const msg::SnapshotRequest&) { return std::string_view("SnapshotRequest"); },
                        [](const msg::Snapshot&) { return std::string_view("Snapshot"); },
                        [](const Delta&) { return std::string_view("Delta"); },
                        [](const msg::Ack&) { return std::string_view("Ack"); },
                        [](const msg::Error&) { return std::string_view("Error"); },
                    },
                    body);
}

json message_to_json(const Message& m) {
  json body = std::visit(overloaded{
                             [](const msg::RegisterDisplay& x) -> json { return {{"profile", x.profile}}; },
                             [](const msg::RegisterOperator&) -> json { return json::object(); },
                             [](const msg::Gesture& x) -> json { return {{"event", x.event}}; },
                             [](const msg::PlaceCommand& x) -> json {
                               return {{"content_id", x.content_id}, {"display_id", x.display_id}};
                             },
                             [](const msg::RetrieveCommand& x) -> json { return {{"content_id", x.content_id}}; },
                             [](const msg::SnapshotRequest&) -> json { return json::object(); },
                             [](const msg::Snapshot& x) -> json { return {{"state", x.state}}; },
                             [](const Delta& x) -> json { return x; },
                             [](const msg::Ack& x) -> json { return {{"seq", x.seq}}; },
                             [](const msg::Error& x) -> json {
                               return {{"code", to_string(x.code)}, {"detail", x.detail}};
                             },
                         },
                         m.body);
  return {{"type", type_name(m.body)}, {"session_id", m.session_id}, {"seq", m.seq}, {"body", std::move(body)}};
}

Message message_from_json(const json& j) {
  Message m;
  m.session_id = j.at("session_id").get<std::string>();
  m.seq = get_unsigned(j, "seq");
  const auto type = j.at("type").get<std::string>();
  const json& b = j.at("body");
  if (!b.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "message body must be an object");
  }
  if (type == "RegisterDisplay") {
    m.body = msg::RegisterDisplay{b.at("profile").get<DisplayProfile>()};
  } else if (type == "RegisterOperator") {
    m.body = msg::RegisterOperator{};
  } else if (type == "Gesture") {
    m.body = msg::Gesture{b.at("event").get<selection::GestureEvent>()};
  } else if (type == "PlaceCommand") {
    m.body = msg::PlaceCommand{b.at("content_id").get<std::string>(), b.at("display_id").get<std::string>()};
  } else if (type == "RetrieveCommand") {
    m.body = msg::RetrieveCommand{b.at("content_id").get<std::string>()};
  } else if (type == "SnapshotRequest") {
    m.body = msg::SnapshotRequest{};
  } else if (type == "Snapshot") {
    m.body = msg::Snapshot{b.at("state").get<HubState>()};
  } else if (type == "Delta") {
    m.body = b.get<Delta>();
  } else if (type == "Ack") {
    m.body = msg::Ack{get_unsigned(b, "seq")};
  } else if (type == "Error") {
    m.body = msg::Error{error_code_from_string(b.at("code").get<std::string>()), b.at("detail").get<std::string>()};
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown message type '" + type + "'");
  }
  return m;
}

std::vector<std::uint8_t> encode(const Message& m) {
  const std::string body = message_to_json(m).dump();
  if (body.size() > kMaxFrameBody) {
    throw Error(ErrorCode::kInvalidArgument, "message exceeds maximum frame size");
  }
  const auto n = static_cast<std::uint32_t>(body.size());
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderSize + body.size());
  out.push_back(static_cast<std::uint8_t>(n >> 24));
  out.push_back(static_cast<std::uint8_t>(n >> 16));
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Message decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderSize) {
    throw ProtocolError(bytes.size(), "truncated frame header");
  }
  const std::size_t n = (std::size_t{bytes[0]} << 24) | (std::size_t{bytes[1]} << 16) | (std::size_t{bytes[2]} << 8) |
                        std::size_t{bytes[3]};
  if (n > kMaxFrameBody) {
    throw ProtocolError(0, "frame length " + std::to_string(n) + " exceeds limit");
  }
  if (bytes.size() < kFrameHeaderSize + n) {
    throw ProtocolError(bytes.size(), "truncated frame body: expected " + std::to_string(n) + " bytes, got " +
                                          std::to_string(bytes.size() - kFrameHeaderSize));
  }
  if (bytes.size() > kFrameHeaderSize + n) {
    throw ProtocolError(kFrameHeaderSize + n, "trailing bytes after frame");
  }
  const auto body = bytes.subspan(kFrameHeaderSize, n);
  json j;
  try {
    j = json::parse(body.begin(), body.end());
  } catch (const json::parse_error& e) {
    throw ProtocolError(kFrameHeaderSize + (e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  try {
    return message_from_json(j);
  } catch (const json::exception& e) {
    throw ProtocolError(kFrameHeaderSize, e.what());
  } catch (const Error& e) {
    throw ProtocolError(kFrameHeaderSize, e.detail());
  }
}

void FrameReader::append(std::span<const std::uint8_t> bytes) {
  if (start_ > 0 && start_ == buffer_.size()) {
    buffer_.clear();
    start_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<std::vector<std::uint8_t>> FrameReader::next_frame() {
  if (buffered() < kFrameHeaderSize) {
    return std::nullopt;
  }
  const std::uint8_t* p = buffer_.data() + start_;
  const std::size_t n =
      (std::size_t{p[0]} << 24) | (std::size_t{p[1]} << 16) | (std::size_t{p[2]} << 8) | std::size_t{p[3]};
  if (n > kMaxFrameBody) {
    throw ProtocolError(0, "frame length " + std::to_string(n) + " exceeds limit");
  }
  if (buffered() < kFrameHeaderSize + n) {
    return std::nullopt;
  }
  std::vector<std::uint8_t> frame(p, p + kFrameHeaderSize + n);
  start_ += kFrameHeaderSize + n;
  if (start_ == buffer_.size()) {
    buffer_.clear();
    start_ = 0;
  } else if (start_ > (1u << 20)) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(start_));
    start_ = 0;
  }
  return frame;
}

}  // namespace crossdrop::hub
