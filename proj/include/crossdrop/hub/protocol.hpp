#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "crossdrop/core/error.hpp"
#include "crossdrop/hub/state.hpp"
#include "crossdrop/selection/selection.hpp"

namespace crossdrop::hub {

namespace msg {

struct RegisterDisplay {
  DisplayProfile profile;
  friend bool operator==(const RegisterDisplay&, const RegisterDisplay&) = default;
};
struct RegisterOperator {
  friend bool operator==(const RegisterOperator&, const RegisterOperator&) = default;
};
struct Gesture {
  selection::GestureEvent event;
  friend bool operator==(const Gesture&, const Gesture&) = default;
};
struct PlaceCommand {
  ContentId content_id;
  DisplayId display_id;
  friend bool operator==(const PlaceCommand&, const PlaceCommand&) = default;
};
struct RetrieveCommand {
  ContentId content_id;
  friend bool operator==(const RetrieveCommand&, const RetrieveCommand&) = default;
};
// Asks the hub to resend a Snapshot (desynced or freshly reconnected client).
struct SnapshotRequest {
  friend bool operator==(const SnapshotRequest&, const SnapshotRequest&) = default;
};
struct Snapshot {
  HubState state;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};
struct Ack {
  std::uint64_t seq = 0;
  friend bool operator==(const Ack&, const Ack&) = default;
};
struct Error {
  ErrorCode code = ErrorCode::kProtocolError;
  std::string detail;
  friend bool operator==(const Error&, const Error&) = default;
};

}  // namespace msg

using Body = std::variant<msg::RegisterDisplay, msg::RegisterOperator, msg::Gesture, msg::PlaceCommand,
                          msg::RetrieveCommand, msg::SnapshotRequest, msg::Snapshot, Delta, msg::Ack, msg::Error>;

struct Message {
  std::string session_id;
  std::uint64_t seq = 0;
  Body body;

  friend bool operator==(const Message&, const Message&) = default;
};

// Type tag written to the "type" field ("RegisterDisplay", "Delta", ...).
std::string_view type_name(const Body& body);

nlohmann::json message_to_json(const Message& m);
// Throws Error{kInvalidArgument} (or nlohmann exceptions) on schema violations.
Message message_from_json(const nlohmann::json& j);

// Frame = 4-byte big-endian body length + UTF-8 JSON body.
inline constexpr std::size_t kFrameHeaderSize = 4;
inline constexpr std::size_t kMaxFrameBody = 16 * 1024 * 1024;

std::vector<std::uint8_t> encode(const Message& m);
// Exactly one frame. Throws ProtocolError carrying the failing byte offset.
Message decode(std::span<const std::uint8_t> bytes);

// Incremental splitter for a byte stream of frames.
class FrameReader {
 public:
  void append(std::span<const std::uint8_t> bytes);
  // Next complete frame, header included; nullopt if more bytes are needed.
  // Throws ProtocolError for an oversized length prefix.
  std::optional<std::vector<std::uint8_t>> next_frame();
  std::size_t buffered() const noexcept { return buffer_.size() - start_; }

 private:
  std::vector<std::uint8_t> buffer_;
  std::size_t start_ = 0;
};

}  // namespace crossdrop::hub
