#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Minimal RFC 6455 support so browser clients can carry the same length-
// prefixed frames inside binary WebSocket messages.
namespace crossdrop::hub::ws {

enum class Opcode : std::uint8_t {
  kContinuation = 0x0,
  kText = 0x1,
  kBinary = 0x2,
  kClose = 0x8,
  kPing = 0x9,
  kPong = 0xA,
};

// Sec-WebSocket-Accept for a client key.
std::string accept_key(std::string_view client_key);

// Parses an HTTP upgrade request head (through the blank line). Returns the
// Sec-WebSocket-Key when it is a valid WebSocket upgrade.
std::optional<std::string> upgrade_key(std::string_view request_head);

std::string handshake_response(std::string_view client_key);

// Server frames are unmasked; clients must pass a mask.
std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> payload, Opcode opcode = Opcode::kBinary,
                                       std::optional<std::array<std::uint8_t, 4>> mask = std::nullopt);

struct Frame {
  Opcode opcode = Opcode::kBinary;
  std::vector<std::uint8_t> payload;
};

// Reassembles fragmented messages; control frames are returned as they arrive.
class Decoder {
 public:
  void append(std::span<const std::uint8_t> bytes);
  // Throws ProtocolError on malformed frames.
  std::optional<Frame> next();

 private:
  std::vector<std::uint8_t> buffer_;
  std::vector<std::uint8_t> partial_;
  std::optional<Opcode> partial_opcode_;
};

}  // namespace crossdrop::hub::ws
