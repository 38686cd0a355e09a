#include "crossdrop/hub/websocket.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cctype>

#include "crossdrop/core/error.hpp"

namespace crossdrop::hub::ws {

namespace {

constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
constexpr std::uint64_t kMaxPayload = 16 * 1024 * 1024;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string accept_key(std::string_view client_key) {
  const std::string input = std::string(client_key) + std::string(kGuid);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(input.data()), input.size(), digest);
  unsigned char encoded[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
  const int n = EVP_EncodeBlock(encoded, digest, SHA_DIGEST_LENGTH);
  return std::string(reinterpret_cast<const char*>(encoded), static_cast<std::size_t>(n));
}

std::optional<std::string> upgrade_key(std::string_view head) {
  if (!head.starts_with("GET ")) {
    return std::nullopt;
  }
  bool upgrade = false;
  std::optional<std::string> key;
  std::size_t pos = head.find("\r\n");
  while (pos != std::string_view::npos && pos + 2 < head.size()) {
    const std::size_t start = pos + 2;
    const std::size_t end = head.find("\r\n", start);
    const std::string_view line = head.substr(start, (end == std::string_view::npos ? head.size() : end) - start);
    pos = end;
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      continue;
    }
    const std::string name = lower(trim(line.substr(0, colon)));
    const std::string_view value = trim(line.substr(colon + 1));
    if (name == "upgrade" && lower(value) == "websocket") {
      upgrade = true;
    } else if (name == "sec-websocket-key") {
      key = std::string(value);
    }
  }
  if (!upgrade || !key) {
    return std::nullopt;
  }
  return key;
}

std::string handshake_response(std::string_view client_key) {
  return "HTTP/1.1 101 Switching Protocols\r\n"
         "Upgrade: websocket\r\n"
         "Connection: Upgrade\r\n"
         "Sec-WebSocket-Accept: " +
         accept_key(client_key) + "\r\n\r\n";
}

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> payload, Opcode opcode,
                                       std::optional<std::array<std::uint8_t, 4>> mask) {
  std::vector<std::uint8_t> out;
  out.reserve(payload.size() + 14);
  out.push_back(static_cast<std::uint8_t>(0x80 | static_cast<std::uint8_t>(opcode)));
  const std::uint8_t mask_bit = mask ? 0x80 : 0x00;
  const std::uint64_t n = payload.size();
  if (n < 126) {
    out.push_back(static_cast<std::uint8_t>(mask_bit | n));
  } else if (n <= 0xFFFF) {
    out.push_back(mask_bit | 126);
    out.push_back(static_cast<std::uint8_t>(n >> 8));
    out.push_back(static_cast<std::uint8_t>(n));
  } else {
    out.push_back(mask_bit | 127);
    for (int shift = 56; shift >= 0; shift -= 8) {
      out.push_back(static_cast<std::uint8_t>(n >> shift));
    }
  }
  if (mask) {
    out.insert(out.end(), mask->begin(), mask->end());
    for (std::size_t i = 0; i < payload.size(); ++i) {
      out.push_back(payload[i] ^ (*mask)[i % 4]);
    }
  } else {
    out.insert(out.end(), payload.begin(), payload.end());
  }
  return out;
}

void Decoder::append(std::span<const std::uint8_t> bytes) { buffer_.insert(buffer_.end(), bytes.begin(), bytes.end()); }

std::optional<Frame> Decoder::next() {
  while (true) {
    if (buffer_.size() < 2) {
      return std::nullopt;
    }
    const bool fin = (buffer_[0] & 0x80) != 0;
    const auto opcode = static_cast<Opcode>(buffer_[0] & 0x0F);
    const auto raw_opcode = static_cast<std::uint8_t>(buffer_[0] & 0x0F);
    if ((buffer_[0] & 0x70) != 0) {
      throw ProtocolError(0, "reserved websocket bits set");
    }
    if ((raw_opcode > 0x2 && raw_opcode < 0x8) || raw_opcode > 0xA) {
      throw ProtocolError(0, "reserved websocket opcode");
    }
    const bool masked = (buffer_[1] & 0x80) != 0;
    std::uint64_t n = buffer_[1] & 0x7F;
    std::size_t header = 2;
    if (n == 126) {
      if (buffer_.size() < 4) {
        return std::nullopt;
      }
      n = (std::uint64_t{buffer_[2]} << 8) | buffer_[3];
      header = 4;
    } else if (n == 127) {
      if (buffer_.size() < 10) {
        return std::nullopt;
      }
      n = 0;
      for (std::size_t i = 2; i < 10; ++i) {
        n = (n << 8) | buffer_[i];
      }
      header = 10;
    }
    if (n > kMaxPayload) {
      throw ProtocolError(0, "websocket payload too large");
    }
    if (raw_opcode >= 0x8 && (!fin || n > 125)) {
      throw ProtocolError(0, "control frames must be final and at most 125 bytes");
    }
    const std::size_t mask_len = masked ? 4 : 0;
    if (buffer_.size() < header + mask_len + n) {
      return std::nullopt;
    }
    std::vector<std::uint8_t> payload(buffer_.begin() + static_cast<std::ptrdiff_t>(header + mask_len),
                                      buffer_.begin() + static_cast<std::ptrdiff_t>(header + mask_len + n));
    if (masked) {
      for (std::size_t i = 0; i < payload.size(); ++i) {
        payload[i] ^= buffer_[header + i % 4];
      }
    }
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(header + mask_len + n));

    if (raw_opcode >= 0x8) {
      return Frame{opcode, std::move(payload)};
    }
    if (opcode == Opcode::kContinuation) {
      if (!partial_opcode_) {
        throw ProtocolError(0, "continuation frame without a message");
      }
      if (partial_.size() + payload.size() > kMaxPayload) {
        throw ProtocolError(0, "reassembled websocket message too large");
      }
      partial_.insert(partial_.end(), payload.begin(), payload.end());
    } else {
      if (partial_opcode_) {
        throw ProtocolError(0, "new message before previous one finished");
      }
      partial_opcode_ = opcode;
      partial_ = std::move(payload);
    }
    if (fin) {
      Frame frame{*partial_opcode_, std::move(partial_)};
      partial_.clear();
      partial_opcode_.reset();
      return frame;
    }
  }
}

}  // namespace crossdrop::hub::ws
