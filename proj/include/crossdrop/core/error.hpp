#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crossdrop {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kTransitionRejected,
  kForbidden,
  kInvalidState,
  kNoTarget,
  kProtocolError,
  kDesyncError,
  kConfigurationError,
};

// Wire names ("not-found", "transition-rejected", ...).
std::string_view to_string(ErrorCode code);
ErrorCode error_code_from_string(std::string_view name);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Malformed bytes on the wire; offset is the byte position where decoding failed.
class ProtocolError : public Error {
 public:
  ProtocolError(std::size_t offset, const std::string& detail)
      : Error(ErrorCode::kProtocolError, "at byte " + std::to_string(offset) + ": " + detail), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace crossdrop
