#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evotransit {

enum class ErrorKind {
  DimensionMismatch,
  EmptyMutableSet,
  InvalidArgument,
  UnreadableFile,
  UnsupportedFormat,
  DecodeError,
  IoError,
  EmptyFrameList,
  UsageError,
  SafetyCapExceeded,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace evotransit
