#include "evotransit/raster.hpp"

#include <string>

#include "evotransit/error.hpp"

namespace evotransit {

namespace {

void check_dims(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) {
    throw Error(ErrorKind::InvalidArgument,
                "raster dimensions must be positive, got " + std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Raster::Raster(std::size_t width, std::size_t height, Rgb fill) : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(width * height, fill);
}

Raster::Raster(std::size_t width, std::size_t height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != width * height) {
    throw Error(ErrorKind::InvalidArgument, "pixel buffer holds " + std::to_string(pixels_.size()) +
                                                " entries, expected " + std::to_string(width * height));
  }
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyMutableSet: return "EmptyMutableSet";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnreadableFile: return "UnreadableFile";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::DecodeError: return "DecodeError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::EmptyFrameList: return "EmptyFrameList";
    case ErrorKind::UsageError: return "UsageError";
    case ErrorKind::SafetyCapExceeded: return "SafetyCapExceeded";
  }
  return "Unknown";
}

}  // namespace evotransit
