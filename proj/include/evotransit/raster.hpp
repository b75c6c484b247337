#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace evotransit {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct PixelCoord {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Row-major RGB8 image. Width and height are both at least one.
class Raster {
 public:
  Raster(std::size_t width, std::size_t height, Rgb fill = {});
  Raster(std::size_t width, std::size_t height, std::vector<Rgb> pixels);

  [[nodiscard]] std::size_t width() const noexcept { return width_; }
  [[nodiscard]] std::size_t height() const noexcept { return height_; }
  [[nodiscard]] std::size_t size() const noexcept { return pixels_.size(); }

  [[nodiscard]] const Rgb& at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
  [[nodiscard]] Rgb& at(std::size_t row, std::size_t col) { return pixels_[row * width_ + col]; }
  [[nodiscard]] const Rgb& operator[](std::size_t index) const { return pixels_[index]; }
  [[nodiscard]] Rgb& operator[](std::size_t index) { return pixels_[index]; }

  [[nodiscard]] std::span<const Rgb> pixels() const noexcept { return pixels_; }
  [[nodiscard]] std::span<Rgb> pixels() noexcept { return pixels_; }

  [[nodiscard]] bool same_shape(const Raster& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<Rgb> pixels_;
};

}  // namespace evotransit
