#include <bit>
#include <string>

#include "evotransit/error.hpp"
#include "evotransit/imaging.hpp"

namespace evotransit {

namespace {

constexpr std::uint32_t kBiRgb = 0;
constexpr std::uint32_t kBiBitfields = 3;

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  [[nodiscard]] std::uint32_t u32(std::size_t at) const {
    need(at, 4);
    return std::uint32_t{bytes_[at]} | std::uint32_t{bytes_[at + 1]} << 8 | std::uint32_t{bytes_[at + 2]} << 16 |
           std::uint32_t{bytes_[at + 3]} << 24;
  }
  [[nodiscard]] std::uint16_t u16(std::size_t at) const {
    need(at, 2);
    return static_cast<std::uint16_t>(bytes_[at] | bytes_[at + 1] << 8);
  }
  [[nodiscard]] std::uint8_t u8(std::size_t at) const {
    need(at, 1);
    return bytes_[at];
  }
  void need(std::size_t at, std::size_t n) const {
    if (at > bytes_.size() || bytes_.size() - at < n) throw Error(ErrorKind::DecodeError, "bmp truncated");
  }

 private:
  std::span<const std::uint8_t> bytes_;
};

// Scales a masked channel to 8 bits.
std::uint8_t extract(std::uint32_t value, std::uint32_t mask) {
  if (mask == 0) return 0;
  const int shift = std::countr_zero(mask);
  const int bits = std::popcount(mask);
  const std::uint32_t v = (value & mask) >> shift;
  if (bits >= 8) return static_cast<std::uint8_t>(v >> (bits - 8));
  const std::uint32_t max = (1u << bits) - 1;
  return static_cast<std::uint8_t>((v * 255 + max / 2) / max);
}

}  // namespace

// Uncompressed BMP with a BITMAPINFOHEADER or later: 1/4/8-bit palettes,
// 24-bit BGR, 16/32-bit with BI_RGB or BI_BITFIELDS. RLE is not supported.
Raster decode_bmp(std::span<const std::uint8_t> bytes) {
  const Reader in(bytes);
  const std::uint32_t pixel_offset = in.u32(10);
  const std::uint32_t header_size = in.u32(14);
  if (header_size < 40) throw Error(ErrorKind::UnsupportedFormat, "bmp core headers are not supported");
  const auto raw_width = static_cast<std::int32_t>(in.u32(18));
  const auto raw_height = static_cast<std::int32_t>(in.u32(22));
  const std::uint16_t bpp = in.u16(28);
  const std::uint32_t compression = in.u32(30);
  std::uint32_t colors_used = in.u32(46);

  if (raw_width <= 0 || raw_height == 0 || raw_height == INT32_MIN) {
    throw Error(ErrorKind::DecodeError, "bmp has invalid dimensions");
  }
  const bool bottom_up = raw_height > 0;
  const std::size_t width = static_cast<std::size_t>(raw_width);
  const std::size_t height = static_cast<std::size_t>(bottom_up ? raw_height : -raw_height);
  if (width > (std::size_t{1} << 16) || height > (std::size_t{1} << 16)) {
    throw Error(ErrorKind::DecodeError, "bmp dimensions too large");
  }

  std::uint32_t masks[3] = {0x00FF0000, 0x0000FF00, 0x000000FF};
  if (bpp == 16) {
    masks[0] = 0x7C00;
    masks[1] = 0x03E0;
    masks[2] = 0x001F;
  }
  if (compression == kBiBitfields) {
    if (bpp != 16 && bpp != 32) throw Error(ErrorKind::UnsupportedFormat, "bitfields need 16 or 32 bpp");
    // Masks follow a 40-byte header, or sit inside a V4/V5 header.
    for (int i = 0; i < 3; ++i) masks[i] = in.u32(14 + 40 + 4 * static_cast<std::size_t>(i));
  } else if (compression != kBiRgb) {
    throw Error(ErrorKind::UnsupportedFormat, "compressed bmp (type " + std::to_string(compression) + ")");
  }

  std::vector<Rgb> palette;
  if (bpp <= 8) {
    if (bpp != 1 && bpp != 4 && bpp != 8) throw Error(ErrorKind::UnsupportedFormat, "bmp bit depth " + std::to_string(bpp));
    if (colors_used == 0 || colors_used > (1u << bpp)) colors_used = 1u << bpp;
    const std::size_t table = 14 + header_size;
    for (std::uint32_t i = 0; i < colors_used; ++i) {
      const std::size_t at = table + 4 * std::size_t{i};
      palette.push_back({in.u8(at + 2), in.u8(at + 1), in.u8(at)});
    }
  } else if (bpp != 16 && bpp != 24 && bpp != 32) {
    throw Error(ErrorKind::UnsupportedFormat, "bmp bit depth " + std::to_string(bpp));
  }

  const std::size_t stride = (width * bpp + 31) / 32 * 4;
  in.need(pixel_offset, stride * height);

  std::vector<Rgb> pixels(width * height);
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t src_row = bottom_up ? height - 1 - y : y;
    const std::size_t base = pixel_offset + src_row * stride;
    for (std::size_t x = 0; x < width; ++x) {
      Rgb& px = pixels[y * width + x];
      switch (bpp) {
        case 1:
        case 4:
        case 8: {
          const std::size_t bit = x * bpp;
          const std::uint8_t byte = in.u8(base + bit / 8);
          const unsigned index = (byte >> (8 - bpp - bit % 8)) & ((1u << bpp) - 1);
          if (index >= palette.size()) throw Error(ErrorKind::DecodeError, "bmp palette index out of range");
          px = palette[index];
          break;
        }
        case 16: {
          const std::uint32_t v = in.u16(base + 2 * x);
          px = {extract(v, masks[0]), extract(v, masks[1]), extract(v, masks[2])};
          break;
        }
        case 24:
          px = {in.u8(base + 3 * x + 2), in.u8(base + 3 * x + 1), in.u8(base + 3 * x)};
          break;
        case 32: {
          const std::uint32_t v = in.u32(base + 4 * x);
          px = {extract(v, masks[0]), extract(v, masks[1]), extract(v, masks[2])};
          break;
        }
      }
    }
  }
  return Raster(width, height, std::move(pixels));
}

}  // namespace evotransit
