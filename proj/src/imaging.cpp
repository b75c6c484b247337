#include "evotransit/imaging.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <png.h>

#include "evotransit/error.hpp"

namespace evotransit {

namespace fs = std::filesystem;

ImageFormat sniff_format(std::span<const std::uint8_t> bytes) noexcept {
  static constexpr std::uint8_t kPng[] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (bytes.size() >= 8 && std::equal(std::begin(kPng), std::end(kPng), bytes.begin())) return ImageFormat::Png;
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) return ImageFormat::Jpeg;
  if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') return ImageFormat::Bmp;
  return ImageFormat::Unknown;
}

Raster decode_image(std::span<const std::uint8_t> bytes) {
  switch (sniff_format(bytes)) {
    case ImageFormat::Png: return decode_png(bytes);
    case ImageFormat::Jpeg: return decode_jpeg(bytes);
    case ImageFormat::Bmp: return decode_bmp(bytes);
    case ImageFormat::Unknown: break;
  }
  throw Error(ErrorKind::UnsupportedFormat, "not a PNG, JPEG or BMP stream");
}

Raster load_raster(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::UnreadableFile, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(ErrorKind::UnreadableFile, "read failed for " + path.string());
  try {
    return decode_image(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

Raster decode_png(std::span<const std::uint8_t> bytes) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()) == 0) {
    throw Error(ErrorKind::DecodeError, std::string("png header: ") + image.message);
  }
  // RGBA keeps the color values untouched; compositing onto a background
  // would alter them.
  image.format = PNG_FORMAT_RGBA;
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw Error(ErrorKind::DecodeError, "png has zero size");
  }
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr) == 0) {
    const std::string message = image.message;
    png_image_free(&image);
    throw Error(ErrorKind::DecodeError, "png body: " + message);
  }
  std::vector<Rgb> pixels(std::size_t{image.width} * image.height);
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = {rgba[4 * i], rgba[4 * i + 1], rgba[4 * i + 2]};
  return Raster(image.width, image.height, std::move(pixels));
}

std::vector<std::uint8_t> encode_png(const Raster& raster) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width());
  image.height = static_cast<png_uint_32>(raster.height());
  image.format = PNG_FORMAT_RGB;
  static_assert(sizeof(Rgb) == 3);
  const void* data = raster.pixels().data();
  png_alloc_size_t size = 0;
  if (png_image_write_to_memory(&image, nullptr, &size, 0, data, 0, nullptr) == 0) {
    throw Error(ErrorKind::IoError, std::string("png size query: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (png_image_write_to_memory(&image, out.data(), &size, 0, data, 0, nullptr) == 0) {
    throw Error(ErrorKind::IoError, std::string("png encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

namespace {

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace

void write_png(const Raster& raster, const fs::path& path) { write_bytes(path, encode_png(raster)); }

std::string frame_filename(std::uint64_t generation, double fraction) {
  const auto permille = static_cast<long long>(std::lround(fraction * 1000.0));
  char buf[64];
  std::snprintf(buf, sizeof buf, "frame_g%09llu_p%04lld.png", static_cast<unsigned long long>(generation), permille);
  return buf;
}

FrameRecord write_frame(const Raster& raster, const fs::path& out_dir, std::uint64_t generation, double fraction,
                        FrameTag tag) {
  FrameRecord record{out_dir / frame_filename(generation, fraction), generation, fraction, tag};
  write_png(raster, record.path);
  return record;
}

void assemble_animation(std::span<const FrameRecord> frames, const fs::path& out_path, int frame_delay_ms) {
  if (frames.empty()) throw Error(ErrorKind::EmptyFrameList, "no frames to animate");
  std::vector<Raster> rasters;
  rasters.reserve(frames.size());
  for (const FrameRecord& f : frames) {
    Raster r = [&] {
      try {
        return load_raster(f.path);
      } catch (const Error& e) {
        throw Error(ErrorKind::IoError, e.what());
      }
    }();
    if (!rasters.empty() && !r.same_shape(rasters.front())) {
      throw Error(ErrorKind::DimensionMismatch, f.path.string() + " differs in size from the first frame");
    }
    rasters.push_back(std::move(r));
  }
  write_bytes(out_path, encode_gif(rasters, frame_delay_ms));
}

std::string DirectoryFrameSink::emit(const Raster& frame, const FrameEvent& event) {
  records_.push_back(write_frame(frame, out_dir_, event.generation, event.fraction, event.tag));
  return records_.back().path.string();
}

}  // namespace evotransit
