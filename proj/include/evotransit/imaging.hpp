#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "evotransit/engine.hpp"
#include "evotransit/raster.hpp"

namespace evotransit {

enum class ImageFormat { Png, Jpeg, Bmp, Unknown };

[[nodiscard]] ImageFormat sniff_format(std::span<const std::uint8_t> bytes) noexcept;

/// Decodes PNG, JPEG or BMP bytes into RGB8. Alpha is dropped and
/// grayscale is expanded. Throws UnsupportedFormat or DecodeError.
[[nodiscard]] Raster decode_image(std::span<const std::uint8_t> bytes);

/// Throws UnreadableFile when the file cannot be opened, otherwise as
/// decode_image.
[[nodiscard]] Raster load_raster(const std::filesystem::path& path);

[[nodiscard]] std::vector<std::uint8_t> encode_png(const Raster& raster);
void write_png(const Raster& raster, const std::filesystem::path& path);

// Format-specific decoders; decode_image dispatches to these.
[[nodiscard]] Raster decode_png(std::span<const std::uint8_t> bytes);
[[nodiscard]] Raster decode_jpeg(std::span<const std::uint8_t> bytes);
[[nodiscard]] Raster decode_bmp(std::span<const std::uint8_t> bytes);

struct FrameRecord {
  std::filesystem::path path;
  std::uint64_t generation = 0;
  double fraction = 0.0;
  FrameTag tag = FrameTag::Initial;
};

/// frame_g{generation:09}_p{round(fraction*1000):04}.png
[[nodiscard]] std::string frame_filename(std::uint64_t generation, double fraction);

/// Writes a lossless PNG named by frame_filename into out_dir. Throws
/// IoError when the directory is not writable.
FrameRecord write_frame(const Raster& raster, const std::filesystem::path& out_dir, std::uint64_t generation,
                        double fraction, FrameTag tag);

/// GIF89a bytes, one image per raster, looping forever. Each frame gets
/// its own palette: exact when it has at most 256 colors, median cut
/// otherwise.
[[nodiscard]] std::vector<std::uint8_t> encode_gif(std::span<const Raster> frames, int frame_delay_ms);

/// Reads the frames back and writes an animated GIF. Throws
/// EmptyFrameList, DimensionMismatch or IoError.
void assemble_animation(std::span<const FrameRecord> frames, const std::filesystem::path& out_path,
                        int frame_delay_ms);

/// FrameSink writing every frame to a directory.
class DirectoryFrameSink final : public FrameSink {
 public:
  explicit DirectoryFrameSink(std::filesystem::path out_dir) : out_dir_(std::move(out_dir)) {}

  std::string emit(const Raster& frame, const FrameEvent& event) override;

  [[nodiscard]] const std::vector<FrameRecord>& records() const noexcept { return records_; }

 private:
  std::filesystem::path out_dir_;
  std::vector<FrameRecord> records_;
};

}  // namespace evotransit
