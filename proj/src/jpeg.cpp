#include <csetjmp>
#include <cstdio>

#include <jpeglib.h>

#include "evotransit/error.hpp"
#include "evotransit/imaging.hpp"

namespace evotransit {

namespace {

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

[[noreturn]] void on_jpeg_error(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void silence(j_common_ptr) {}

// Only trivially destructible locals live between setjmp and longjmp; the
// output buffer is owned by the caller.
bool decode_into(std::span<const std::uint8_t> bytes, std::vector<std::uint8_t>& rgb, JDIMENSION& width,
                 JDIMENSION& height, JpegErrorManager& err) {
  jpeg_decompress_struct cinfo{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = on_jpeg_error;
  err.base.output_message = silence;
  if (setjmp(err.jump) != 0) {
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = cinfo.output_width;
  height = cinfo.output_height;
  rgb.resize(std::size_t{width} * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = rgb.data() + std::size_t{cinfo.output_scanline} * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  // libjpeg only warns on a truncated stream and pads with gray.
  const bool truncated = err.base.num_warnings > 0;
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  if (truncated) std::snprintf(err.message, sizeof err.message, "%s", "corrupt or truncated JPEG data");
  return !truncated;
}

}  // namespace

Raster decode_jpeg(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> rgb;
  JDIMENSION width = 0;
  JDIMENSION height = 0;
  JpegErrorManager err{};
  if (!decode_into(bytes, rgb, width, height, err)) throw Error(ErrorKind::DecodeError, err.message);
  if (width == 0 || height == 0) throw Error(ErrorKind::DecodeError, "jpeg has zero size");
  std::vector<Rgb> pixels(std::size_t{width} * height);
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = {rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]};
  return Raster(width, height, std::move(pixels));
}

}  // namespace evotransit
