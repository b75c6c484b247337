#include <algorithm>
#include <array>
#include <cmath>

#include "evotransit/error.hpp"
#include "evotransit/imaging.hpp"

namespace evotransit {

namespace {

using Packed = std::uint32_t;

Packed pack(const Rgb& c) { return Packed{c.r} << 16 | Packed{c.g} << 8 | c.b; }
int channel(Packed p, int ch) { return static_cast<int>((p >> (16 - 8 * ch)) & 0xFF); }

struct ColorCount {
  Packed color;
  std::uint32_t count;
};

struct IndexedFrame {
  std::vector<Rgb> palette;
  std::vector<std::uint8_t> indices;
};

// Sorted unique colors with their pixel counts.
std::vector<ColorCount> histogram(const Raster& frame) {
  std::vector<Packed> colors;
  colors.reserve(frame.size());
  for (const Rgb& c : frame.pixels()) colors.push_back(pack(c));
  std::sort(colors.begin(), colors.end());
  std::vector<ColorCount> hist;
  for (Packed c : colors) {
    if (hist.empty() || hist.back().color != c) hist.push_back({c, 0});
    ++hist.back().count;
  }
  return hist;
}

struct Box {
  std::size_t begin;
  std::size_t end;
};

int widest_channel(const std::vector<ColorCount>& h, Box box, int& range) {
  int best = 0;
  range = -1;
  for (int ch = 0; ch < 3; ++ch) {
    int lo = 255;
    int hi = 0;
    for (std::size_t i = box.begin; i < box.end; ++i) {
      lo = std::min(lo, channel(h[i].color, ch));
      hi = std::max(hi, channel(h[i].color, ch));
    }
    if (hi - lo > range) {
      range = hi - lo;
      best = ch;
    }
  }
  return best;
}

std::vector<Rgb> median_cut(std::vector<ColorCount> hist, std::size_t max_colors) {
  std::vector<Box> boxes{{0, hist.size()}};
  while (boxes.size() < max_colors) {
    // Split the box with the widest channel spread.
    std::size_t pick = boxes.size();
    int pick_range = 0;
    int pick_channel = 0;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      if (boxes[b].end - boxes[b].begin < 2) continue;
      int range = 0;
      const int ch = widest_channel(hist, boxes[b], range);
      if (range > pick_range) {
        pick = b;
        pick_range = range;
        pick_channel = ch;
      }
    }
    if (pick == boxes.size()) break;
    Box box = boxes[pick];
    std::sort(hist.begin() + static_cast<std::ptrdiff_t>(box.begin), hist.begin() + static_cast<std::ptrdiff_t>(box.end),
              [&](const ColorCount& a, const ColorCount& b) {
                const int ca = channel(a.color, pick_channel);
                const int cb = channel(b.color, pick_channel);
                return ca != cb ? ca < cb : a.color < b.color;
              });
    std::uint64_t total = 0;
    for (std::size_t i = box.begin; i < box.end; ++i) total += hist[i].count;
    std::uint64_t acc = 0;
    std::size_t split = box.begin + 1;
    for (std::size_t i = box.begin; i + 1 < box.end; ++i) {
      acc += hist[i].count;
      split = i + 1;
      if (2 * acc >= total) break;
    }
    boxes[pick] = {box.begin, split};
    boxes.push_back({split, box.end});
  }
  std::vector<Rgb> palette;
  for (const Box& box : boxes) {
    std::array<std::uint64_t, 3> sum{};
    std::uint64_t n = 0;
    for (std::size_t i = box.begin; i < box.end; ++i) {
      for (int ch = 0; ch < 3; ++ch) sum[ch] += std::uint64_t(channel(hist[i].color, ch)) * hist[i].count;
      n += hist[i].count;
    }
    palette.push_back({static_cast<std::uint8_t>((sum[0] + n / 2) / n), static_cast<std::uint8_t>((sum[1] + n / 2) / n),
                       static_cast<std::uint8_t>((sum[2] + n / 2) / n)});
  }
  return palette;
}

std::uint8_t nearest(const std::vector<Rgb>& palette, Packed color) {
  int best = 0;
  long best_d = -1;
  for (std::size_t i = 0; i < palette.size(); ++i) {
    const long dr = palette[i].r - channel(color, 0);
    const long dg = palette[i].g - channel(color, 1);
    const long db = palette[i].b - channel(color, 2);
    const long d = dr * dr + dg * dg + db * db;
    if (best_d < 0 || d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return static_cast<std::uint8_t>(best);
}

IndexedFrame quantize(const Raster& frame) {
  const std::vector<ColorCount> hist = histogram(frame);
  IndexedFrame out;
  std::vector<std::uint8_t> lookup(hist.size());
  if (hist.size() <= 256) {
    for (std::size_t i = 0; i < hist.size(); ++i) {
      out.palette.push_back({static_cast<std::uint8_t>(channel(hist[i].color, 0)),
                             static_cast<std::uint8_t>(channel(hist[i].color, 1)),
                             static_cast<std::uint8_t>(channel(hist[i].color, 2))});
      lookup[i] = static_cast<std::uint8_t>(i);
    }
  } else {
    out.palette = median_cut(hist, 256);
    for (std::size_t i = 0; i < hist.size(); ++i) lookup[i] = nearest(out.palette, hist[i].color);
  }
  out.indices.reserve(frame.size());
  for (const Rgb& c : frame.pixels()) {
    const Packed p = pack(c);
    const auto it = std::lower_bound(hist.begin(), hist.end(), p, [](const ColorCount& a, Packed v) { return a.color < v; });
    out.indices.push_back(lookup[static_cast<std::size_t>(it - hist.begin())]);
  }
  return out;
}

class ByteSink {
 public:
  explicit ByteSink(std::vector<std::uint8_t>& out) : out_(out) {}
  void u8(unsigned v) { out_.push_back(static_cast<std::uint8_t>(v)); }
  void u16(unsigned v) {
    u8(v & 0xFF);
    u8((v >> 8) & 0xFF);
  }
  void str(std::string_view s) {
    for (char c : s) u8(static_cast<unsigned char>(c));
  }

 private:
  std::vector<std::uint8_t>& out_;
};

// LSB-first code packer emitting 255-byte data sub-blocks.
class CodeWriter {
 public:
  explicit CodeWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void write(unsigned code, int bits) {
    acc_ |= std::uint32_t{code} << nbits_;
    nbits_ += bits;
    while (nbits_ >= 8) {
      push(static_cast<std::uint8_t>(acc_ & 0xFF));
      acc_ >>= 8;
      nbits_ -= 8;
    }
  }

  void finish() {
    if (nbits_ > 0) push(static_cast<std::uint8_t>(acc_ & 0xFF));
    acc_ = 0;
    nbits_ = 0;
    flush_block();
    out_.push_back(0);
  }

 private:
  void push(std::uint8_t byte) {
    block_[block_len_++] = byte;
    if (block_len_ == 255) flush_block();
  }
  void flush_block() {
    if (block_len_ == 0) return;
    out_.push_back(static_cast<std::uint8_t>(block_len_));
    out_.insert(out_.end(), block_.begin(), block_.begin() + block_len_);
    block_len_ = 0;
  }

  std::vector<std::uint8_t>& out_;
  std::uint32_t acc_ = 0;
  int nbits_ = 0;
  std::array<std::uint8_t, 255> block_{};
  std::size_t block_len_ = 0;
};

void lzw_encode(const std::vector<std::uint8_t>& indices, int min_code_size, std::vector<std::uint8_t>& out) {
  constexpr unsigned kMaxCode = 4095;
  const unsigned clear = 1u << min_code_size;
  std::vector<std::uint16_t> tree(std::size_t{4096} * 256, 0);
  int code_size = min_code_size + 1;
  unsigned max_code = clear + 1;
  CodeWriter writer(out);
  writer.write(clear, code_size);

  int current = -1;
  for (std::uint8_t idx : indices) {
    if (current < 0) {
      current = idx;
      continue;
    }
    std::uint16_t& child = tree[static_cast<std::size_t>(current) * 256 + idx];
    if (child != 0) {
      current = child;
      continue;
    }
    writer.write(static_cast<unsigned>(current), code_size);
    child = static_cast<std::uint16_t>(++max_code);
    if (max_code >= (1u << code_size)) ++code_size;
    if (max_code == kMaxCode) {
      writer.write(clear, code_size);
      std::fill(tree.begin(), tree.end(), 0);
      code_size = min_code_size + 1;
      max_code = clear + 1;
    }
    current = idx;
  }
  writer.write(static_cast<unsigned>(current), code_size);
  writer.write(clear, code_size);
  writer.write(clear + 1, min_code_size + 1);
  writer.finish();
}

}  // namespace

std::vector<std::uint8_t> encode_gif(std::span<const Raster> frames, int frame_delay_ms) {
  if (frames.empty()) throw Error(ErrorKind::EmptyFrameList, "no frames to animate");
  const Raster& first = frames.front();
  for (const Raster& f : frames) {
    if (!f.same_shape(first)) throw Error(ErrorKind::DimensionMismatch, "animation frames differ in size");
  }
  if (first.width() > 0xFFFF || first.height() > 0xFFFF) {
    throw Error(ErrorKind::InvalidArgument, "GIF frames are limited to 65535 pixels per side");
  }
  const unsigned delay_cs = static_cast<unsigned>(std::clamp(std::lround(frame_delay_ms / 10.0), 0L, 0xFFFFL));

  std::vector<std::uint8_t> out;
  ByteSink bytes(out);
  bytes.str("GIF89a");
  bytes.u16(static_cast<unsigned>(first.width()));
  bytes.u16(static_cast<unsigned>(first.height()));
  bytes.u8(0);  // no global color table
  bytes.u8(0);
  bytes.u8(0);
  // Loop forever.
  bytes.u8(0x21);
  bytes.u8(0xFF);
  bytes.u8(11);
  bytes.str("NETSCAPE2.0");
  bytes.u8(3);
  bytes.u8(1);
  bytes.u16(0);
  bytes.u8(0);

  for (const Raster& frame : frames) {
    const IndexedFrame indexed = quantize(frame);
    int table_bits = 1;
    while ((std::size_t{1} << table_bits) < indexed.palette.size()) ++table_bits;

    bytes.u8(0x21);
    bytes.u8(0xF9);
    bytes.u8(4);
    bytes.u8(1 << 2);  // disposal: leave in place
    bytes.u16(delay_cs);
    bytes.u8(0);
    bytes.u8(0);

    bytes.u8(0x2C);
    bytes.u16(0);
    bytes.u16(0);
    bytes.u16(static_cast<unsigned>(frame.width()));
    bytes.u16(static_cast<unsigned>(frame.height()));
    bytes.u8(0x80 | static_cast<unsigned>(table_bits - 1));
    for (std::size_t i = 0; i < (std::size_t{1} << table_bits); ++i) {
      const Rgb c = i < indexed.palette.size() ? indexed.palette[i] : Rgb{};
      bytes.u8(c.r);
      bytes.u8(c.g);
      bytes.u8(c.b);
    }
    const int min_code_size = std::max(2, table_bits);
    bytes.u8(static_cast<unsigned>(min_code_size));
    lzw_encode(indexed.indices, min_code_size, out);
  }
  bytes.u8(0x3B);
  return out;
}

}  // namespace evotransit
