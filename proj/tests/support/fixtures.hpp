#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <unistd.h>

#include "evotransit/raster.hpp"
#include "evotransit/rng.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return EVOTRANSIT_TEST_DATA_DIR; }

// Start and target differing at every pixel.
struct ImagePair {
  evotransit::Raster start;
  evotransit::Raster target;
};

inline ImagePair all_differing(std::size_t width, std::size_t height, std::uint64_t seed = 1) {
  evotransit::Rng rng(seed);
  evotransit::Raster start(width, height);
  evotransit::Raster target(width, height);
  for (std::size_t i = 0; i < start.size(); ++i) {
    const auto v = rng.next();
    start[i] = {std::uint8_t(v), std::uint8_t(v >> 8), std::uint8_t(v >> 16)};
    target[i] = {std::uint8_t(start[i].r ^ 0x80), std::uint8_t(v >> 24), std::uint8_t(v >> 32)};
  }
  return {std::move(start), std::move(target)};
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("evotransit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

}  // namespace fixtures
