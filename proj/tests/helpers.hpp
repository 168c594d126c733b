#pragma once

// Shared fixtures for the test binaries.

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "nrs/frame.hpp"
#include "nrs/mask.hpp"

namespace testutil {

inline nrs::Frame constant_frame(int width, int height, std::uint8_t value) {
    return nrs::Frame(width, height, value);
}

// Deterministic texture with both gradients and oscillation; enough
// structure for matching windows to be unambiguous.
inline nrs::Frame textured_frame(int width, int height, std::uint32_t seed = 1) {
    nrs::Frame frame(width, height, 0);
    std::mt19937 rng(seed);
    const int a = 3 + static_cast<int>(rng() % 5);
    const int b = 7 + static_cast<int>(rng() % 5);
    for (int row = 0; row < height; ++row)
        for (int col = 0; col < width; ++col)
            frame.at(row, col) = static_cast<std::uint8_t>(
                (a * row + b * col + ((row * col) >> 2) + static_cast<int>(rng() % 16)) % 256);
    return frame;
}

// A scratch directory under the system temp root, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        namespace fs = std::filesystem;
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("nrs_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string sub(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

}  // namespace testutil
