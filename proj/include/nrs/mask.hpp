#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrs/frame.hpp"

namespace nrs {

// Non-regular sampling mask on the HR grid: each aligned 2x2 cell (one LR
// pixel) has exactly one open quadrant, so exactly 1/4 of all HR positions
// are light sensitive.
struct SamplingMask {
    Grid<std::uint8_t> open;  // 1 = open (original sample position)
    std::uint64_t seed = 0;

    int width() const { return open.width; }
    int height() const { return open.height; }
    bool is_open(int row, int col) const { return open.at(row, col) != 0; }

    std::size_t open_count() const {
        std::size_t n = 0;
        for (auto v : open.data) n += v;
        return n;
    }
};

// Draws one open quadrant per 2x2 cell from a deterministic generator.
// The HR mask is (2*width_lr) x (2*height_lr). Same seed, same mask.
SamplingMask generate_mask(int width_lr, int height_lr, std::uint64_t seed);

// Keeps frame values at open positions, leaves everything else unfilled.
SampledFrame apply_mask(const Frame& frame, const SamplingMask& mask);

// Masks every frame of a sequence with the single shared mask.
std::vector<SampledFrame> simulate_sensor(const std::vector<Frame>& video,
                                          const SamplingMask& mask);

// Mask file: "NRSMASK\n<width_hr> <height_hr> <seed>\n" followed by one
// 0/1 byte per HR position, row-major.
void write_mask(const SamplingMask& mask, const std::string& path);
SamplingMask read_mask(const std::string& path);

}  // namespace nrs
