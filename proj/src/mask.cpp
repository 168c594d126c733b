#include "nrs/mask.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nrs/error.hpp"

namespace nrs {

SamplingMask generate_mask(int width_lr, int height_lr, std::uint64_t seed) {
    if (width_lr < 1 || height_lr < 1)
        throw std::invalid_argument("generate_mask: dimensions must be at least 1x1 LR pixel");

    SamplingMask mask;
    mask.seed = seed;
    mask.open = Grid<std::uint8_t>(2 * width_lr, 2 * height_lr, 0);

    // mt19937_64 output is fully specified, so masks replay bit-exactly on
    // any platform. 2^64 is divisible by 4: no modulo bias.
    std::mt19937_64 rng(seed);
    for (int cell_row = 0; cell_row < height_lr; ++cell_row) {
        for (int cell_col = 0; cell_col < width_lr; ++cell_col) {
            const auto quadrant = static_cast<int>(rng() & 3u);
            const int row = 2 * cell_row + (quadrant >> 1);
            const int col = 2 * cell_col + (quadrant & 1);
            mask.open.at(row, col) = 1;
        }
    }
    return mask;
}

SampledFrame apply_mask(const Frame& frame, const SamplingMask& mask) {
    if (!frame.same_shape(mask.open))
        throw DimensionError("apply_mask: frame and mask dimensions differ");

    SampledFrame out;
    out.values = Grid<std::uint8_t>(frame.width, frame.height, 0);
    out.filled = mask.open;
    for (std::size_t i = 0; i < frame.size(); ++i) {
        if (mask.open.data[i]) out.values.data[i] = frame.data[i];
    }
    return out;
}

std::vector<SampledFrame> simulate_sensor(const std::vector<Frame>& video,
                                          const SamplingMask& mask) {
    if (video.empty()) throw std::invalid_argument("simulate_sensor: empty frame sequence");

    std::vector<SampledFrame> out;
    out.reserve(video.size());
    for (const auto& frame : video) out.push_back(apply_mask(frame, mask));
    return out;
}

void write_mask(const SamplingMask& mask, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open mask file for writing: " + path);

    file << "NRSMASK\n" << mask.width() << ' ' << mask.height() << ' ' << mask.seed << '\n';
    file.write(reinterpret_cast<const char*>(mask.open.data.data()),
               static_cast<std::streamsize>(mask.open.size()));
    if (!file) throw IoError("error writing mask file: " + path);
}

SamplingMask read_mask(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open mask file: " + path);

    std::string magic;
    file >> magic;
    if (magic != "NRSMASK") throw IoError("not a mask file (bad magic): " + path);

    int width = 0, height = 0;
    std::uint64_t seed = 0;
    file >> width >> height >> seed;
    if (!file || width < 2 || height < 2 || width % 2 != 0 || height % 2 != 0)
        throw DimensionError("mask file has invalid dimensions: " + path);
    file.get();  // single separator after the header line

    SamplingMask mask;
    mask.seed = seed;
    mask.open = Grid<std::uint8_t>(width, height, 0);
    file.read(reinterpret_cast<char*>(mask.open.data.data()),
              static_cast<std::streamsize>(mask.open.size()));
    if (file.gcount() != static_cast<std::streamsize>(mask.open.size()))
        throw IoError("mask file truncated: " + path);

    for (int row = 0; row < height; row += 2) {
        for (int col = 0; col < width; col += 2) {
            const int opens = mask.open.at(row, col) + mask.open.at(row, col + 1) +
                              mask.open.at(row + 1, col) + mask.open.at(row + 1, col + 1);
            if (opens != 1)
                throw IoError("mask file violates the one-open-per-cell law: " + path);
        }
    }
    return mask;
}

}  // namespace nrs
