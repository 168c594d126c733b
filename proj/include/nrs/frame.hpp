#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nrs {

// Dense row-major grid. Pixel coordinates are (row, col) on the HR lattice.
template <typename T>
struct Grid {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Grid() = default;
    Grid(int w, int h, T fill = T{})
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    T& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    const T& at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }
    std::size_t size() const { return data.size(); }
    bool same_shape(const Grid& other) const {
        return width == other.width && height == other.height;
    }
    bool operator==(const Grid& other) const {
        return width == other.width && height == other.height && data == other.data;
    }
};

// Fully populated 8-bit luminance frame.
using Frame = Grid<std::uint8_t>;

// HR frame carrying values only at a subset of positions. After sensor
// simulation the filled set equals the mask's open set; sample projection
// from support frames may fill further positions.
struct SampledFrame {
    Grid<std::uint8_t> values;  // 0 wherever not filled
    Grid<std::uint8_t> filled;  // 1 where a value exists

    int width() const { return values.width; }
    int height() const { return values.height; }

    std::size_t filled_count() const {
        std::size_t n = 0;
        for (auto f : filled.data) n += f;
        return n;
    }
    double fill_fraction() const {
        return filled.size() == 0 ? 0.0 : static_cast<double>(filled_count()) / filled.size();
    }
    bool operator==(const SampledFrame& other) const {
        return values == other.values && filled == other.filled;
    }
};

}  // namespace nrs
