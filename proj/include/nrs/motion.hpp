#pragma once

#include <vector>

#include "nrs/frame.hpp"
#include "nrs/mask.hpp"

namespace nrs {

struct MotionParams {
    int window_size = 9;   // odd, >= 3
    int search_range = 16; // max displacement per axis

    void validate() const;  // throws std::invalid_argument
};

// One estimated displacement: the window around (row, col) in the support
// frame best matches the window around (row + drow, col + dcol) in the
// current frame.
struct MotionVector {
    int row = 0;
    int col = 0;
    int drow = 0;
    int dcol = 0;
    long cost = 0;  // SAD over the full window

    bool operator==(const MotionVector&) const = default;
};

struct MotionVectorField {
    std::vector<MotionVector> entries;  // row-major by source position
};

// Exhaustive SAD search anchored at every open position of support_mask
// whose window lies fully inside the frame. Candidates cover all integer
// displacements with max(|drow|,|dcol|) <= search_range whose windows stay
// in-frame; ties resolve to the smallest drow^2+dcol^2, then row-major
// (drow, dcol). Anchors with no in-frame candidate are omitted.
MotionVectorField block_match(const Frame& support_recon, const Frame& current_recon,
                              const SamplingMask& support_mask, const MotionParams& params);

// Drops vectors that land on a position the current sensor already measured,
// and vectors that fail the median back-projection test: the component-wise
// (lower) median displacement of all raw entries landing within the 3x3
// neighborhood of the landing position must map that position back to the
// source. Kept entries are returned unmodified.
MotionVectorField consistency_check(const MotionVectorField& field,
                                    const SamplingMask& support_mask,
                                    const SamplingMask& current_mask);

// block_match followed by consistency_check.
MotionVectorField estimate_motion(const Frame& current_recon, const Frame& support_recon,
                                  const SamplingMask& support_mask,
                                  const SamplingMask& current_mask, const MotionParams& params);

}  // namespace nrs
