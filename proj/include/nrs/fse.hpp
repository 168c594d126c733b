#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nrs/error.hpp"
#include "nrs/frame.hpp"

namespace nrs {

// Parameters of the block-wise sparse spectral model. The transform area is
// the central block plus a frame of border_width pixels on every side, so
// fft_size must equal block_size + 2 * border_width.
struct FseParams {
    int block_size = 4;
    int border_width = 14;
    int fft_size = 32;
    int iterations = 100;
    double decay_factor = 0.7;            // spatial weight falloff per pixel of distance
    double ortho_compensation = 0.5;      // fraction of the projection taken per iteration
    double reconstructed_weighting = 0.5; // trust in previously reconstructed pixels

    void validate() const;  // throws std::invalid_argument
};

enum class PixelStatus : std::uint8_t { Missing = 0, Original = 1, Reconstructed = 2 };

// A square transform area cut out of the working frame. Values are 0 where
// the status is Missing (including positions clipped by the frame edge).
struct SupportArea {
    int size = 0;
    std::vector<double> values;       // size*size, row-major
    std::vector<PixelStatus> status;  // size*size, row-major

    double& value_at(int row, int col) { return values[static_cast<std::size_t>(row) * size + col]; }
    PixelStatus& status_at(int row, int col) { return status[static_cast<std::size_t>(row) * size + col]; }
};

// One selected basis function. Only the canonical member of each conjugate
// pair is stored; its mirror frequency is implied for real-valued signals.
struct ModelTerm {
    int freq_row = 0;
    int freq_col = 0;
    std::complex<double> coeff{0.0, 0.0};
};

struct SparseModel {
    int size = 0;
    std::vector<ModelTerm> terms;  // in order of first selection

    double evaluate_at(int row, int col) const;
    std::vector<double> evaluate() const;  // size*size, row-major
    // Coefficient of an arbitrary frequency bin; the mirror of a stored term
    // resolves to the conjugate, anything never selected to zero.
    std::complex<double> coefficient_at(int freq_row, int freq_col) const;
    // Number of distinct frequency bins covered once mirrors are counted.
    std::size_t expanded_term_count() const;
};

// Weighted residual energy after each iteration; front() is the energy of
// the initial signal before any term is selected.
struct ModelTrace {
    std::vector<double> residual_energy;
};

// The transform area holds no usable sample at all.
struct EmptySupportError : Error {
    using Error::Error;
};

// Weight of every area position: decay_factor^distance from the area center
// (size/2, size/2), scaled by 1 for original samples, reconstructed_weighting
// for reconstructed ones, 0 for missing ones.
Grid<double> compute_weights(const SupportArea& area, const FseParams& params);

// Iterative sparse model fit on the weighted area signal.
SparseModel generate_model(const SupportArea& area, const FseParams& params,
                           ModelTrace* trace = nullptr);

struct BlockCoord {
    int row = 0;  // anchor of the central block, in frame coordinates
    int col = 0;
    bool operator==(const BlockCoord&) const = default;
};

// Static block schedule: densest support areas first, ties in row-major
// block order. Anchors step by block_size; when a frame dimension is not
// divisible by block_size the last block is anchored flush with the edge.
std::vector<BlockCoord> processing_order(const SampledFrame& sampled, const FseParams& params);

// Fills every missing position of one frame, block by block. Reconstructed
// pixels are rounded to 8 bits immediately so later blocks see exactly the
// values the output will contain.
Frame reconstruct_frame(const SampledFrame& sampled, const FseParams& params);

}  // namespace nrs
