#include "nrs/motion.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "nrs/error.hpp"

namespace nrs {

void MotionParams::validate() const {
    if (window_size < 3 || window_size % 2 == 0)
        throw std::invalid_argument("window_size must be odd and >= 3");
    if (search_range < 1) throw std::invalid_argument("search_range must be >= 1");
}

MotionVectorField block_match(const Frame& support_recon, const Frame& current_recon,
                              const SamplingMask& support_mask, const MotionParams& params) {
    params.validate();
    if (!support_recon.same_shape(current_recon) || !support_recon.same_shape(support_mask.open))
        throw DimensionError("block_match: frame/mask dimensions differ");

    const int width = support_recon.width;
    const int height = support_recon.height;
    const int hw = params.window_size / 2;
    const int range = params.search_range;

    MotionVectorField field;
    for (int row = hw; row < height - hw; ++row) {
        for (int col = hw; col < width - hw; ++col) {
            if (!support_mask.is_open(row, col)) continue;

            long best = std::numeric_limits<long>::max();
            int best_drow = 0;
            int best_dcol = 0;
            bool found = false;
            for (int drow = -range; drow <= range; ++drow) {
                const int crow = row + drow;
                if (crow - hw < 0 || crow + hw >= height) continue;
                for (int dcol = -range; dcol <= range; ++dcol) {
                    const int ccol = col + dcol;
                    if (ccol - hw < 0 || ccol + hw >= width) continue;

                    long sad = 0;
                    for (int wr = -hw; wr <= hw; ++wr) {
                        const std::uint8_t* sp = &support_recon.at(row + wr, col - hw);
                        const std::uint8_t* cp = &current_recon.at(crow + wr, ccol - hw);
                        for (int i = 0; i < params.window_size; ++i)
                            sad += std::abs(static_cast<int>(sp[i]) - static_cast<int>(cp[i]));
                        if (sad > best) break;  // a partial sum past best can only lose
                    }
                    if (sad > best) continue;
                    const long mag = static_cast<long>(drow) * drow + static_cast<long>(dcol) * dcol;
                    const long best_mag =
                        static_cast<long>(best_drow) * best_drow + static_cast<long>(best_dcol) * best_dcol;
                    // scan order is row-major in (drow, dcol), so keeping the
                    // incumbent on full ties realizes the final tie-break
                    if (!found || sad < best || mag < best_mag) {
                        best = sad;
                        best_drow = drow;
                        best_dcol = dcol;
                        found = true;
                    }
                }
            }
            if (found) field.entries.push_back({row, col, best_drow, best_dcol, best});
        }
    }
    return field;
}

namespace {

int lower_median(std::vector<int>& values) {
    const std::size_t mid = (values.size() - 1) / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    return values[mid];
}

}  // namespace

MotionVectorField consistency_check(const MotionVectorField& field,
                                    const SamplingMask& support_mask,
                                    const SamplingMask& current_mask) {
    if (!support_mask.open.same_shape(current_mask.open))
        throw DimensionError("consistency_check: mask dimensions differ");

    const int width = current_mask.width();
    const int height = current_mask.height();

    // census of landing positions over ALL raw entries (counting sort)
    std::vector<int> cell_start(static_cast<std::size_t>(width) * height + 1, 0);
    std::vector<std::size_t> landed;  // entry indices grouped by landing cell
    std::vector<std::size_t> in_frame;
    for (std::size_t i = 0; i < field.entries.size(); ++i) {
        const MotionVector& mv = field.entries[i];
        const int qrow = mv.row + mv.drow;
        const int qcol = mv.col + mv.dcol;
        if (!current_mask.open.in_bounds(qrow, qcol)) continue;  // nothing to verify against
        ++cell_start[static_cast<std::size_t>(qrow) * width + qcol + 1];
        in_frame.push_back(i);
    }
    for (std::size_t c = 1; c < cell_start.size(); ++c) cell_start[c] += cell_start[c - 1];
    landed.resize(in_frame.size());
    {
        std::vector<int> cursor(cell_start.begin(), cell_start.end() - 1);
        for (std::size_t i : in_frame) {
            const MotionVector& mv = field.entries[i];
            const std::size_t cell =
                static_cast<std::size_t>(mv.row + mv.drow) * width + (mv.col + mv.dcol);
            landed[cursor[cell]++] = i;
        }
    }

    MotionVectorField refined;
    std::vector<int> rows_buf, cols_buf;
    for (std::size_t i : in_frame) {
        const MotionVector& mv = field.entries[i];
        const int qrow = mv.row + mv.drow;
        const int qcol = mv.col + mv.dcol;

        // the sensor already measured this position: projection is pointless
        if (current_mask.is_open(qrow, qcol)) continue;

        // median displacement of everything landing within 3x3 of q must
        // back-project q onto this entry's own source
        rows_buf.clear();
        cols_buf.clear();
        for (int nr = qrow - 1; nr <= qrow + 1; ++nr) {
            for (int nc = qcol - 1; nc <= qcol + 1; ++nc) {
                if (!current_mask.open.in_bounds(nr, nc)) continue;
                const std::size_t cell = static_cast<std::size_t>(nr) * width + nc;
                for (int e = cell_start[cell]; e < cell_start[cell + 1]; ++e) {
                    const MotionVector& other = field.entries[landed[e]];
                    rows_buf.push_back(other.drow);
                    cols_buf.push_back(other.dcol);
                }
            }
        }
        const int med_drow = lower_median(rows_buf);
        const int med_dcol = lower_median(cols_buf);
        if (qrow - med_drow == mv.row && qcol - med_dcol == mv.col) refined.entries.push_back(mv);
    }
    return refined;
}

MotionVectorField estimate_motion(const Frame& current_recon, const Frame& support_recon,
                                  const SamplingMask& support_mask,
                                  const SamplingMask& current_mask, const MotionParams& params) {
    const MotionVectorField raw = block_match(support_recon, current_recon, support_mask, params);
    return consistency_check(raw, support_mask, current_mask);
}

}  // namespace nrs
