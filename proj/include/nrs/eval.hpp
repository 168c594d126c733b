#pragma once

#include <string>
#include <vector>

#include "nrs/fse.hpp"
#include "nrs/frame.hpp"
#include "nrs/mask.hpp"
#include "nrs/motion.hpp"
#include "nrs/multiframe.hpp"

namespace nrs {

struct PsnrResult {
    double value = 0.0;  // dB; +infinity when mse == 0
    double mse = 0.0;
    long pixels_counted = 0;
    int margin = 0;
};

// Mean squared error over the interior only: a border strip of `margin`
// pixels on every side is excluded. Peak is fixed at 255.
PsnrResult psnr(const Frame& reference, const Frame& test, int margin = 4);

// Serializes as a plain number, or the literal "inf" for an exact match.
std::string format_db(double value);

struct SweepSummaryRow {
    int n = 0;
    double mean_psnr_sf = 0.0;
    double mean_psnr_mf = 0.0;
    double mean_gain = 0.0;
};

struct SweepFrameRow {
    int n = 0;
    int t = 0;  // 1-based
    double psnr_sf = 0.0;
    double psnr_mf = 0.0;
    double gain = 0.0;
};

struct SweepTable {
    std::vector<int> n_values;
    std::vector<SweepSummaryRow> summary;
    std::vector<SweepFrameRow> frames;
    std::vector<RunReport> reports;  // one per n, in n_values order
};

// Reconstructs the sequence single-frame once, then once per n with motion
// compensation, and scores everything against the reference video.
// Gain of a frame where both reconstructions are perfect counts as 0.
SweepTable gain_sweep(const std::vector<Frame>& reference,
                      const std::vector<SampledFrame>& sampled, const SamplingMask& mask,
                      const std::vector<int>& n_values, const FseParams& fse,
                      const MotionParams& motion, int margin = 4, int threads = 1);

void write_sweep_summary(const SweepTable& table, const std::string& path);
void write_sweep_frames(const SweepTable& table, const std::string& path);
// Two-column series: mean gain over n, plus per-frame gain over t for each n.
void write_plot_data(const SweepTable& table, const std::string& prefix);

}  // namespace nrs
