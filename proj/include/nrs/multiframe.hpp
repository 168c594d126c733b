#pragma once

#include <string>
#include <vector>

#include "nrs/fse.hpp"
#include "nrs/frame.hpp"
#include "nrs/mask.hpp"
#include "nrs/motion.hpp"

namespace nrs {

// Which neighbors assist frame `current_index`, nearest first, alternating
// past/future: t-1, t+1, t-2, t+2, ... clipped to the sequence bounds.
struct SupportSchedule {
    int current_index = 0;
    std::vector<int> support_indices;
};

SupportSchedule build_schedule(int t, int n_support, int first, int last);

// Where a projected pixel came from.
struct Projection {
    int target_row = 0;
    int target_col = 0;
    int source_frame = 0;
    int source_row = 0;
    int source_col = 0;
    long cost = 0;
};

struct DensifiedFrame {
    SampledFrame frame;
    std::vector<Projection> projections;
};

struct SupportInput {
    const SampledFrame* sampled = nullptr;
    const MotionVectorField* field = nullptr;
    int frame_index = 0;
};

// Carries each surviving motion vector's original sensor value into the
// current frame. Earlier supports take strict priority; two vectors of the
// same support hitting one pixel resolve by lower match cost, then row-major
// source position. Already-filled positions are never overwritten.
DensifiedFrame project_samples(const SampledFrame& current,
                               const std::vector<SupportInput>& supports);

struct FrameReport {
    int t = 0;  // 1-based frame number, as reported
    int n_support_used = 0;
    long mv_raw = 0;
    long mv_kept = 0;
    long pixels_projected = 0;
    double fill_fraction = 0.0;
};

struct RunReport {
    std::vector<FrameReport> frames;
    std::vector<std::string> warnings;
};

void write_run_report(const RunReport& report, const std::string& path);

struct MfOptions {
    int threads = 1;
    std::string mv_dump_path;  // empty = no dump
};

// Independent per-frame reconstruction of a whole sequence.
std::vector<Frame> reconstruct_video_sf(const std::vector<SampledFrame>& sampled,
                                        const FseParams& fse, int threads = 1);

// Motion-compensated pass on top of existing initial reconstructions:
// per frame, estimate motion against each scheduled support, project
// surviving samples, and re-run the block-wise fill on the densified frame.
std::vector<Frame> multiframe_pass(const std::vector<SampledFrame>& sampled,
                                   const SamplingMask& mask,
                                   const std::vector<Frame>& initial, int n_support,
                                   const FseParams& fse, const MotionParams& motion,
                                   RunReport* report = nullptr, const MfOptions& opts = {});

// Full pipeline: initial per-frame pass, then the motion-compensated pass.
std::vector<Frame> reconstruct_video_mf(const std::vector<SampledFrame>& sampled,
                                        const SamplingMask& mask, int n_support,
                                        const FseParams& fse, const MotionParams& motion,
                                        RunReport* report = nullptr, const MfOptions& opts = {});

}  // namespace nrs
