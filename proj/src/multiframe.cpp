#include "nrs/multiframe.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "nrs/error.hpp"
#include "nrs/parallel.hpp"

namespace nrs {

SupportSchedule build_schedule(int t, int n_support, int first, int last) {
    if (first > last) throw std::invalid_argument("build_schedule: empty frame range");
    if (t < first || t > last)
        throw std::invalid_argument("build_schedule: frame index outside the sequence range");
    if (n_support < 0) throw std::invalid_argument("build_schedule: negative support count");

    // First n_support entries of the alternating pattern t-1, t+1, t-2, t+2,
    // ... then drop whatever falls outside the sequence. Near a boundary the
    // schedule simply comes out shorter; out-of-range slots are not refilled
    // from the other side.
    SupportSchedule schedule;
    schedule.current_index = t;
    std::vector<int> pattern;
    for (int k = 1; static_cast<int>(pattern.size()) < n_support; ++k) {
        pattern.push_back(t - k);
        if (static_cast<int>(pattern.size()) < n_support) pattern.push_back(t + k);
    }
    for (int s : pattern)
        if (s >= first && s <= last) schedule.support_indices.push_back(s);
    return schedule;
}

DensifiedFrame project_samples(const SampledFrame& current,
                               const std::vector<SupportInput>& supports) {
    const int width = current.width();
    const int height = current.height();

    DensifiedFrame out;
    out.frame = current;

    for (std::size_t rank = 0; rank < supports.size(); ++rank) {
        const SupportInput& support = supports[rank];
        if (!support.sampled || !support.field)
            throw std::invalid_argument("project_samples: incomplete support input");
        if (support.sampled->width() != width || support.sampled->height() != height)
            throw DimensionError("project_samples: support frame dimensions differ");

        // candidates of this support, resolved per target before committing
        // so earlier supports keep strict priority over later ones
        std::vector<Projection> candidates;
        for (const MotionVector& mv : support.field->entries) {
            if (!current.values.in_bounds(mv.row, mv.col))
                throw std::invalid_argument("project_samples: motion vector source out of frame");
            const int trow = mv.row + mv.drow;
            const int tcol = mv.col + mv.dcol;
            if (!current.values.in_bounds(trow, tcol)) continue;
            if (out.frame.filled.at(trow, tcol)) continue;
            candidates.push_back(
                {trow, tcol, support.frame_index, mv.row, mv.col, mv.cost});
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const Projection& a, const Projection& b) {
                      if (a.target_row != b.target_row) return a.target_row < b.target_row;
                      if (a.target_col != b.target_col) return a.target_col < b.target_col;
                      if (a.cost != b.cost) return a.cost < b.cost;
                      if (a.source_row != b.source_row) return a.source_row < b.source_row;
                      return a.source_col < b.source_col;
                  });
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const Projection& p = candidates[i];
            if (i > 0 && p.target_row == candidates[i - 1].target_row &&
                p.target_col == candidates[i - 1].target_col)
                continue;  // a cheaper vector of this support already claimed it
            out.frame.values.at(p.target_row, p.target_col) =
                support.sampled->values.at(p.source_row, p.source_col);
            out.frame.filled.at(p.target_row, p.target_col) = 1;
            out.projections.push_back(p);
        }
    }
    return out;
}

std::vector<Frame> reconstruct_video_sf(const std::vector<SampledFrame>& sampled,
                                        const FseParams& fse, int threads) {
    if (sampled.empty()) throw std::invalid_argument("empty frame sequence");
    for (const SampledFrame& frame : sampled)
        if (frame.width() != sampled.front().width() || frame.height() != sampled.front().height())
            throw DimensionError("frame dimensions differ within sequence");

    std::vector<Frame> out(sampled.size());
    parallel_for(sampled.size(), threads,
                 [&](std::size_t t) { out[t] = reconstruct_frame(sampled[t], fse); });
    return out;
}

namespace {

void dump_motion_vectors(
    const std::string& path,
    const std::vector<std::vector<std::pair<int, MotionVectorField>>>& fields_per_frame) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot open motion vector dump for writing: " + path);
    file << "frame_pair,m,n,dm,dn,cost\n";
    for (std::size_t t = 0; t < fields_per_frame.size(); ++t) {
        for (const auto& [support_index, field] : fields_per_frame[t]) {
            for (const MotionVector& mv : field.entries) {
                file << (t + 1) << "->" << (support_index + 1) << ',' << mv.row << ',' << mv.col
                     << ',' << mv.drow << ',' << mv.dcol << ',' << mv.cost << '\n';
            }
        }
    }
    if (!file) throw IoError("error writing motion vector dump: " + path);
}

}  // namespace

std::vector<Frame> multiframe_pass(const std::vector<SampledFrame>& sampled,
                                   const SamplingMask& mask,
                                   const std::vector<Frame>& initial, int n_support,
                                   const FseParams& fse, const MotionParams& motion,
                                   RunReport* report, const MfOptions& opts) {
    if (sampled.empty()) throw std::invalid_argument("empty frame sequence");
    if (sampled.size() != initial.size())
        throw std::invalid_argument("sampled and initial sequences differ in length");
    if (n_support < 0) throw std::invalid_argument("negative support frame count");
    for (std::size_t t = 0; t < sampled.size(); ++t)
        if (!initial[t].same_shape(mask.open) || initial[t].width != sampled[t].width() ||
            initial[t].height != sampled[t].height())
            throw DimensionError("frame/mask dimensions differ within sequence");
    motion.validate();

    const int count = static_cast<int>(sampled.size());
    std::vector<Frame> out(sampled.size());
    std::vector<FrameReport> rows(sampled.size());
    std::vector<std::string> warnings;
    const bool want_dump = !opts.mv_dump_path.empty();
    std::vector<std::vector<std::pair<int, MotionVectorField>>> dumped(want_dump ? sampled.size()
                                                                                 : 0);

    int effective_n = n_support;
    if (count == 1 && n_support >= 1) {
        warnings.push_back(
            "single-frame sequence: no support frames available, output equals the "
            "single-frame reconstruction");
        effective_n = 0;
    }

    parallel_for(sampled.size(), opts.threads, [&](std::size_t ti) {
        const int t = static_cast<int>(ti);
        const SupportSchedule schedule = build_schedule(t, effective_n, 0, count - 1);

        long mv_raw = 0;
        long mv_kept = 0;
        std::vector<MotionVectorField> kept_fields;
        kept_fields.reserve(schedule.support_indices.size());
        std::vector<SupportInput> supports;
        supports.reserve(schedule.support_indices.size());
        for (int s : schedule.support_indices) {
            const MotionVectorField raw = block_match(initial[s], initial[t], mask, motion);
            MotionVectorField kept = consistency_check(raw, mask, mask);
            mv_raw += static_cast<long>(raw.entries.size());
            mv_kept += static_cast<long>(kept.entries.size());
            kept_fields.push_back(std::move(kept));
        }
        for (std::size_t i = 0; i < kept_fields.size(); ++i)
            supports.push_back({&sampled[schedule.support_indices[i]], &kept_fields[i],
                                schedule.support_indices[i]});

        const DensifiedFrame densified = project_samples(sampled[t], supports);
        // nothing projected: the block-wise fill would see the identical
        // input, so the initial reconstruction is already the answer
        if (densified.projections.empty())
            out[ti] = initial[ti];
        else
            out[ti] = reconstruct_frame(densified.frame, fse);

        rows[ti] = {t + 1,
                    static_cast<int>(schedule.support_indices.size()),
                    mv_raw,
                    mv_kept,
                    static_cast<long>(densified.projections.size()),
                    densified.frame.fill_fraction()};
        if (want_dump) {
            for (std::size_t i = 0; i < kept_fields.size(); ++i)
                dumped[ti].emplace_back(schedule.support_indices[i], std::move(kept_fields[i]));
        }
    });

    if (report) {
        report->frames = std::move(rows);
        report->warnings = std::move(warnings);
    }
    if (want_dump) dump_motion_vectors(opts.mv_dump_path, dumped);
    return out;
}

std::vector<Frame> reconstruct_video_mf(const std::vector<SampledFrame>& sampled,
                                        const SamplingMask& mask, int n_support,
                                        const FseParams& fse, const MotionParams& motion,
                                        RunReport* report, const MfOptions& opts) {
    const std::vector<Frame> initial = reconstruct_video_sf(sampled, fse, opts.threads);
    return multiframe_pass(sampled, mask, initial, n_support, fse, motion, report, opts);
}

void write_run_report(const RunReport& report, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot open run report for writing: " + path);
    for (const std::string& warning : report.warnings) file << "# warning: " << warning << '\n';
    file << "t,n_support_used,mv_raw,mv_kept,pixels_projected,fill_fraction\n";
    char fraction[32];
    for (const FrameReport& row : report.frames) {
        std::snprintf(fraction, sizeof(fraction), "%.6f", row.fill_fraction);
        file << row.t << ',' << row.n_support_used << ',' << row.mv_raw << ',' << row.mv_kept
             << ',' << row.pixels_projected << ',' << fraction << '\n';
    }
    if (!file) throw IoError("error writing run report: " + path);
}

}  // namespace nrs
