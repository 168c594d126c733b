#include "nrs/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "nrs/error.hpp"

namespace nrs {

PsnrResult psnr(const Frame& reference, const Frame& test, int margin) {
    if (!reference.same_shape(test)) throw DimensionError("psnr: frame dimensions differ");
    if (margin < 0) throw std::invalid_argument("psnr: negative margin");
    if (2 * margin >= std::min(reference.width, reference.height))
        throw std::invalid_argument("psnr: margin leaves no interior pixels");

    std::uint64_t sse = 0;
    for (int row = margin; row < reference.height - margin; ++row) {
        const std::uint8_t* rp = &reference.at(row, margin);
        const std::uint8_t* tp = &test.at(row, margin);
        const int count = reference.width - 2 * margin;
        for (int i = 0; i < count; ++i) {
            const int d = static_cast<int>(rp[i]) - static_cast<int>(tp[i]);
            sse += static_cast<std::uint64_t>(d * d);
        }
    }

    PsnrResult result;
    result.margin = margin;
    result.pixels_counted = static_cast<long>(reference.width - 2 * margin) *
                            static_cast<long>(reference.height - 2 * margin);
    result.mse = static_cast<double>(sse) / static_cast<double>(result.pixels_counted);
    result.value = sse == 0 ? std::numeric_limits<double>::infinity()
                            : 10.0 * std::log10(255.0 * 255.0 / result.mse);
    return result;
}

std::string format_db(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

namespace {

// Difference of two PSNR values; two perfect reconstructions count as no
// gain rather than an undefined inf - inf.
double gain_db(double psnr_sf, double psnr_mf) {
    if (std::isinf(psnr_sf) && std::isinf(psnr_mf)) return 0.0;
    return psnr_mf - psnr_sf;
}

double mean(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

SweepTable gain_sweep(const std::vector<Frame>& reference,
                      const std::vector<SampledFrame>& sampled, const SamplingMask& mask,
                      const std::vector<int>& n_values, const FseParams& fse,
                      const MotionParams& motion, int margin, int threads) {
    if (n_values.empty()) throw std::invalid_argument("gain_sweep: no support counts given");
    if (reference.size() != sampled.size())
        throw std::invalid_argument("gain_sweep: reference and sampled sequence lengths differ");

    SweepTable table;
    table.n_values = n_values;

    const std::vector<Frame> initial = reconstruct_video_sf(sampled, fse, threads);
    std::vector<double> psnr_sf(reference.size());
    for (std::size_t t = 0; t < reference.size(); ++t)
        psnr_sf[t] = psnr(reference[t], initial[t], margin).value;

    MfOptions opts;
    opts.threads = threads;
    for (int n : n_values) {
        RunReport report;
        const std::vector<Frame> refined =
            multiframe_pass(sampled, mask, initial, n, fse, motion, &report, opts);

        std::vector<double> psnr_mf(reference.size());
        std::vector<double> gains(reference.size());
        for (std::size_t t = 0; t < reference.size(); ++t) {
            psnr_mf[t] = psnr(reference[t], refined[t], margin).value;
            gains[t] = gain_db(psnr_sf[t], psnr_mf[t]);
            table.frames.push_back(
                {n, static_cast<int>(t) + 1, psnr_sf[t], psnr_mf[t], gains[t]});
        }
        table.summary.push_back({n, mean(psnr_sf), mean(psnr_mf), mean(gains)});
        table.reports.push_back(std::move(report));
    }
    return table;
}

void write_sweep_summary(const SweepTable& table, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot open sweep summary for writing: " + path);
    file << "n,mean_psnr_sf,mean_psnr_mf,mean_gain\n";
    for (const SweepSummaryRow& row : table.summary)
        file << row.n << ',' << format_db(row.mean_psnr_sf) << ',' << format_db(row.mean_psnr_mf)
             << ',' << format_db(row.mean_gain) << '\n';
    if (!file) throw IoError("error writing sweep summary: " + path);
}

void write_sweep_frames(const SweepTable& table, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot open sweep frame table for writing: " + path);
    file << "n,t,psnr_sf,psnr_mf,gain\n";
    for (const SweepFrameRow& row : table.frames)
        file << row.n << ',' << row.t << ',' << format_db(row.psnr_sf) << ','
             << format_db(row.psnr_mf) << ',' << format_db(row.gain) << '\n';
    if (!file) throw IoError("error writing sweep frame table: " + path);
}

void write_plot_data(const SweepTable& table, const std::string& prefix) {
    const auto write_series = [](const std::string& path,
                                 const std::vector<std::pair<double, std::string>>& rows) {
        std::ofstream file(path);
        if (!file) throw IoError("cannot open plot data file for writing: " + path);
        for (const auto& [x, y] : rows) file << x << ' ' << y << '\n';
        if (!file) throw IoError("error writing plot data file: " + path);
    };

    std::vector<std::pair<double, std::string>> mean_rows;
    for (const SweepSummaryRow& row : table.summary)
        mean_rows.emplace_back(row.n, format_db(row.mean_gain));
    write_series(prefix + "mean_gain.dat", mean_rows);

    bool sf_written = false;
    for (int n : table.n_values) {
        std::vector<std::pair<double, std::string>> sf_rows, mf_rows;
        for (const SweepFrameRow& row : table.frames) {
            if (row.n != n) continue;
            sf_rows.emplace_back(row.t, format_db(row.psnr_sf));
            mf_rows.emplace_back(row.t, format_db(row.psnr_mf));
        }
        if (!sf_written) {  // identical for every n; emit once
            write_series(prefix + "psnr_sf.dat", sf_rows);
            sf_written = true;
        }
        write_series(prefix + "psnr_mf_n" + std::to_string(n) + ".dat", mf_rows);
    }
}

}  // namespace nrs
