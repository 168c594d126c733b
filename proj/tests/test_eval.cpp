#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "nrs/eval.hpp"
#include "nrs/synthetic.hpp"

using namespace nrs;

namespace {

// plain double-loop reference, independent accumulation order and types
double reference_psnr(const Frame& a, const Frame& b, int margin, double* mse_out = nullptr) {
    long double sse = 0.0L;
    long count = 0;
    for (int row = margin; row < a.height - margin; ++row)
        for (int col = margin; col < a.width - margin; ++col) {
            const long double d =
                static_cast<long double>(a.at(row, col)) - static_cast<long double>(b.at(row, col));
            sse += d * d;
            ++count;
        }
    const long double mse = sse / count;
    if (mse_out) *mse_out = static_cast<double>(mse);
    if (mse == 0.0L) return std::numeric_limits<double>::infinity();
    return static_cast<double>(10.0L * std::log10(255.0L * 255.0L / mse));
}

}  // namespace

TEST_CASE("identical frames score infinite PSNR") {
    const Frame frame = testutil::textured_frame(32, 32, 1);
    const PsnrResult r = psnr(frame, frame, 4);
    CHECK(std::isinf(r.value));
    CHECK(r.mse == 0.0);
    CHECK(format_db(r.value) == "inf");
}

TEST_CASE("black versus white is exactly zero dB") {
    const PsnrResult r =
        psnr(testutil::constant_frame(16, 16, 0), testutil::constant_frame(16, 16, 255), 2);
    CHECK(r.mse == doctest::Approx(255.0 * 255.0));
    CHECK(r.value == doctest::Approx(0.0));
}

TEST_CASE("the margin hides border-only differences completely") {
    const Frame a = testutil::textured_frame(24, 24, 5);
    Frame b = a;
    for (int row = 0; row < 24; ++row)
        for (int col = 0; col < 24; ++col)
            if (row < 4 || row >= 20 || col < 4 || col >= 20)
                b.at(row, col) = static_cast<std::uint8_t>(255 - b.at(row, col));

    CHECK(std::isinf(psnr(a, b, 4).value));
    CHECK(!std::isinf(psnr(a, b, 3).value));
}

TEST_CASE("interior pixel count is exact") {
    const Frame a = testutil::constant_frame(20, 14, 1);
    CHECK(psnr(a, a, 0).pixels_counted == 20 * 14);
    CHECK(psnr(a, a, 3).pixels_counted == (20 - 6) * (14 - 6));
}

TEST_CASE("psnr matches an independent reference on random pairs") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int width = 10 + static_cast<int>(rng() % 50);
        const int height = 10 + static_cast<int>(rng() % 50);
        Frame a(width, height, 0), b(width, height, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a.data[i] = static_cast<std::uint8_t>(rng() % 256);
            b.data[i] = static_cast<std::uint8_t>(rng() % 256);
        }
        const int margin = static_cast<int>(rng() % 4);

        double ref_mse = 0.0;
        const double ref = reference_psnr(a, b, margin, &ref_mse);
        const PsnrResult r = psnr(a, b, margin);
        CHECK(std::abs(r.value - ref) < 1e-9);
        CHECK(r.mse == doctest::Approx(ref_mse).epsilon(1e-12));

        // symmetry
        CHECK(psnr(b, a, margin).value == r.value);
    }
}

TEST_CASE("shape and margin preconditions") {
    const Frame a = testutil::constant_frame(16, 16, 0);
    CHECK_THROWS_AS(psnr(a, testutil::constant_frame(16, 8, 0), 0), DimensionError);
    CHECK_THROWS_AS(psnr(a, a, 8), std::invalid_argument);
    CHECK_THROWS_AS(psnr(a, a, -1), std::invalid_argument);
    CHECK_NOTHROW(psnr(a, a, 7));
}

TEST_CASE("gain sweep with n=0 reports zero gain everywhere") {
    const SamplingMask mask = generate_mask(12, 12, 3);
    SyntheticSpec spec;
    spec.frames = 3;
    spec.width = 24;
    spec.height = 24;
    spec.seed = 4;
    const std::vector<Frame> video = synthesize_video(spec);
    const std::vector<SampledFrame> sampled = simulate_sensor(video, mask);

    FseParams fse;
    fse.iterations = 30;
    const SweepTable table = gain_sweep(video, sampled, mask, {0}, fse, MotionParams{}, 4, 2);

    REQUIRE(table.summary.size() == 1);
    CHECK(table.summary[0].n == 0);
    CHECK(table.summary[0].mean_gain == 0.0);
    REQUIRE(table.frames.size() == 3);
    for (const SweepFrameRow& row : table.frames) {
        CHECK(row.gain == 0.0);
        CHECK(row.psnr_sf == row.psnr_mf);
    }
    REQUIRE(table.reports.size() == 1);
    for (const FrameReport& row : table.reports[0].frames) CHECK(row.n_support_used == 0);
}

TEST_CASE("a static scene sweeps to (near) zero gain") {
    const SamplingMask mask = generate_mask(12, 12, 5);
    const std::vector<Frame> video(3, testutil::textured_frame(24, 24, 9));
    const std::vector<SampledFrame> sampled = simulate_sensor(video, mask);

    FseParams fse;
    fse.iterations = 50;
    const SweepTable table =
        gain_sweep(video, sampled, mask, {1, 2}, fse, MotionParams{9, 4}, 4, 2);
    for (const SweepFrameRow& row : table.frames) CHECK(std::abs(row.gain) <= 0.1);
}

TEST_CASE("sweep tables serialize with headers and an inf sentinel") {
    testutil::TempDir tmp("sweep_io");
    SweepTable table;
    table.n_values = {1};
    table.summary.push_back({1, 31.25, std::numeric_limits<double>::infinity(), 0.5});
    table.frames.push_back({1, 1, 31.25, std::numeric_limits<double>::infinity(), 0.5});

    write_sweep_summary(table, tmp.sub("summary.csv"));
    write_sweep_frames(table, tmp.sub("frames.csv"));

    std::ifstream summary(tmp.sub("summary.csv"));
    std::string line;
    std::getline(summary, line);
    CHECK(line == "n,mean_psnr_sf,mean_psnr_mf,mean_gain");
    std::getline(summary, line);
    CHECK(line == "1,31.250000,inf,0.500000");

    std::ifstream frames(tmp.sub("frames.csv"));
    std::getline(frames, line);
    CHECK(line == "n,t,psnr_sf,psnr_mf,gain");
    std::getline(frames, line);
    CHECK(line == "1,1,31.250000,inf,0.500000");

    write_plot_data(table, tmp.sub("plot_"));
    std::ifstream gain(tmp.sub("plot_mean_gain.dat"));
    std::getline(gain, line);
    CHECK(line == "1 0.500000");
    CHECK(std::ifstream(tmp.sub("plot_psnr_sf.dat")).good());
    CHECK(std::ifstream(tmp.sub("plot_psnr_mf_n1.dat")).good());
}

TEST_CASE("empty n list is rejected") {
    const SamplingMask mask = generate_mask(12, 12, 3);
    const std::vector<Frame> video = {testutil::textured_frame(24, 24, 1)};
    const std::vector<SampledFrame> sampled = simulate_sensor(video, mask);
    CHECK_THROWS_AS(gain_sweep(video, sampled, mask, {}, FseParams{}, MotionParams{}, 4, 1),
                    std::invalid_argument);
}
