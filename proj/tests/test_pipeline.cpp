#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "nrs/cli.hpp"
#include "nrs/config.hpp"
#include "nrs/pgm.hpp"

using namespace nrs;

namespace {

int run(const std::vector<std::string>& args) { return run_cli(args); }

std::string slurp(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    REQUIRE(file.good());
    std::ostringstream ss;
    ss << file.rdbuf();
    return ss.str();
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream file(path);
    REQUIRE(file.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(file, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("synthesize is reproducible and translation shifts the texture") {
    testutil::TempDir tmp("synth");
    const std::vector<std::string> base{"synthesize", "--kind", "translate", "--dx", "1",
                                        "--frames", "3",         "--width",  "32", "--height",
                                        "32",        "--seed",   "7"};
    auto args_a = base, args_b = base;
    args_a.insert(args_a.end(), {"--out", tmp.sub("a")});
    args_b.insert(args_b.end(), {"--out", tmp.sub("b")});
    REQUIRE(run(args_a) == 0);
    REQUIRE(run(args_b) == 0);

    for (const char* name : {"frame_0000.pgm", "frame_0001.pgm", "frame_0002.pgm",
                             "manifest.txt"})
        CHECK(slurp(tmp.sub("a") + "/" + name) == slurp(tmp.sub("b") + "/" + name));

    const std::vector<Frame> video = read_pgm_sequence(tmp.sub("a"));
    REQUIRE(video.size() == 3);
    for (int k = 1; k < 3; ++k)
        for (int row = 0; row < 32; ++row)
            for (int col = k; col < 32; ++col)
                CHECK(video[k].at(row, col) == video[0].at(row, col - k));
}

TEST_CASE("a constant scene survives the whole pipeline losslessly") {
    testutil::TempDir tmp("constpipe");
    write_pgm_sequence(std::vector<Frame>(3, testutil::constant_frame(32, 32, 128)),
                       tmp.sub("truth"));

    REQUIRE(run({"simulate", "--in", tmp.sub("truth"), "--out", tmp.sub("sampled"), "--seed",
                 "5"}) == 0);

    // the carrier keeps sampled values and zeroes the rest: exactly 1/4 open
    const Frame carrier = read_pgm(tmp.sub("sampled") + "/frame_0000.pgm");
    int open = 0;
    for (std::uint8_t v : carrier.data) {
        CHECK((v == 0 || v == 128));
        open += v == 128;
    }
    CHECK(open == 32 * 32 / 4);

    REQUIRE(run({"reconstruct-sf", "--in", tmp.sub("sampled"), "--mask",
                 tmp.sub("sampled") + "/mask.nrs", "--out", tmp.sub("recon"), "--iterations",
                 "50"}) == 0);
    REQUIRE(run({"evaluate", "--reference", tmp.sub("truth"), "--test", tmp.sub("recon"),
                 "--out", tmp.sub("psnr.csv")}) == 0);

    const std::vector<std::string> lines = read_lines(tmp.sub("psnr.csv"));
    REQUIRE(lines.size() == 5);  // header + 3 frames + mean
    CHECK(lines[0] == "t,psnr");
    for (std::size_t i = 1; i < lines.size(); ++i)
        CHECK(lines[i].find("inf") != std::string::npos);
}

TEST_CASE("multi-frame with zero supports reproduces the single-frame output") {
    testutil::TempDir tmp("mf0");
    REQUIRE(run({"synthesize", "--kind", "translate", "--dx", "1", "--dy", "1", "--frames", "3",
                 "--width", "32", "--height", "32", "--seed", "11", "--out",
                 tmp.sub("truth")}) == 0);
    REQUIRE(run({"simulate", "--in", tmp.sub("truth"), "--out", tmp.sub("sampled"), "--seed",
                 "2"}) == 0);
    const std::string mask = tmp.sub("sampled") + "/mask.nrs";

    REQUIRE(run({"reconstruct-sf", "--in", tmp.sub("sampled"), "--mask", mask, "--out",
                 tmp.sub("sf")}) == 0);
    REQUIRE(run({"reconstruct-mf", "--in", tmp.sub("sampled"), "--mask", mask, "--out",
                 tmp.sub("mf"), "--n-support", "0", "--report", tmp.sub("report.csv")}) == 0);

    for (const char* name : {"frame_0000.pgm", "frame_0001.pgm", "frame_0002.pgm"})
        CHECK(slurp(tmp.sub("sf") + "/" + name) == slurp(tmp.sub("mf") + "/" + name));

    const std::vector<std::string> lines = read_lines(tmp.sub("report.csv"));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "t,n_support_used,mv_raw,mv_kept,pixels_projected,fill_fraction");
    CHECK(lines[1] == "1,0,0,0,0,0.250000");
    CHECK(lines[2] == "2,0,0,0,0,0.250000");
    CHECK(lines[3] == "3,0,0,0,0,0.250000");
}

TEST_CASE("config files set parameters and explicit flags beat them") {
    testutil::TempDir tmp("config");
    REQUIRE(run({"synthesize", "--frames", "1", "--width", "32", "--height", "32", "--seed",
                 "3", "--out", tmp.sub("truth")}) == 0);
    REQUIRE(run({"simulate", "--in", tmp.sub("truth"), "--out", tmp.sub("sampled"), "--seed",
                 "8"}) == 0);
    const std::string mask = tmp.sub("sampled") + "/mask.nrs";

    {
        std::ofstream cfg(tmp.sub("params.cfg"));
        cfg << "# trimmed-down settings\n"
            << "iterations = 7\n"
            << "decay_factor = 0.6\n"
            << "window_size = 7\n";
    }

    REQUIRE(run({"reconstruct-sf", "--in", tmp.sub("sampled"), "--mask", mask, "--out",
                 tmp.sub("r1"), "--config", tmp.sub("params.cfg"), "--iterations", "9"}) == 0);

    const KeyValueMap manifest = read_config(tmp.sub("r1") + "/manifest.txt");
    CHECK(manifest.at("iterations") == "9");        // flag wins
    CHECK(manifest.at("decay_factor") == "0.6");    // from the file
    CHECK(manifest.at("window_size") == "7");       // from the file
    CHECK(manifest.at("block_size") == "4");        // untouched default
    CHECK(manifest.at("tool") == "nrsrecon 1.0.0");
    CHECK(manifest.at("command") == "reconstruct-sf");
}

TEST_CASE("replaying a manifest reproduces the output byte for byte") {
    testutil::TempDir tmp("replay");
    REQUIRE(run({"synthesize", "--kind", "translate", "--dx", "1", "--frames", "2", "--width",
                 "32", "--height", "32", "--seed", "21", "--out", tmp.sub("truth")}) == 0);
    REQUIRE(run({"simulate", "--in", tmp.sub("truth"), "--out", tmp.sub("sampled"), "--seed",
                 "4"}) == 0);
    const std::string mask = tmp.sub("sampled") + "/mask.nrs";

    REQUIRE(run({"reconstruct-sf", "--in", tmp.sub("sampled"), "--mask", mask, "--out",
                 tmp.sub("r1"), "--iterations", "30", "--decay-factor", "0.65"}) == 0);
    REQUIRE(run({"reconstruct-sf", "--in", tmp.sub("sampled"), "--mask", mask, "--out",
                 tmp.sub("r2"), "--config", tmp.sub("r1") + "/manifest.txt"}) == 0);

    for (const char* name : {"frame_0000.pgm", "frame_0001.pgm"})
        CHECK(slurp(tmp.sub("r1") + "/" + name) == slurp(tmp.sub("r2") + "/" + name));
}

TEST_CASE("exit codes distinguish usage, I/O, and shape errors") {
    testutil::TempDir tmp("exitcodes");
    write_pgm_sequence(std::vector<Frame>(2, testutil::textured_frame(24, 24, 1)),
                       tmp.sub("truth"));
    write_mask(generate_mask(8, 8, 1), tmp.sub("small_mask.nrs"));  // 16x16, mismatched

    // usage problems
    CHECK(run({"reconstruct-sf"}) == 1);
    CHECK(run({"frobnicate"}) == 1);
    CHECK(run({"synthesize", "--out", tmp.sub("x"), "--kind", "bogus"}) == 1);
    CHECK(run({"sweep", "--reference", tmp.sub("truth"), "--in", tmp.sub("truth"), "--mask",
               tmp.sub("small_mask.nrs"), "--out", tmp.sub("x"), "--n", "abc"}) == 1);
    CHECK(run({"reconstruct-sf", "--in", tmp.sub("truth"), "--mask", tmp.sub("small_mask.nrs"),
               "--out", tmp.sub("x"), "--fft-size", "31"}) == 1);

    // missing files
    CHECK(run({"reconstruct-sf", "--in", tmp.sub("nope"), "--mask", tmp.sub("small_mask.nrs"),
               "--out", tmp.sub("x")}) == 2);
    CHECK(run({"reconstruct-sf", "--in", tmp.sub("truth"), "--mask", tmp.sub("no_mask.nrs"),
               "--out", tmp.sub("x")}) == 2);

    // shape mismatches
    CHECK(run({"reconstruct-sf", "--in", tmp.sub("truth"), "--mask", tmp.sub("small_mask.nrs"),
               "--out", tmp.sub("x")}) == 3);
    write_pgm_sequence(std::vector<Frame>(1, testutil::textured_frame(24, 24, 2)),
                       tmp.sub("short"));
    CHECK(run({"evaluate", "--reference", tmp.sub("truth"), "--test", tmp.sub("short")}) == 3);
}

TEST_CASE("the version flag exits cleanly") { CHECK(run({"--version"}) == 0); }
