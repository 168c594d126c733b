#include "nrs/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrs/config.hpp"
#include "nrs/error.hpp"
#include "nrs/eval.hpp"
#include "nrs/fse.hpp"
#include "nrs/mask.hpp"
#include "nrs/multiframe.hpp"
#include "nrs/pgm.hpp"
#include "nrs/synthetic.hpp"

namespace fs = std::filesystem;

namespace nrs {

namespace {

constexpr const char* kToolVersion = "nrsrecon 1.0.0";

// Every run writes its effective settings next to the outputs; replaying a
// manifest reproduces the outputs byte for byte, so nothing time- or
// machine-dependent may go in here.
void write_manifest(const std::string& dir, const std::string& command, KeyValueMap kv) {
    kv["tool"] = kToolVersion;
    kv["command"] = command;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
    write_config(kv, (fs::path(dir) / "manifest.txt").string());
}

std::string parent_dir(const std::string& file_path) {
    const fs::path parent = fs::path(file_path).parent_path();
    return parent.empty() ? std::string(".") : parent.string();
}

// "1,2,4" and "1..8" forms, mixable: "1..3,6"
std::vector<int> parse_count_list(const std::string& text) {
    std::vector<int> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        const std::size_t dots = item.find("..");
        try {
            if (dots == std::string::npos) {
                values.push_back(std::stoi(item));
            } else {
                const int lo = std::stoi(item.substr(0, dots));
                const int hi = std::stoi(item.substr(dots + 2));
                if (hi < lo) throw std::invalid_argument(item);
                for (int v = lo; v <= hi; ++v) values.push_back(v);
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("bad support-count list item: '" + item + "'");
        }
        pos = comma + 1;
    }
    if (values.empty()) throw std::invalid_argument("empty support-count list");
    for (int v : values)
        if (v < 0) throw std::invalid_argument("support counts must be >= 0");
    return values;
}

struct ParamOptions {
    std::string config_path;
    FseParams fse;
    MotionParams motion;
    int margin = 4;
    int threads = 1;
};

// Config file first, explicit flags on top.
void add_param_flags(CLI::App* cmd, ParamOptions& opts, bool with_threads = true) {
    cmd->add_option("--config", opts.config_path, "key-value parameter file");
    cmd->add_option("--block-size", opts.fse.block_size, "reconstruction block size");
    cmd->add_option("--border-width", opts.fse.border_width, "support border around each block");
    cmd->add_option("--fft-size", opts.fse.fft_size, "transform size (block + 2*border)");
    cmd->add_option("--iterations", opts.fse.iterations, "model-building iterations per block");
    cmd->add_option("--decay-factor", opts.fse.decay_factor, "spatial weight falloff");
    cmd->add_option("--ortho-compensation", opts.fse.ortho_compensation,
                    "orthogonality deficiency compensation");
    cmd->add_option("--reconstructed-weighting", opts.fse.reconstructed_weighting,
                    "weight of reconstructed pixels");
    cmd->add_option("--window-size", opts.motion.window_size, "matching window (odd)");
    cmd->add_option("--search-range", opts.motion.search_range, "max displacement per axis");
    if (with_threads)
        cmd->add_option("--threads", opts.threads, "worker threads (output-invariant)");
}

void finalize_params(const CLI::App* cmd, ParamOptions& opts) {
    if (!opts.config_path.empty()) {
        ParamOptions from_file = opts;
        from_file.fse = FseParams{};
        from_file.motion = MotionParams{};
        from_file.margin = 4;
        apply_config(read_config(opts.config_path), from_file.fse, from_file.motion,
                     &from_file.margin);
        // flags given on the command line beat the file
        const auto keep = [&](const std::string& flag, auto member, auto value) {
            if (cmd->count(flag) == 0) *member = value;
        };
        keep("--block-size", &opts.fse.block_size, from_file.fse.block_size);
        keep("--border-width", &opts.fse.border_width, from_file.fse.border_width);
        keep("--fft-size", &opts.fse.fft_size, from_file.fse.fft_size);
        keep("--iterations", &opts.fse.iterations, from_file.fse.iterations);
        keep("--decay-factor", &opts.fse.decay_factor, from_file.fse.decay_factor);
        keep("--ortho-compensation", &opts.fse.ortho_compensation,
             from_file.fse.ortho_compensation);
        keep("--reconstructed-weighting", &opts.fse.reconstructed_weighting,
             from_file.fse.reconstructed_weighting);
        keep("--window-size", &opts.motion.window_size, from_file.motion.window_size);
        keep("--search-range", &opts.motion.search_range, from_file.motion.search_range);
        if (cmd->get_option_no_throw("--margin") == nullptr || cmd->count("--margin") == 0)
            opts.margin = from_file.margin;
    }
    opts.fse.validate();
    opts.motion.validate();
    if (opts.threads < 1) throw std::invalid_argument("--threads must be >= 1");
}

KeyValueMap manifest_base(const ParamOptions& opts) {
    return to_config(opts.fse, opts.motion, opts.margin);
}

int cmd_synthesize(CLI::App& app) {
    auto* cmd = app.get_subcommand("synthesize");
    SyntheticSpec spec;
    static const std::map<std::string, MotionKind> kinds{
        {"static", MotionKind::Static},
        {"translate", MotionKind::Translate},
        {"zoom", MotionKind::Zoom},
        {"rotate", MotionKind::Rotate}};
    spec.kind = kinds.at(cmd->get_option("--kind")->as<std::string>());
    spec.dx = cmd->get_option("--dx")->as<double>();
    spec.dy = cmd->get_option("--dy")->as<double>();
    spec.zoom_rate = cmd->get_option("--zoom-rate")->as<double>();
    spec.rotate_deg = cmd->get_option("--rotate-deg")->as<double>();
    spec.frames = cmd->get_option("--frames")->as<int>();
    spec.width = cmd->get_option("--width")->as<int>();
    spec.height = cmd->get_option("--height")->as<int>();
    spec.seed = cmd->get_option("--seed")->as<std::uint64_t>();
    const std::string out_dir = cmd->get_option("--out")->as<std::string>();

    const std::vector<Frame> video = synthesize_video(spec);
    write_pgm_sequence(video, out_dir);

    KeyValueMap kv;
    std::string kind_name;
    for (const auto& [name, value] : kinds)
        if (value == spec.kind) kind_name = name;
    kv["kind"] = kind_name;
    kv["dx"] = std::to_string(spec.dx);
    kv["dy"] = std::to_string(spec.dy);
    kv["zoom_rate"] = std::to_string(spec.zoom_rate);
    kv["rotate_deg"] = std::to_string(spec.rotate_deg);
    kv["frames"] = std::to_string(spec.frames);
    kv["width"] = std::to_string(spec.width);
    kv["height"] = std::to_string(spec.height);
    kv["seed"] = std::to_string(spec.seed);
    write_manifest(out_dir, "synthesize", std::move(kv));
    std::cout << "wrote " << video.size() << " frames to " << out_dir << "\n";
    return 0;
}

int cmd_simulate(CLI::App& app) {
    auto* cmd = app.get_subcommand("simulate");
    const std::string in_dir = cmd->get_option("--in")->as<std::string>();
    const std::string out_dir = cmd->get_option("--out")->as<std::string>();
    const std::string mask_in = cmd->get_option("--mask-in")->as<std::string>();
    const std::uint64_t seed = cmd->get_option("--seed")->as<std::uint64_t>();

    const std::vector<Frame> video = read_pgm_sequence(in_dir);
    const int width = video.front().width;
    const int height = video.front().height;

    SamplingMask mask;
    if (!mask_in.empty()) {
        mask = read_mask(mask_in);
        if (!mask.open.same_shape(video.front()))
            throw DimensionError("mask and input frames differ in size");
    } else {
        if (width % 2 != 0 || height % 2 != 0)
            throw DimensionError("frame dimensions must be even to derive a sensor mask");
        mask = generate_mask(width / 2, height / 2, seed);
    }

    const std::vector<SampledFrame> sampled = simulate_sensor(video, mask);
    std::vector<Frame> carrier;  // missing positions carried as 0
    carrier.reserve(sampled.size());
    for (const SampledFrame& frame : sampled) carrier.push_back(frame.values);
    write_pgm_sequence(carrier, out_dir);
    write_mask(mask, (fs::path(out_dir) / "mask.nrs").string());

    KeyValueMap kv;
    kv["input"] = in_dir;
    kv["seed"] = std::to_string(mask.seed);
    kv["mask"] = mask_in.empty() ? "generated" : mask_in;
    kv["frames"] = std::to_string(sampled.size());
    write_manifest(out_dir, "simulate", std::move(kv));
    std::cout << "wrote " << sampled.size() << " sampled frames and mask to " << out_dir << "\n";
    return 0;
}

// sampled sequence on disk = value PGMs (0 where missing) + mask file
std::vector<SampledFrame> load_sampled(const std::string& dir, const SamplingMask& mask) {
    const std::vector<Frame> carrier = read_pgm_sequence(dir);
    std::vector<SampledFrame> sampled;
    sampled.reserve(carrier.size());
    for (const Frame& frame : carrier) {
        if (!frame.same_shape(mask.open)) throw DimensionError("mask and frames differ in size");
        SampledFrame sf;
        sf.values = frame;
        sf.filled = mask.open;
        for (std::size_t i = 0; i < sf.values.size(); ++i)
            if (!mask.open.data[i]) sf.values.data[i] = 0;
        sampled.push_back(std::move(sf));
    }
    return sampled;
}

int cmd_reconstruct_sf(CLI::App& app, ParamOptions& opts) {
    auto* cmd = app.get_subcommand("reconstruct-sf");
    finalize_params(cmd, opts);
    const std::string in_dir = cmd->get_option("--in")->as<std::string>();
    const std::string out_dir = cmd->get_option("--out")->as<std::string>();
    const std::string mask_path = cmd->get_option("--mask")->as<std::string>();

    const SamplingMask mask = read_mask(mask_path);
    const std::vector<SampledFrame> sampled = load_sampled(in_dir, mask);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);
    const std::vector<Frame> video = reconstruct_video_sf(sampled, opts.fse, opts.threads);
    write_pgm_sequence(video, out_dir);

    KeyValueMap kv = manifest_base(opts);
    kv["input"] = in_dir;
    kv["mask"] = mask_path;
    kv["seed"] = std::to_string(mask.seed);
    kv["frames"] = std::to_string(video.size());
    write_manifest(out_dir, "reconstruct-sf", std::move(kv));
    std::cout << "reconstructed " << video.size() << " frames to " << out_dir << "\n";
    return 0;
}

int cmd_reconstruct_mf(CLI::App& app, ParamOptions& opts) {
    auto* cmd = app.get_subcommand("reconstruct-mf");
    finalize_params(cmd, opts);
    const std::string in_dir = cmd->get_option("--in")->as<std::string>();
    const std::string out_dir = cmd->get_option("--out")->as<std::string>();
    const std::string mask_path = cmd->get_option("--mask")->as<std::string>();
    const std::string report_path = cmd->get_option("--report")->as<std::string>();
    const std::string mv_dump = cmd->get_option("--mv-dump")->as<std::string>();
    const int n_support = cmd->get_option("--n-support")->as<int>();

    const SamplingMask mask = read_mask(mask_path);
    const std::vector<SampledFrame> sampled = load_sampled(in_dir, mask);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    MfOptions mf;
    mf.threads = opts.threads;
    mf.mv_dump_path = mv_dump;
    RunReport report;
    const std::vector<Frame> video =
        reconstruct_video_mf(sampled, mask, n_support, opts.fse, opts.motion, &report, mf);
    write_pgm_sequence(video, out_dir);
    if (!report_path.empty()) write_run_report(report, report_path);
    for (const std::string& warning : report.warnings)
        std::cerr << "warning: " << warning << "\n";

    KeyValueMap kv = manifest_base(opts);
    kv["input"] = in_dir;
    kv["mask"] = mask_path;
    kv["seed"] = std::to_string(mask.seed);
    kv["frames"] = std::to_string(video.size());
    kv["n_support"] = std::to_string(n_support);
    write_manifest(out_dir, "reconstruct-mf", std::move(kv));
    std::cout << "reconstructed " << video.size() << " frames to " << out_dir << "\n";
    return 0;
}

int cmd_evaluate(CLI::App& app, ParamOptions& opts) {
    auto* cmd = app.get_subcommand("evaluate");
    const std::string ref_dir = cmd->get_option("--reference")->as<std::string>();
    const std::string test_dir = cmd->get_option("--test")->as<std::string>();
    const std::string out_path = cmd->get_option("--out")->as<std::string>();
    if (cmd->count("--margin")) opts.margin = cmd->get_option("--margin")->as<int>();

    const std::vector<Frame> reference = read_pgm_sequence(ref_dir);
    const std::vector<Frame> test = read_pgm_sequence(test_dir);
    if (reference.size() != test.size())
        throw DimensionError("reference and test sequences differ in length");

    double sum = 0.0;
    std::string csv = "t,psnr\n";
    for (std::size_t t = 0; t < reference.size(); ++t) {
        const PsnrResult r = psnr(reference[t], test[t], opts.margin);
        sum += r.value;
        csv += std::to_string(t + 1) + "," + format_db(r.value) + "\n";
        std::cout << "frame " << (t + 1) << ": " << format_db(r.value) << " dB\n";
    }
    const double mean = sum / static_cast<double>(reference.size());
    csv += "mean," + format_db(mean) + "\n";
    std::cout << "mean: " << format_db(mean) << " dB\n";

    if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file) throw IoError("cannot open PSNR report for writing: " + out_path);
        file << csv;
        if (!file) throw IoError("error writing PSNR report: " + out_path);

        KeyValueMap kv;
        kv["reference"] = ref_dir;
        kv["test"] = test_dir;
        kv["margin"] = std::to_string(opts.margin);
        kv["frames"] = std::to_string(reference.size());
        write_manifest(parent_dir(out_path), "evaluate", std::move(kv));
    }
    return 0;
}

int cmd_sweep(CLI::App& app, ParamOptions& opts) {
    auto* cmd = app.get_subcommand("sweep");
    finalize_params(cmd, opts);
    const std::string ref_dir = cmd->get_option("--reference")->as<std::string>();
    const std::string in_dir = cmd->get_option("--in")->as<std::string>();
    const std::string mask_path = cmd->get_option("--mask")->as<std::string>();
    const std::string out_dir = cmd->get_option("--out")->as<std::string>();
    const std::string plot_prefix = cmd->get_option("--plot-data")->as<std::string>();
    const std::vector<int> n_values =
        parse_count_list(cmd->get_option("--n")->as<std::string>());
    if (cmd->count("--margin")) opts.margin = cmd->get_option("--margin")->as<int>();

    const std::vector<Frame> reference = read_pgm_sequence(ref_dir);
    const SamplingMask mask = read_mask(mask_path);
    const std::vector<SampledFrame> sampled = load_sampled(in_dir, mask);

    const SweepTable table = gain_sweep(reference, sampled, mask, n_values, opts.fse, opts.motion,
                                        opts.margin, opts.threads);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);
    write_sweep_summary(table, (fs::path(out_dir) / "sweep_summary.csv").string());
    write_sweep_frames(table, (fs::path(out_dir) / "sweep_frames.csv").string());
    for (std::size_t i = 0; i < table.reports.size(); ++i)
        write_run_report(table.reports[i],
                         (fs::path(out_dir) / ("sweep_report_n" + std::to_string(table.n_values[i]) +
                                               ".csv"))
                             .string());
    if (!plot_prefix.empty()) write_plot_data(table, plot_prefix);

    for (const SweepSummaryRow& row : table.summary)
        std::cout << "n=" << row.n << " mean_psnr_sf=" << format_db(row.mean_psnr_sf)
                  << " mean_psnr_mf=" << format_db(row.mean_psnr_mf)
                  << " mean_gain=" << format_db(row.mean_gain) << "\n";

    KeyValueMap kv = manifest_base(opts);
    kv["reference"] = ref_dir;
    kv["input"] = in_dir;
    kv["mask"] = mask_path;
    kv["seed"] = std::to_string(mask.seed);
    std::string n_text;
    for (std::size_t i = 0; i < n_values.size(); ++i)
        n_text += (i ? "," : "") + std::to_string(n_values[i]);
    kv["n_values"] = n_text;
    write_manifest(out_dir, "sweep", std::move(kv));
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Non-regular sampling sensor simulation and video reconstruction"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    ParamOptions opts;

    auto* synth = app.add_subcommand("synthesize", "generate a synthetic ground-truth sequence");
    synth->add_option("--out", "output directory")->required();
    synth->add_option("--kind", "static|translate|zoom|rotate")
        ->check(CLI::IsMember({"static", "translate", "zoom", "rotate"}))
        ->default_val(std::string{"static"});
    synth->add_option("--dx", "columns per frame (translate)")->default_val(0.0);
    synth->add_option("--dy", "rows per frame (translate)")->default_val(0.0);
    synth->add_option("--zoom-rate", "scale per frame (zoom)")->default_val(1.0);
    synth->add_option("--rotate-deg", "degrees per frame (rotate)")->default_val(0.0);
    synth->add_option("--frames", "frame count")->default_val(1);
    synth->add_option("--width", "frame width")->default_val(128);
    synth->add_option("--height", "frame height")->default_val(128);
    synth->add_option("--seed", "texture seed")->default_val(std::uint64_t{1});

    auto* sim = app.add_subcommand("simulate", "mask a sequence through the sampling sensor");
    sim->add_option("--in", "ground-truth PGM directory")->required();
    sim->add_option("--out", "output directory")->required();
    sim->add_option("--seed", "mask seed")->default_val(std::uint64_t{1});
    sim->add_option("--mask-in", "reuse an existing mask file instead of generating")
        ->default_val(std::string{});

    auto* sf = app.add_subcommand("reconstruct-sf", "single-frame reconstruction");
    sf->add_option("--in", "sampled PGM directory")->required();
    sf->add_option("--mask", "mask file")->required();
    sf->add_option("--out", "output directory")->required();
    add_param_flags(sf, opts);

    auto* mf = app.add_subcommand("reconstruct-mf", "motion-compensated reconstruction");
    mf->add_option("--in", "sampled PGM directory")->required();
    mf->add_option("--mask", "mask file")->required();
    mf->add_option("--out", "output directory")->required();
    mf->add_option("--n-support", "support frames per side pattern")->required();
    mf->add_option("--report", "per-frame run report CSV")->default_val(std::string{});
    mf->add_option("--mv-dump", "motion vector CSV dump")->default_val(std::string{});
    add_param_flags(mf, opts);

    auto* ev = app.add_subcommand("evaluate", "PSNR of a reconstruction against ground truth");
    ev->add_option("--reference", "ground-truth PGM directory")->required();
    ev->add_option("--test", "reconstructed PGM directory")->required();
    ev->add_option("--margin", "border pixels excluded per side")->default_val(4);
    ev->add_option("--out", "per-frame PSNR CSV")->default_val(std::string{});

    auto* sweep = app.add_subcommand("sweep", "gain over support-frame counts");
    sweep->add_option("--reference", "ground-truth PGM directory")->required();
    sweep->add_option("--in", "sampled PGM directory")->required();
    sweep->add_option("--mask", "mask file")->required();
    sweep->add_option("--out", "output directory")->required();
    sweep->add_option("--n", "support counts, e.g. 1,2,4 or 1..8")->required();
    sweep->add_option("--margin", "border pixels excluded per side")->default_val(4);
    sweep->add_option("--plot-data", "prefix for two-column plot series")
        ->default_val(std::string{});
    add_param_flags(sweep, opts);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) return cmd_synthesize(app);
        if (sim->parsed()) return cmd_simulate(app);
        if (sf->parsed()) return cmd_reconstruct_sf(app, opts);
        if (mf->parsed()) return cmd_reconstruct_mf(app, opts);
        if (ev->parsed()) return cmd_evaluate(app, opts);
        if (sweep->parsed()) return cmd_sweep(app, opts);
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 1;
}

}  // namespace nrs
