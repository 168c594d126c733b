#include "nrs/config.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "nrs/error.hpp"

namespace nrs {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' needs an integer, got '" + value +
                                    "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' needs a number, got '" + value +
                                    "'");
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

KeyValueMap read_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open config file: " + path);

    KeyValueMap kv;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw IoError("config line " + std::to_string(line_no) + " has no '=': " + path);
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty())
            throw IoError("config line " + std::to_string(line_no) + " has no key: " + path);
        kv[key] = trim(stripped.substr(eq + 1));
    }
    return kv;
}

void write_config(const KeyValueMap& kv, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot open config file for writing: " + path);
    for (const auto& [key, value] : kv) file << key << " = " << value << '\n';
    if (!file) throw IoError("error writing config file: " + path);
}

int apply_config(const KeyValueMap& kv, FseParams& fse, MotionParams& motion, int* margin) {
    int consumed = 0;
    for (const auto& [key, value] : kv) {
        if (key == "block_size")
            fse.block_size = parse_int(key, value);
        else if (key == "border_width")
            fse.border_width = parse_int(key, value);
        else if (key == "fft_size")
            fse.fft_size = parse_int(key, value);
        else if (key == "iterations")
            fse.iterations = parse_int(key, value);
        else if (key == "decay_factor")
            fse.decay_factor = parse_double(key, value);
        else if (key == "orthogonality_deficiency_compensation")
            fse.ortho_compensation = parse_double(key, value);
        else if (key == "reconstructed_area_weighting")
            fse.reconstructed_weighting = parse_double(key, value);
        else if (key == "window_size")
            motion.window_size = parse_int(key, value);
        else if (key == "search_range")
            motion.search_range = parse_int(key, value);
        else if (key == "margin" && margin)
            *margin = parse_int(key, value);
        else
            continue;
        ++consumed;
    }
    return consumed;
}

KeyValueMap to_config(const FseParams& fse, const MotionParams& motion, int margin) {
    KeyValueMap kv;
    kv["block_size"] = std::to_string(fse.block_size);
    kv["border_width"] = std::to_string(fse.border_width);
    kv["fft_size"] = std::to_string(fse.fft_size);
    kv["iterations"] = std::to_string(fse.iterations);
    kv["decay_factor"] = format_double(fse.decay_factor);
    kv["orthogonality_deficiency_compensation"] = format_double(fse.ortho_compensation);
    kv["reconstructed_area_weighting"] = format_double(fse.reconstructed_weighting);
    kv["window_size"] = std::to_string(motion.window_size);
    kv["search_range"] = std::to_string(motion.search_range);
    kv["margin"] = std::to_string(margin);
    return kv;
}

}  // namespace nrs
