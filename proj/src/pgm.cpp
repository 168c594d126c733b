#include "nrs/pgm.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nrs/error.hpp"

namespace fs = std::filesystem;

namespace nrs {

namespace {

// Reads the next header token, skipping whitespace and '#' comments. The
// single whitespace byte after the token is consumed too, which after the
// maxval token is exactly the header/raster separator.
std::string next_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

int header_int(std::istream& in, const std::string& path, const char* what) {
    const std::string tok = next_token(in);
    try {
        std::size_t pos = 0;
        const int value = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return value;
    } catch (const std::exception&) {
        throw IoError(std::string("bad PGM header (") + what + "): " + path);
    }
}

}  // namespace

Frame read_pgm(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open PGM file: " + path);

    if (next_token(file) != "P5") throw IoError("not a binary PGM (P5) file: " + path);
    const int width = header_int(file, path, "width");
    const int height = header_int(file, path, "height");
    const int maxval = header_int(file, path, "maxval");
    if (width < 1 || height < 1) throw DimensionError("PGM has invalid dimensions: " + path);
    if (maxval < 1 || maxval > 255) throw IoError("PGM maxval out of 8-bit range: " + path);

    Frame frame(width, height, 0);
    file.read(reinterpret_cast<char*>(frame.data.data()),
              static_cast<std::streamsize>(frame.size()));
    if (file.gcount() != static_cast<std::streamsize>(frame.size()))
        throw IoError("PGM raster truncated: " + path);
    return frame;
}

void write_pgm(const Frame& frame, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open PGM file for writing: " + path);

    file << "P5\n" << frame.width << ' ' << frame.height << "\n255\n";
    file.write(reinterpret_cast<const char*>(frame.data.data()),
               static_cast<std::streamsize>(frame.size()));
    if (!file) throw IoError("error writing PGM file: " + path);
}

std::vector<Frame> read_pgm_sequence(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);

    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            paths.push_back(entry.path().string());
    }
    if (paths.empty()) throw IoError("no .pgm files in directory: " + dir);
    std::sort(paths.begin(), paths.end());

    std::vector<Frame> frames;
    frames.reserve(paths.size());
    for (const auto& path : paths) {
        frames.push_back(read_pgm(path));
        if (!frames.back().same_shape(frames.front()))
            throw DimensionError("frame dimensions differ within sequence: " + path);
    }
    return frames;
}

std::vector<std::string> write_pgm_sequence(const std::vector<Frame>& frames,
                                            const std::string& dir,
                                            const std::string& prefix) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory: " + dir);

    std::vector<std::string> paths;
    paths.reserve(frames.size());
    char suffix[16];
    for (std::size_t i = 0; i < frames.size(); ++i) {
        std::snprintf(suffix, sizeof(suffix), "%04zu.pgm", i);
        const std::string path = (fs::path(dir) / (prefix + suffix)).string();
        write_pgm(frames[i], path);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace nrs
