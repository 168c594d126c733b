#pragma once

#include <string>
#include <vector>

#include "nrs/frame.hpp"

namespace nrs {

// Binary PGM (P5), maxval <= 255. '#' comments in the header are skipped.
Frame read_pgm(const std::string& path);
void write_pgm(const Frame& frame, const std::string& path);

// All .pgm files in `dir`, ordered by filename. Throws IoError when none
// are found or the frames disagree on dimensions.
std::vector<Frame> read_pgm_sequence(const std::string& dir);

// Writes frames as <prefix>0000.pgm, <prefix>0001.pgm, ... into `dir`
// (created if absent). Returns the paths written.
std::vector<std::string> write_pgm_sequence(const std::vector<Frame>& frames,
                                            const std::string& dir,
                                            const std::string& prefix = "frame_");

}  // namespace nrs
