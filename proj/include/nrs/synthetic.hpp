#pragma once

#include <cstdint>
#include <vector>

#include "nrs/frame.hpp"

namespace nrs {

enum class MotionKind { Static, Translate, Zoom, Rotate };

// Procedural band-limited test texture under global motion. The texture is
// a seeded sum of plane waves, so it can be sampled at any real coordinate
// and the motion introduces no resampling error. Integer dx/dy therefore
// shift the pixel grid exactly.
struct SyntheticSpec {
    MotionKind kind = MotionKind::Static;
    double dx = 0.0;          // pixels per frame (Translate)
    double dy = 0.0;
    double zoom_rate = 1.0;   // scale factor per frame (Zoom), > 0
    double rotate_deg = 0.0;  // degrees per frame (Rotate)
    int frames = 1;
    int width = 128;
    int height = 128;
    std::uint64_t seed = 1;

    int tones = 48;           // number of plane waves
    double min_freq = 0.02;   // cycles per pixel
    double max_freq = 0.15;
    double mean_level = 128.0;
    double stddev = 40.0;

    void validate() const;  // throws std::invalid_argument
};

std::vector<Frame> synthesize_video(const SyntheticSpec& spec);

}  // namespace nrs
