#include "nrs/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nrs {

void SyntheticSpec::validate() const {
    if (frames < 1) throw std::invalid_argument("synthetic: need at least one frame");
    if (width < 1 || height < 1) throw std::invalid_argument("synthetic: empty frame size");
    if (tones < 1) throw std::invalid_argument("synthetic: need at least one tone");
    if (!(min_freq > 0.0 && min_freq <= max_freq))
        throw std::invalid_argument("synthetic: frequency band must satisfy 0 < min <= max");
    if (!(zoom_rate > 0.0)) throw std::invalid_argument("synthetic: zoom rate must be positive");
    if (stddev < 0.0) throw std::invalid_argument("synthetic: negative contrast");
}

namespace {

struct Tone {
    double freq_x = 0.0;  // cycles per pixel along columns
    double freq_y = 0.0;
    double phase = 0.0;
    double amplitude = 0.0;
};

// The scene is a fixed sum of plane waves, defined on the whole real plane.
// Sampling it at transformed coordinates realizes motion without any
// resampling filter, so integer translation shifts the pixel grid exactly.
class PlaneWaveField {
  public:
    explicit PlaneWaveField(const SyntheticSpec& spec) : mean_(spec.mean_level) {
        std::mt19937_64 rng(spec.seed);
        // portable uniform draw: top 53 bits, exact on every platform
        const auto uniform = [&rng]() {
            return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
        };

        tones_.resize(spec.tones);
        double power = 0.0;
        for (Tone& tone : tones_) {
            const double freq = spec.min_freq + (spec.max_freq - spec.min_freq) * uniform();
            const double direction = 2.0 * std::numbers::pi * uniform();
            tone.freq_x = freq * std::cos(direction);
            tone.freq_y = freq * std::sin(direction);
            tone.phase = 2.0 * std::numbers::pi * uniform();
            tone.amplitude = 0.5 + 0.5 * uniform();
            power += 0.5 * tone.amplitude * tone.amplitude;
        }
        const double scale = power > 0.0 ? spec.stddev / std::sqrt(power) : 0.0;
        for (Tone& tone : tones_) tone.amplitude *= scale;
    }

    double at(double x, double y) const {
        double value = mean_;
        for (const Tone& tone : tones_)
            value += tone.amplitude *
                     std::cos(2.0 * std::numbers::pi * (tone.freq_x * x + tone.freq_y * y) +
                              tone.phase);
        return value;
    }

  private:
    double mean_;
    std::vector<Tone> tones_;
};

}  // namespace

std::vector<Frame> synthesize_video(const SyntheticSpec& spec) {
    spec.validate();
    const PlaneWaveField field(spec);

    const double center_x = (spec.width - 1) / 2.0;
    const double center_y = (spec.height - 1) / 2.0;

    std::vector<Frame> video;
    video.reserve(spec.frames);
    for (int k = 0; k < spec.frames; ++k) {
        Frame frame(spec.width, spec.height, 0);
        for (int row = 0; row < spec.height; ++row) {
            for (int col = 0; col < spec.width; ++col) {
                double x = col;
                double y = row;
                switch (spec.kind) {
                    case MotionKind::Static:
                        break;
                    case MotionKind::Translate:
                        // content moves by (dx, dy) per frame, so frame k
                        // samples the scene k steps back
                        x = col - k * spec.dx;
                        y = row - k * spec.dy;
                        break;
                    case MotionKind::Zoom: {
                        const double inv = 1.0 / std::pow(spec.zoom_rate, k);
                        x = center_x + (col - center_x) * inv;
                        y = center_y + (row - center_y) * inv;
                        break;
                    }
                    case MotionKind::Rotate: {
                        const double angle = -k * spec.rotate_deg * std::numbers::pi / 180.0;
                        const double c = std::cos(angle);
                        const double s = std::sin(angle);
                        const double rel_x = col - center_x;
                        const double rel_y = row - center_y;
                        x = center_x + c * rel_x - s * rel_y;
                        y = center_y + s * rel_x + c * rel_y;
                        break;
                    }
                }
                const long q = std::clamp(std::lround(field.at(x, y)), 0L, 255L);
                frame.at(row, col) = static_cast<std::uint8_t>(q);
            }
        }
        video.push_back(std::move(frame));
    }
    return video;
}

}  // namespace nrs
