#include "nrs/fse.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace nrs {

namespace {

// FFTW's planner is not thread safe; executing a finished plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// One forward complex 2-D DFT of fixed size with its own buffers, so a plan
// can be reused across iterations and blocks without locking.
class Dft2d {
  public:
    explicit Dft2d(int n) : n_(n) {
        const std::size_t count = static_cast<std::size_t>(n) * n;
        in_ = fftw_alloc_complex(count);
        out_ = fftw_alloc_complex(count);
        std::lock_guard<std::mutex> lock(planner_mutex());
        // FFTW_ESTIMATE: deterministic plan choice, no buffer clobbering.
        plan_ = fftw_plan_dft_2d(n, n, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~Dft2d() {
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }
    Dft2d(const Dft2d&) = delete;
    Dft2d& operator=(const Dft2d&) = delete;

    void forward(const std::vector<double>& signal) {
        for (std::size_t i = 0; i < signal.size(); ++i) {
            in_[i][0] = signal[i];
            in_[i][1] = 0.0;
        }
        fftw_execute(plan_);
    }

    double bin_re(int k, int l) const { return out_[static_cast<std::size_t>(k) * n_ + l][0]; }
    double bin_im(int k, int l) const { return out_[static_cast<std::size_t>(k) * n_ + l][1]; }

  private:
    int n_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan plan_;
};

// Everything about the frequency grid that depends only on the DFT size:
// exact twiddle tables and the list of canonical conjugate-pair
// representatives. A pair (k,l)/((N-k)%N,(N-l)%N) describes one real basis
// function; the lexicographically smaller index is the canonical one and a
// bin that mirrors onto itself (2k % N == 0 and 2l % N == 0) carries a
// purely real coefficient.
struct FreqPlan {
    int n = 0;
    std::vector<double> cos_tab;  // [k * n + m] = cos(2*pi*k*m / n)
    std::vector<double> sin_tab;
    std::vector<std::pair<int, int>> candidates;  // ascending row-major
    std::vector<std::uint8_t> self_conjugate;     // parallel to candidates

    explicit FreqPlan(int size) : n(size) {
        const std::size_t nn = static_cast<std::size_t>(n) * n;
        cos_tab.resize(nn);
        sin_tab.resize(nn);
        const double step = 2.0 * std::numbers::pi / n;
        for (int k = 0; k < n; ++k) {
            for (int m = 0; m < n; ++m) {
                // reduce k*m mod n first so the table is exactly periodic
                const double angle = step * ((k * m) % n);
                cos_tab[static_cast<std::size_t>(k) * n + m] = std::cos(angle);
                sin_tab[static_cast<std::size_t>(k) * n + m] = std::sin(angle);
            }
        }
        for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
                const int pk = (n - k) % n;
                const int pl = (n - l) % n;
                if (std::pair(k, l) <= std::pair(pk, pl)) {
                    candidates.emplace_back(k, l);
                    self_conjugate.push_back(k == pk && l == pl);
                }
            }
        }
    }
};

std::shared_ptr<const FreqPlan> freq_plan(int n) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const FreqPlan>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<FreqPlan>(n);
    return slot;
}

bool is_self_conjugate(int n, int k, int l) {
    return (2 * k) % n == 0 && (2 * l) % n == 0;
}

void check_area(const SupportArea& area) {
    const auto expected = static_cast<std::size_t>(area.size) * area.size;
    if (area.size < 1 || area.values.size() != expected || area.status.size() != expected)
        throw std::invalid_argument("support area buffers do not match its size");
}

double weighted_energy(const std::vector<double>& w, const std::vector<double>& r) {
    double e = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) e += w[i] * r[i] * r[i];
    return e;
}

double model_value(const SparseModel& model, const FreqPlan& plan, int row, int col) {
    const int n = model.size;
    double out = 0.0;
    for (const ModelTerm& term : model.terms) {
        const double ckr = plan.cos_tab[static_cast<std::size_t>(term.freq_row) * n + row];
        const double skr = plan.sin_tab[static_cast<std::size_t>(term.freq_row) * n + row];
        const double clc = plan.cos_tab[static_cast<std::size_t>(term.freq_col) * n + col];
        const double slc = plan.sin_tab[static_cast<std::size_t>(term.freq_col) * n + col];
        const double cos_theta = ckr * clc - skr * slc;
        if (is_self_conjugate(n, term.freq_row, term.freq_col)) {
            out += term.coeff.real() * cos_theta;
        } else {
            const double sin_theta = skr * clc + ckr * slc;
            out += 2.0 * (term.coeff.real() * cos_theta - term.coeff.imag() * sin_theta);
        }
    }
    return out;
}

// The model fit proper; dft and plan are reused across blocks by the caller.
SparseModel run_model_fit(const SupportArea& area, const FseParams& params, Dft2d& dft,
                          const FreqPlan& plan, ModelTrace* trace) {
    const int n = area.size;
    const std::size_t nn = static_cast<std::size_t>(n) * n;

    Grid<double> weights = compute_weights(area, params);
    const std::vector<double>& w = weights.data;
    double w_sum = 0.0;
    for (double v : w) w_sum += v;
    if (w_sum <= 0.0) throw EmptySupportError("support area holds no usable sample");

    std::vector<double> residual(nn);
    for (std::size_t i = 0; i < nn; ++i)
        residual[i] = area.status[i] == PixelStatus::Missing ? 0.0 : area.values[i];

    if (trace) {
        trace->residual_energy.clear();
        trace->residual_energy.push_back(weighted_energy(w, residual));
    }

    std::vector<std::complex<double>> coeff(nn, {0.0, 0.0});
    std::vector<std::uint8_t> selected(nn, 0);
    std::vector<int> selection_order;
    selection_order.reserve(params.iterations);

    std::vector<double> weighted(nn);
    for (int iter = 0; iter < params.iterations; ++iter) {
        for (std::size_t i = 0; i < nn; ++i) weighted[i] = w[i] * residual[i];
        dft.forward(weighted);

        // argmax of |R_w|^2 over canonical bins; ties fall to the earlier
        // (row-major smaller) candidate because the comparison is strict
        std::size_t best = 0;
        double best_energy = -1.0;
        for (std::size_t c = 0; c < plan.candidates.size(); ++c) {
            const auto [k, l] = plan.candidates[c];
            const double re = dft.bin_re(k, l);
            const double im = dft.bin_im(k, l);
            const double energy = re * re + im * im;
            if (energy > best_energy) {
                best_energy = energy;
                best = c;
            }
        }
        if (best_energy == 0.0) break;  // residual transform exactly zero

        const auto [k, l] = plan.candidates[best];
        const bool selfc = plan.self_conjugate[best] != 0;
        double dc_re = params.ortho_compensation * dft.bin_re(k, l) / w_sum;
        double dc_im = selfc ? 0.0 : params.ortho_compensation * dft.bin_im(k, l) / w_sum;

        const double* ck = &plan.cos_tab[static_cast<std::size_t>(k) * n];
        const double* sk = &plan.sin_tab[static_cast<std::size_t>(k) * n];
        const double* cl = &plan.cos_tab[static_cast<std::size_t>(l) * n];
        const double* sl = &plan.sin_tab[static_cast<std::size_t>(l) * n];
        for (int row = 0; row < n; ++row) {
            double* rr = &residual[static_cast<std::size_t>(row) * n];
            const double ckr = ck[row];
            const double skr = sk[row];
            if (selfc) {
                for (int col = 0; col < n; ++col) {
                    const double cos_theta = ckr * cl[col] - skr * sl[col];
                    rr[col] -= dc_re * cos_theta;
                }
            } else {
                for (int col = 0; col < n; ++col) {
                    const double cos_theta = ckr * cl[col] - skr * sl[col];
                    const double sin_theta = skr * cl[col] + ckr * sl[col];
                    rr[col] -= 2.0 * (dc_re * cos_theta - dc_im * sin_theta);
                }
            }
        }

        const int idx = k * n + l;
        coeff[idx] += std::complex<double>(dc_re, dc_im);
        if (!selected[idx]) {
            selected[idx] = 1;
            selection_order.push_back(idx);
        }
        if (trace) trace->residual_energy.push_back(weighted_energy(w, residual));
    }

    SparseModel model;
    model.size = n;
    model.terms.reserve(selection_order.size());
    for (int idx : selection_order)
        model.terms.push_back({idx / n, idx % n, coeff[idx]});
    return model;
}

}  // namespace

void FseParams::validate() const {
    if (block_size < 1) throw std::invalid_argument("block_size must be >= 1");
    if (border_width < 0) throw std::invalid_argument("border_width must be >= 0");
    if (fft_size != block_size + 2 * border_width)
        throw std::invalid_argument("fft_size must equal block_size + 2 * border_width");
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (!(decay_factor > 0.0 && decay_factor < 1.0))
        throw std::invalid_argument("decay_factor must be in (0, 1)");
    if (!(ortho_compensation > 0.0 && ortho_compensation <= 1.0))
        throw std::invalid_argument("ortho_compensation must be in (0, 1]");
    if (!(reconstructed_weighting >= 0.0 && reconstructed_weighting <= 1.0))
        throw std::invalid_argument("reconstructed_weighting must be in [0, 1]");
}

Grid<double> compute_weights(const SupportArea& area, const FseParams& params) {
    check_area(area);
    if (area.size != params.fft_size)
        throw std::invalid_argument("support area size must equal fft_size");

    const int n = area.size;
    const int center = n / 2;
    Grid<double> w(n, n, 0.0);
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const PixelStatus s = area.status[static_cast<std::size_t>(row) * n + col];
            if (s == PixelStatus::Missing) continue;
            const double dr = row - center;
            const double dc = col - center;
            double v = std::pow(params.decay_factor, std::sqrt(dr * dr + dc * dc));
            if (s == PixelStatus::Reconstructed) v *= params.reconstructed_weighting;
            w.at(row, col) = v;
        }
    }
    return w;
}

SparseModel generate_model(const SupportArea& area, const FseParams& params, ModelTrace* trace) {
    params.validate();
    check_area(area);
    Dft2d dft(area.size);
    return run_model_fit(area, params, dft, *freq_plan(area.size), trace);
}

double SparseModel::evaluate_at(int row, int col) const {
    return model_value(*this, *freq_plan(size), row, col);
}

std::vector<double> SparseModel::evaluate() const {
    std::vector<double> out(static_cast<std::size_t>(size) * size);
    for (int row = 0; row < size; ++row)
        for (int col = 0; col < size; ++col)
            out[static_cast<std::size_t>(row) * size + col] = evaluate_at(row, col);
    return out;
}

std::complex<double> SparseModel::coefficient_at(int freq_row, int freq_col) const {
    const int k = ((freq_row % size) + size) % size;
    const int l = ((freq_col % size) + size) % size;
    for (const ModelTerm& term : terms) {
        if (term.freq_row == k && term.freq_col == l) return term.coeff;
        if ((size - term.freq_row) % size == k && (size - term.freq_col) % size == l)
            return std::conj(term.coeff);
    }
    return {0.0, 0.0};
}

std::size_t SparseModel::expanded_term_count() const {
    std::size_t count = 0;
    for (const ModelTerm& term : terms)
        count += is_self_conjugate(size, term.freq_row, term.freq_col) ? 1 : 2;
    return count;
}

namespace {

// Block anchors step by the block size; a dimension that is not divisible
// gets one extra block anchored flush with the far edge.
std::vector<int> block_anchors(int extent, int block_size) {
    std::vector<int> anchors;
    for (int pos = 0; pos + block_size <= extent; pos += block_size) anchors.push_back(pos);
    if (extent % block_size != 0) anchors.push_back(extent - block_size);
    return anchors;
}

}  // namespace

std::vector<BlockCoord> processing_order(const SampledFrame& sampled, const FseParams& params) {
    params.validate();
    const int width = sampled.width();
    const int height = sampled.height();
    if (width < params.block_size || height < params.block_size)
        throw DimensionError("frame is smaller than one block");
    if (!sampled.values.same_shape(sampled.filled))
        throw DimensionError("sampled frame value/filled grids differ in shape");

    // summed-area table of the filled grid for O(1) support-area counts
    std::vector<std::uint64_t> sat(static_cast<std::size_t>(width + 1) * (height + 1), 0);
    const auto sat_at = [&](int row, int col) -> std::uint64_t& {
        return sat[static_cast<std::size_t>(row) * (width + 1) + col];
    };
    for (int row = 0; row < height; ++row)
        for (int col = 0; col < width; ++col)
            sat_at(row + 1, col + 1) = sampled.filled.at(row, col) + sat_at(row, col + 1) +
                                       sat_at(row + 1, col) - sat_at(row, col);
    const auto count_rect = [&](int r0, int c0, int r1, int c1) {  // half-open, clipped
        r0 = std::max(r0, 0);
        c0 = std::max(c0, 0);
        r1 = std::min(r1, height);
        c1 = std::min(c1, width);
        if (r0 >= r1 || c0 >= c1) return std::uint64_t{0};
        return sat_at(r1, c1) - sat_at(r0, c1) - sat_at(r1, c0) + sat_at(r0, c0);
    };

    std::vector<BlockCoord> order;
    std::vector<std::uint64_t> counts;
    for (int arow : block_anchors(height, params.block_size)) {
        for (int acol : block_anchors(width, params.block_size)) {
            order.push_back({arow, acol});
            const int r0 = arow - params.border_width;
            const int c0 = acol - params.border_width;
            counts.push_back(count_rect(r0, c0, r0 + params.fft_size, c0 + params.fft_size));
        }
    }

    std::vector<std::size_t> index(order.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
    // stable: equal counts stay in row-major block order
    std::stable_sort(index.begin(), index.end(),
                     [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

    std::vector<BlockCoord> result;
    result.reserve(order.size());
    for (std::size_t i : index) result.push_back(order[i]);
    return result;
}

Frame reconstruct_frame(const SampledFrame& sampled, const FseParams& params) {
    const std::vector<BlockCoord> order = processing_order(sampled, params);  // also validates
    const int width = sampled.width();
    const int height = sampled.height();

    Frame out = sampled.values;
    Grid<std::uint8_t> status(width, height, 0);
    for (std::size_t i = 0; i < status.size(); ++i)
        status.data[i] = sampled.filled.data[i] ? static_cast<std::uint8_t>(PixelStatus::Original)
                                                : static_cast<std::uint8_t>(PixelStatus::Missing);

    Dft2d dft(params.fft_size);
    const auto plan = freq_plan(params.fft_size);
    SupportArea area;
    area.size = params.fft_size;
    area.values.resize(static_cast<std::size_t>(area.size) * area.size);
    area.status.resize(area.values.size());

    const auto block_has_missing = [&](const BlockCoord& block) {
        for (int br = 0; br < params.block_size; ++br)
            for (int bc = 0; bc < params.block_size; ++bc)
                if (status.at(block.row + br, block.col + bc) ==
                    static_cast<std::uint8_t>(PixelStatus::Missing))
                    return true;
        return false;
    };

    // Fills one block; false means its whole support area was empty.
    const auto process_block = [&](const BlockCoord& block) {
        if (!block_has_missing(block)) return true;

        for (int ar = 0; ar < area.size; ++ar) {
            const int row = block.row - params.border_width + ar;
            for (int ac = 0; ac < area.size; ++ac) {
                const int col = block.col - params.border_width + ac;
                const std::size_t i = static_cast<std::size_t>(ar) * area.size + ac;
                if (!out.in_bounds(row, col)) {
                    area.values[i] = 0.0;
                    area.status[i] = PixelStatus::Missing;
                } else {
                    area.values[i] = out.at(row, col);
                    area.status[i] = static_cast<PixelStatus>(status.at(row, col));
                }
            }
        }

        SparseModel model;
        try {
            model = run_model_fit(area, params, dft, *plan, nullptr);
        } catch (const EmptySupportError&) {
            return false;
        }

        for (int br = 0; br < params.block_size; ++br) {
            for (int bc = 0; bc < params.block_size; ++bc) {
                const int row = block.row + br;
                const int col = block.col + bc;
                if (status.at(row, col) != static_cast<std::uint8_t>(PixelStatus::Missing))
                    continue;
                const double v = model_value(model, *plan, params.border_width + br,
                                             params.border_width + bc);
                const long q = std::clamp(std::lround(v), 0L, 255L);
                out.at(row, col) = static_cast<std::uint8_t>(q);
                status.at(row, col) = static_cast<std::uint8_t>(PixelStatus::Reconstructed);
            }
        }
        return true;
    };

    std::vector<BlockCoord> deferred;
    for (const BlockCoord& block : order)
        if (!process_block(block)) deferred.push_back(block);

    // One retry now that neighbors may have been reconstructed; whatever is
    // still without any support falls back to mid gray.
    std::vector<BlockCoord> hopeless;
    for (const BlockCoord& block : deferred)
        if (!process_block(block)) hopeless.push_back(block);
    for (const BlockCoord& block : hopeless) {
        for (int br = 0; br < params.block_size; ++br) {
            for (int bc = 0; bc < params.block_size; ++bc) {
                const int row = block.row + br;
                const int col = block.col + bc;
                if (status.at(row, col) != static_cast<std::uint8_t>(PixelStatus::Missing))
                    continue;
                out.at(row, col) = 128;
                status.at(row, col) = static_cast<std::uint8_t>(PixelStatus::Reconstructed);
            }
        }
    }
    return out;
}

}  // namespace nrs
