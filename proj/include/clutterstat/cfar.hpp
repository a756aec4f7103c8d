#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "clutterstat/distributions.hpp"
#include "clutterstat/error.hpp"
#include "clutterstat/image.hpp"

namespace clutterstat {

enum class StatsMode { Windowed, Global };

/// What to do when the sliding window would leave the image.
enum class BorderPolicy {
    Shrink,   ///< truncate the window, recompute ring membership (default)
    Strict,   ///< raise a bounds error
    Skip,     ///< mask false, cell flagged in skipped_map
};

inline const char* stats_mode_name(StatsMode m) {
    return m == StatsMode::Windowed ? "windowed" : "global";
}

inline const char* border_policy_name(BorderPolicy p) {
    switch (p) {
        case BorderPolicy::Shrink: return "shrink";
        case BorderPolicy::Strict: return "strict";
        case BorderPolicy::Skip:   return "skip";
    }
    return "?";
}

struct CfarConfig {
    int train = 15;                      ///< training cells per wing
    int guard = 5;                       ///< guard cells per wing
    double pfa = 1e-6;
    StatsMode stats_mode = StatsMode::Windowed;
    std::optional<double> q_override;    ///< bypass design_q when set
    BorderPolicy border = BorderPolicy::Shrink;
    std::optional<Rect> global_region;   ///< Global mode stats region; default whole image
    /// Test hook: score pixels directly against t_a instead of the local
    /// mu_c + sigma_c * Q rule. Validates the analytic false-alarm rate.
    bool fixed_threshold = false;
};

struct LocalStats {
    double mu_c;
    double sigma_c;
};

struct DetectionResult {
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint8_t> mask;          ///< row-major, 1 where H_1 declared
    std::vector<double> threshold_map;       ///< mu_c + sigma_c * Q per cell (NaN if skipped)
    double t_a = 0.0;
    double q = 0.0;
    std::optional<LocalStats> global_stats;  ///< set in Global mode
    StatsMode stats_mode = StatsMode::Windowed;
    BorderPolicy border_policy = BorderPolicy::Shrink;
    std::size_t detections = 0;
    std::size_t skipped = 0;
    std::vector<std::uint8_t> skipped_map;   ///< sized only under BorderPolicy::Skip

    bool at(std::size_t r, std::size_t c) const { return mask[r * cols + c] != 0; }
    double threshold_at(std::size_t r, std::size_t c) const {
        return threshold_map[r * cols + c];
    }
};

namespace detail {

inline void check_pfa(double pfa) {
    if (!(pfa > 0.0 && pfa < 1.0))
        throw DomainError("pfa must lie strictly between 0 and 1");
}

/// Streaming mean/variance (Welford). Exact zero variance on constant input.
struct Accumulator {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    LocalStats stats() const {
        return LocalStats{mean, std::sqrt(std::max(m2 / static_cast<double>(n), 0.0))};
    }
};

/// Visits the training ring of (row, col): cells at Chebyshev distance in
/// (guard, guard+train], clipped to the image bounds.
template <class F>
void visit_ring(const AmplitudeImage& image, std::size_t row, std::size_t col,
                int train, int guard, F&& visit) {
    const auto r = static_cast<std::ptrdiff_t>(row);
    const auto c = static_cast<std::ptrdiff_t>(col);
    const std::ptrdiff_t outer = guard + train;
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(image.rows());
    const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(image.cols());
    const std::ptrdiff_t i0 = std::max<std::ptrdiff_t>(r - outer, 0);
    const std::ptrdiff_t i1 = std::min<std::ptrdiff_t>(r + outer, rows - 1);
    const std::ptrdiff_t j0 = std::max<std::ptrdiff_t>(c - outer, 0);
    const std::ptrdiff_t j1 = std::min<std::ptrdiff_t>(c + outer, cols - 1);
    for (std::ptrdiff_t i = i0; i <= i1; ++i) {
        const std::ptrdiff_t di = i > r ? i - r : r - i;
        for (std::ptrdiff_t j = j0; j <= j1; ++j) {
            const std::ptrdiff_t dj = j > c ? j - c : c - j;
            if (std::max(di, dj) <= guard) continue;   // guard block incl. the CUT
            visit(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
}

inline bool window_fits(const AmplitudeImage& image, std::size_t row, std::size_t col,
                        int train, int guard) {
    const std::size_t outer = static_cast<std::size_t>(train + guard);
    return row >= outer && col >= outer && row + outer < image.rows() &&
           col + outer < image.cols();
}

inline void check_window_config(const CfarConfig& config) {
    if (config.train < 1)
        throw DomainError("CfarConfig: train cells per wing must be >= 1");
    if (config.guard < 0)
        throw DomainError("CfarConfig: guard cells per wing must be >= 0");
    check_pfa(config.pfa);
    if (config.q_override && !(*config.q_override > 0.0))
        throw DomainError("CfarConfig: q override must be > 0");
}

}  // namespace detail

/// Adaptive threshold for Weibull clutter: beta * (ln(1/pfa))^(1/alpha).
inline double threshold_weibull(const WeibullParams& params, double pfa) {
    detail::check_pfa(pfa);
    return params.beta * std::pow(-std::log(pfa), 1.0 / params.alpha);
}

/// Adaptive threshold for Rayleigh clutter: sqrt(-2 sigma^2 ln(pfa)).
inline double threshold_rayleigh(const RayleighParams& params, double pfa) {
    detail::check_pfa(pfa);
    return params.sigma * std::sqrt(-2.0 * std::log(pfa));
}

/// Threshold for the model's family; only Weibull and Rayleigh are supported.
inline double adaptive_threshold(const ClutterModel& model, double pfa) {
    switch (model.family()) {
        case Family::Weibull:
            return threshold_weibull(model.as<WeibullParams>(), pfa);
        case Family::Rayleigh:
            return threshold_rayleigh(model.as<RayleighParams>(), pfa);
        default:
            throw UnsupportedModelError(
                "adaptive_threshold: only Weibull and Rayleigh have analytic thresholds");
    }
}

/// Detector design parameter Q = t_a / model mean.
inline double design_q(double t_a, const ClutterModel& model) {
    const double mean = model_mean(model);
    if (!(mean > 0.0))
        throw DomainError("design_q: model mean must be positive");
    return t_a / mean;
}

/// Mean and population standard deviation over the training ring around
/// (row, col). Under the Strict policy the full window must fit; otherwise
/// the ring is clipped at the borders.
inline LocalStats local_stats(const AmplitudeImage& image, std::size_t row,
                              std::size_t col, const CfarConfig& config) {
    detail::check_window_config(config);
    if (row >= image.rows() || col >= image.cols())
        throw BoundsError("local_stats: cell out of bounds");
    if (config.border == BorderPolicy::Strict &&
        !detail::window_fits(image, row, col, config.train, config.guard))
        throw BoundsError("local_stats: window exceeds image bounds (strict border)");

    detail::Accumulator acc;
    detail::visit_ring(image, row, col, config.train, config.guard,
                       [&](std::size_t i, std::size_t j) { acc.add(image(i, j)); });
    if (acc.n == 0)
        throw DegenerateDataError("local_stats: no training cells inside the image");
    return acc.stats();
}

/// Runs the detector: H_1 is declared where the cell strictly exceeds
/// mu_c + sigma_c * Q, with stats from the sliding window (Windowed) or a
/// single clutter region (Global). Gamma and Log-normal models have no
/// analytic threshold and are rejected.
inline DetectionResult detect(const AmplitudeImage& image, const ClutterModel& model,
                              const CfarConfig& config) {
    detail::check_window_config(config);

    DetectionResult result;
    result.rows = image.rows();
    result.cols = image.cols();
    result.stats_mode = config.stats_mode;
    result.border_policy = config.border;
    result.t_a = adaptive_threshold(model, config.pfa);
    result.q = config.q_override ? *config.q_override : design_q(result.t_a, model);
    const std::size_t n = image.size();
    result.mask.assign(n, 0);
    result.threshold_map.assign(n, 0.0);

    if (config.fixed_threshold) {
        for (std::size_t i = 0; i < n; ++i) {
            result.threshold_map[i] = result.t_a;
            result.mask[i] = image.pixels()[i] > result.t_a ? 1 : 0;
            result.detections += result.mask[i];
        }
        return result;
    }

    if (config.stats_mode == StatsMode::Global) {
        const Rect region = config.global_region.value_or(image.full_rect());
        if (!image.contains(region))
            throw BoundsError("detect: global clutter region exceeds image bounds");
        detail::Accumulator acc;
        for (std::size_t r = region.r0; r <= region.r1; ++r)
            for (std::size_t c = region.c0; c <= region.c1; ++c)
                acc.add(image(r, c));
        const LocalStats stats = acc.stats();
        result.global_stats = stats;
        const double threshold = stats.mu_c + stats.sigma_c * result.q;
        for (std::size_t i = 0; i < n; ++i) {
            result.threshold_map[i] = threshold;
            result.mask[i] = image.pixels()[i] > threshold ? 1 : 0;
            result.detections += result.mask[i];
        }
        return result;
    }

    if (config.border == BorderPolicy::Skip) result.skipped_map.assign(n, 0);
    for (std::size_t r = 0; r < result.rows; ++r) {
        for (std::size_t c = 0; c < result.cols; ++c) {
            const std::size_t idx = r * result.cols + c;
            const bool fits = detail::window_fits(image, r, c, config.train, config.guard);
            if (!fits) {
                if (config.border == BorderPolicy::Strict)
                    throw BoundsError("detect: window exceeds image bounds (strict border)");
                if (config.border == BorderPolicy::Skip) {
                    result.skipped_map[idx] = 1;
                    ++result.skipped;
                    result.threshold_map[idx] =
                        std::numeric_limits<double>::quiet_NaN();
                    continue;
                }
            }
            const LocalStats stats = local_stats(image, r, c, config);
            const double threshold = stats.mu_c + stats.sigma_c * result.q;
            result.threshold_map[idx] = threshold;
            result.mask[idx] = image(r, c) > threshold ? 1 : 0;
            result.detections += result.mask[idx];
        }
    }
    return result;
}

/// Detection mask as a 0/255 image, ready for PGM export.
inline AmplitudeImage mask_to_image(const DetectionResult& result) {
    std::vector<double> pixels(result.mask.size());
    for (std::size_t i = 0; i < pixels.size(); ++i)
        pixels[i] = result.mask[i] ? 255.0 : 0.0;
    return AmplitudeImage(result.rows, result.cols, std::move(pixels));
}

}  // namespace clutterstat
