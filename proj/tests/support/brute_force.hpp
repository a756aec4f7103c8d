#pragma once

// Naive reference detector: recomputes every window from scratch with
// two-pass statistics and explicit rectangle loops. Shares nothing with the
// production sliding-window code path beyond the published definitions.

#include <cmath>
#include <cstdlib>
#include <vector>

#include "clutterstat/cfar.hpp"
#include "clutterstat/error.hpp"
#include "clutterstat/image.hpp"

namespace reference {

struct BruteMask {
    std::vector<std::uint8_t> mask;
    std::size_t detections = 0;
};

inline BruteMask brute_force_detect(const clutterstat::AmplitudeImage& image,
                                    const clutterstat::ClutterModel& model,
                                    const clutterstat::CfarConfig& config) {
    using namespace clutterstat;
    const double t_a = adaptive_threshold(model, config.pfa);
    const double q = config.q_override ? *config.q_override : t_a / model_mean(model);
    const long rows = static_cast<long>(image.rows());
    const long cols = static_cast<long>(image.cols());
    const long outer = config.train + config.guard;

    BruteMask out;
    out.mask.assign(image.size(), 0);
    for (long r = 0; r < rows; ++r) {
        for (long c = 0; c < cols; ++c) {
            const bool full = r - outer >= 0 && c - outer >= 0 && r + outer < rows &&
                              c + outer < cols;
            if (!full) {
                if (config.border == BorderPolicy::Strict)
                    throw BoundsError("reference: window leaves the image");
                if (config.border == BorderPolicy::Skip) continue;
            }
            std::vector<double> train_cells;
            for (long i = r - outer; i <= r + outer; ++i) {
                if (i < 0 || i >= rows) continue;
                for (long j = c - outer; j <= c + outer; ++j) {
                    if (j < 0 || j >= cols) continue;
                    if (std::labs(i - r) <= config.guard &&
                        std::labs(j - c) <= config.guard)
                        continue;
                    train_cells.push_back(
                        image(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
                }
            }
            double sum = 0.0;
            for (double v : train_cells) sum += v;
            const double mu = sum / static_cast<double>(train_cells.size());
            double ss = 0.0;
            for (double v : train_cells) ss += (v - mu) * (v - mu);
            const double sigma = std::sqrt(ss / static_cast<double>(train_cells.size()));
            const std::size_t idx =
                static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                static_cast<std::size_t>(c);
            if (image(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) >
                mu + sigma * q) {
                out.mask[idx] = 1;
                ++out.detections;
            }
        }
    }
    return out;
}

}  // namespace reference
