#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clutterstat/distributions.hpp"
#include "clutterstat/error.hpp"
#include "clutterstat/fitting.hpp"
#include "clutterstat/histogram.hpp"
#include "clutterstat/samples.hpp"

namespace clutterstat {

/// Floor for model bin masses under positive empirical mass; keeps the
/// divergence finite on bins the model assigns (numerically) nothing to.
inline constexpr double kEpsilonQ = 1e-12;

enum class KlMode {
    Normalized,     ///< p from histogram probs (sums to 1)
    RawFrequency,   ///< p from raw counts; comparability-study mode only
};

struct KlOptions {
    double floor_q = kEpsilonQ;
    KlMode mode = KlMode::Normalized;
};

/// Model probability mass per histogram bin, from CDF differences,
/// renormalized so the masses sum to 1 over the histogram's support.
inline std::vector<double> model_bin_masses(const ClutterModel& model,
                                            const EmpiricalHistogram& hist) {
    const auto& edges = hist.edges();
    std::vector<double> q(hist.bins());
    double prev = cdf(model, edges.front());
    double total = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double next = cdf(model, edges[k + 1]);
        q[k] = std::max(next - prev, 0.0);
        total += q[k];
        prev = next;
    }
    if (total > 0.0)
        for (double& v : q) v /= total;
    return q;
}

/// Discrete divergence sum_k p_k log(p_k / q_k) in nats, with q from
/// model_bin_masses. Empty bins contribute zero; q is floored where the
/// empirical mass is positive. Rounding can leave a tiny negative residue
/// when the histogram matches the model almost exactly; that is clamped,
/// while a genuinely negative value (impossible by Gibbs) is passed through
/// so the invariant checks can catch it.
inline double kl_distance(const EmpiricalHistogram& hist, const ClutterModel& model,
                          const KlOptions& opts = {}) {
    const std::vector<double> q = model_bin_masses(model, hist);
    double sum = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double p = opts.mode == KlMode::Normalized
                             ? hist.probs()[k]
                             : static_cast<double>(hist.counts()[k]);
        if (p <= 0.0) continue;
        sum += p * std::log(p / std::max(q[k], opts.floor_q));
    }
    if (sum < 0.0 && sum > -1e-9) sum = 0.0;
    return sum;
}

struct FitReport {
    ClutterModel model;
    double kl;
    int rank;
};

struct SkippedFit {
    Family family;
    std::string reason;
};

struct SelectionResult {
    std::vector<FitReport> reports;   // ascending kl, ranks 1..M
    std::vector<SkippedFit> skipped;
    EmpiricalHistogram histogram;
};

struct SelectOptions {
    std::optional<std::pair<double, double>> range;
    KlOptions kl;
    FitOptions fit;
};

/// Fits every family to the samples, scores each against the shared
/// histogram, and ranks ascending by divergence. Families whose fit throws
/// are recorded as skipped rather than aborting the ranking; ties are broken
/// by the fixed order Weibull < Rayleigh < Gamma < LogNormal.
inline SelectionResult select_model(const SampleSet& samples, std::size_t bins,
                                    const SelectOptions& opts = {}) {
    EmpiricalHistogram hist = build_histogram(samples, bins, opts.range);

    SelectionResult result{{}, {}, std::move(hist)};
    constexpr Family kFamilies[] = {Family::Weibull, Family::Rayleigh, Family::Gamma,
                                    Family::LogNormal};
    for (Family family : kFamilies) {
        try {
            ClutterModel model = fit_model(family, samples, opts.fit);
            const double kl = kl_distance(result.histogram, model, opts.kl);
            result.reports.push_back(FitReport{model, kl, 0});
        } catch (const Error& e) {
            result.skipped.push_back(SkippedFit{family, e.what()});
        }
    }
    if (result.reports.empty())
        throw DegenerateDataError("select_model: every family fit failed");

    std::sort(result.reports.begin(), result.reports.end(),
              [](const FitReport& a, const FitReport& b) {
                  if (a.kl != b.kl) return a.kl < b.kl;
                  return static_cast<int>(a.model.family()) <
                         static_cast<int>(b.model.family());
              });
    for (std::size_t i = 0; i < result.reports.size(); ++i)
        result.reports[i].rank = static_cast<int>(i) + 1;
    return result;
}

}  // namespace clutterstat
