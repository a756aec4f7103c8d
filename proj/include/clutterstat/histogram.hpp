#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "clutterstat/error.hpp"
#include "clutterstat/samples.hpp"

namespace clutterstat {

/// Equal-width binned empirical distribution. `edges` has K+1 strictly
/// increasing entries, `counts` and `probs` have K; probs are counts
/// normalized by the in-range total. Samples falling outside an explicit
/// range are dropped and tallied in `outside_range`.
class EmpiricalHistogram {
public:
    EmpiricalHistogram(std::vector<double> edges, std::vector<std::uint64_t> counts,
                       std::uint64_t outside_range = 0)
        : edges_(std::move(edges)), counts_(std::move(counts)), outside_(outside_range) {
        if (counts_.empty() || edges_.size() != counts_.size() + 1)
            throw DomainError("EmpiricalHistogram: need K counts and K+1 edges");
        for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
            if (!(edges_[i] < edges_[i + 1]))
                throw DomainError("EmpiricalHistogram: edges must be strictly increasing");
        std::uint64_t total = 0;
        for (std::uint64_t c : counts_) total += c;
        if (total == 0)
            throw DegenerateDataError("EmpiricalHistogram: no in-range samples");
        total_ = total;
        probs_.resize(counts_.size());
        for (std::size_t k = 0; k < counts_.size(); ++k)
            probs_[k] = static_cast<double>(counts_[k]) / static_cast<double>(total);
    }

    std::size_t bins() const { return counts_.size(); }
    const std::vector<double>& edges() const { return edges_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    const std::vector<double>& probs() const { return probs_; }
    std::uint64_t total() const { return total_; }
    std::uint64_t outside_range() const { return outside_; }
    double lo() const { return edges_.front(); }
    double hi() const { return edges_.back(); }

private:
    std::vector<double> edges_;
    std::vector<std::uint64_t> counts_;
    std::vector<double> probs_;
    std::uint64_t total_ = 0;
    std::uint64_t outside_ = 0;
};

/// Bins the samples into `bins` equal-width cells over `range`, defaulting to
/// [0, max sample]. The right edge belongs to the last bin, so with the
/// default range every sample lands in exactly one bin. All-equal samples
/// need an explicit range: the default one carries no resolving width.
inline EmpiricalHistogram build_histogram(
        const SampleSet& samples, std::size_t bins,
        std::optional<std::pair<double, double>> range = std::nullopt) {
    if (bins < 2)
        throw DomainError("build_histogram: need at least 2 bins");

    double lo, hi;
    if (range) {
        lo = range->first;
        hi = range->second;
        if (!(lo < hi))
            throw DomainError("build_histogram: range must satisfy lo < hi");
    } else {
        if (samples.all_equal())
            throw DegenerateDataError(
                "build_histogram: all samples equal; supply an explicit range");
        lo = 0.0;
        hi = samples.max();
        if (!(lo < hi))
            throw DegenerateDataError("build_histogram: default range [0, max] is empty");
    }

    std::vector<double> edges(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    edges[bins] = hi;

    std::vector<std::uint64_t> counts(bins, 0);
    std::uint64_t outside = 0;
    const double inv_width = static_cast<double>(bins) / (hi - lo);
    for (double x : samples.values()) {
        if (x < lo || x > hi) {
            ++outside;
            continue;
        }
        auto k = static_cast<std::size_t>((x - lo) * inv_width);
        if (k >= bins) k = bins - 1;   // x == hi, or rounding at the top edge
        ++counts[k];
    }
    return EmpiricalHistogram(std::move(edges), std::move(counts), outside);
}

/// Line-oriented export: header followed by one row per bin.
inline void write_histogram_csv(const EmpiricalHistogram& hist, std::ostream& os) {
    os << "bin_lo,bin_hi,count,prob\n";
    os.precision(17);
    for (std::size_t k = 0; k < hist.bins(); ++k) {
        os << hist.edges()[k] << ',' << hist.edges()[k + 1] << ','
           << hist.counts()[k] << ',' << hist.probs()[k] << '\n';
    }
}

}  // namespace clutterstat
