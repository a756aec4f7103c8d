#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "clutterstat/error.hpp"

namespace clutterstat {

/// An ordered collection of non-negative amplitude observations.
/// Construction validates the invariants (non-empty, every value >= 0,
/// all finite); afterwards the data is immutable.
class SampleSet {
public:
    explicit SampleSet(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty())
            throw DomainError("SampleSet: empty sample collection");
        for (double v : values_) {
            if (!std::isfinite(v))
                throw DomainError("SampleSet: non-finite sample value");
            if (v < 0.0)
                throw DomainError("SampleSet: negative sample value");
        }
    }

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    double min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
    double max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

    double mean() const noexcept {
        double s = 0.0;
        for (double v : values_) s += v;
        return s / static_cast<double>(values_.size());
    }

    bool all_positive() const noexcept { return min() > 0.0; }

    bool all_equal() const noexcept {
        return std::adjacent_find(values_.begin(), values_.end(),
                                  [](double a, double b) { return a != b; }) == values_.end();
    }

private:
    std::vector<double> values_;
};

/// Returns a copy with every value below `eps` raised to `eps`. Used to lift
/// quantization zeros before fitting families whose support excludes zero.
inline SampleSet floor_samples(const SampleSet& samples, double eps) {
    if (!(eps > 0.0))
        throw DomainError("floor_samples: eps must be > 0");
    std::vector<double> out(samples.values());
    for (double& v : out) v = std::max(v, eps);
    return SampleSet(std::move(out));
}

}  // namespace clutterstat
