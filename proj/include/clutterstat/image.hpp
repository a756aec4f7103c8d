#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "clutterstat/error.hpp"
#include "clutterstat/samples.hpp"

namespace clutterstat {

/// Rectangle with inclusive corners, (row0, col0) through (row1, col1).
struct Rect {
    std::size_t r0, c0, r1, c1;

    Rect(std::size_t row0, std::size_t col0, std::size_t row1, std::size_t col1)
        : r0(row0), c0(col0), r1(row1), c1(col1) {
        if (r1 < r0 || c1 < c0)
            throw DomainError("Rect: corners must be ordered (r0<=r1, c0<=c1)");
    }

    std::size_t rows() const { return r1 - r0 + 1; }
    std::size_t cols() const { return c1 - c0 + 1; }
    std::size_t area() const { return rows() * cols(); }
};

/// Row-major grid of non-negative amplitudes with free-form string metadata.
class AmplitudeImage {
public:
    using Meta = std::map<std::string, std::string>;

    AmplitudeImage(std::size_t rows, std::size_t cols, std::vector<double> pixels,
                   Meta meta = {})
        : rows_(rows), cols_(cols), pixels_(std::move(pixels)), meta_(std::move(meta)) {
        if (rows_ == 0 || cols_ == 0)
            throw DomainError("AmplitudeImage: dimensions must be positive");
        if (pixels_.size() != rows_ * cols_)
            throw LengthError("AmplitudeImage: pixel count does not match dimensions");
        for (double v : pixels_) {
            if (!std::isfinite(v))
                throw DomainError("AmplitudeImage: pixels must be finite");
            if (v < 0.0)
                throw DomainError("AmplitudeImage: pixels must be non-negative");
        }
    }

    /// Zero-filled image.
    AmplitudeImage(std::size_t rows, std::size_t cols)
        : AmplitudeImage(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return pixels_.size(); }

    double operator()(std::size_t r, std::size_t c) const {
        return pixels_[r * cols_ + c];
    }
    double at(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_)
            throw BoundsError("AmplitudeImage::at: pixel out of bounds");
        return pixels_[r * cols_ + c];
    }
    void set(std::size_t r, std::size_t c, double v) {
        if (r >= rows_ || c >= cols_)
            throw BoundsError("AmplitudeImage::set: pixel out of bounds");
        if (!std::isfinite(v) || v < 0.0)
            throw DomainError("AmplitudeImage::set: value must be finite and >= 0");
        pixels_[r * cols_ + c] = v;
    }

    const std::vector<double>& pixels() const { return pixels_; }
    const Meta& meta() const { return meta_; }
    Meta& meta() { return meta_; }

    bool contains(const Rect& rect) const {
        return rect.r1 < rows_ && rect.c1 < cols_;
    }
    Rect full_rect() const { return Rect(0, 0, rows_ - 1, cols_ - 1); }

    double max_pixel() const {
        double m = 0.0;
        for (double v : pixels_)
            if (v > m) m = v;
        return m;
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> pixels_;
    Meta meta_;
};

/// Flattens a rectangular region, row-major, into a SampleSet.
inline SampleSet region_samples(const AmplitudeImage& image, const Rect& rect) {
    if (!image.contains(rect))
        throw BoundsError("region_samples: rectangle exceeds image bounds");
    std::vector<double> values;
    values.reserve(rect.area());
    for (std::size_t r = rect.r0; r <= rect.r1; ++r)
        for (std::size_t c = rect.c0; c <= rect.c1; ++c)
            values.push_back(image(r, c));
    return SampleSet(std::move(values));
}

/// Linear map of [0, max pixel] onto [0, 255]; no rounding, so repeated
/// application is a fixed point once the maximum is 255. An all-zero image
/// passes through unchanged.
inline AmplitudeImage normalize_to_gray(const AmplitudeImage& image) {
    const double peak = image.max_pixel();
    std::vector<double> scaled(image.pixels());
    if (peak > 0.0) {
        const double s = 255.0 / peak;
        for (double& v : scaled) v *= s;
    }
    return AmplitudeImage(image.rows(), image.cols(), std::move(scaled), image.meta());
}

}  // namespace clutterstat
