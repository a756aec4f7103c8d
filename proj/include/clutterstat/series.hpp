#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "clutterstat/error.hpp"
#include "clutterstat/image.hpp"
#include "clutterstat/samples.hpp"

namespace clutterstat {

/// One pixel tracked across an image stack, in stack order. The aspect list
/// is present only when every source image carried a parseable TargetAz.
struct PixelSeries {
    std::size_t row, col;
    std::vector<double> values;
    std::optional<std::vector<double>> aspect_deg;

    SampleSet samples() const { return SampleSet(values); }
};

/// Extracts pixel (row, col) from each image in order. All images must share
/// dimensions.
inline PixelSeries stack_series(const std::vector<AmplitudeImage>& images,
                                std::size_t row, std::size_t col) {
    if (images.empty())
        throw DomainError("stack_series: empty image list");
    const std::size_t rows = images.front().rows();
    const std::size_t cols = images.front().cols();
    if (row >= rows || col >= cols)
        throw BoundsError("stack_series: pixel out of bounds");

    PixelSeries series{row, col, {}, std::nullopt};
    series.values.reserve(images.size());
    std::vector<double> aspects;
    aspects.reserve(images.size());
    bool all_aspects = true;
    for (const AmplitudeImage& image : images) {
        if (image.rows() != rows || image.cols() != cols)
            throw LengthError("stack_series: image dimensions differ across the stack");
        series.values.push_back(image(row, col));
        if (all_aspects) {
            const auto it = image.meta().find("TargetAz");
            double az = 0.0;
            std::size_t pos = 0;
            if (it == image.meta().end()) {
                all_aspects = false;
            } else {
                try {
                    az = std::stod(it->second, &pos);
                } catch (...) {
                    all_aspects = false;
                }
                if (all_aspects && pos == 0) all_aspects = false;
            }
            if (all_aspects) aspects.push_back(az);
        }
    }
    if (all_aspects) series.aspect_deg = std::move(aspects);
    return series;
}

/// CSV rows index,aspect_deg,value; the aspect column is left empty when the
/// series carries no aspect list.
inline void write_series_csv(const PixelSeries& series, std::ostream& os) {
    os << "index,aspect_deg,value\n";
    os.precision(17);
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        os << i << ',';
        if (series.aspect_deg) os << (*series.aspect_deg)[i];
        os << ',' << series.values[i] << '\n';
    }
}

}  // namespace clutterstat
