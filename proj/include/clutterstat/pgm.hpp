#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "clutterstat/error.hpp"
#include "clutterstat/image.hpp"

namespace clutterstat {

namespace detail {

/// Next ASCII token in a PGM header, skipping whitespace and '#' comments.
inline std::string pgm_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {}
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    if (tok.empty())
        throw FormatError("read_pgm: truncated header");
    return tok;
}

inline long pgm_number(std::istream& in, const char* what) {
    const std::string tok = pgm_token(in);
    std::size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(tok, &pos);
    } catch (...) {
        throw FormatError(std::string("read_pgm: non-numeric ") + what);
    }
    if (pos != tok.size() || value < 0)
        throw FormatError(std::string("read_pgm: bad ") + what);
    return value;
}

}  // namespace detail

/// Binary (P5) portable graymap reader. Values are rescaled linearly onto
/// [0, 255] when maxval differs from 255; 16-bit rasters are big-endian per
/// the format.
inline AmplitudeImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("read_pgm: cannot open " + path.string());

    if (detail::pgm_token(in) != "P5")
        throw FormatError("read_pgm: not a binary PGM (P5) file");
    const long cols = detail::pgm_number(in, "width");
    const long rows = detail::pgm_number(in, "height");
    const long maxval = detail::pgm_number(in, "maxval");
    if (cols <= 0 || rows <= 0)
        throw FormatError("read_pgm: non-positive dimensions");
    if (maxval <= 0 || maxval > 65535)
        throw FormatError("read_pgm: maxval out of range");
    // pgm_number consumed the single whitespace byte that separates the
    // header from the raster.

    const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(n * bytes_per);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw LengthError("read_pgm: truncated raster");

    std::vector<double> pixels(n);
    const double scale = 255.0 / static_cast<double>(maxval);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v = bytes_per == 1
            ? raw[i]
            : (static_cast<std::uint32_t>(raw[2 * i]) << 8) | raw[2 * i + 1];
        if (v > static_cast<std::uint32_t>(maxval))
            throw FormatError("read_pgm: sample exceeds declared maxval");
        pixels[i] = static_cast<double>(v) * scale;
    }

    AmplitudeImage::Meta meta{{"SourceFile", path.filename().string()}};
    return AmplitudeImage(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                          std::move(pixels), std::move(meta));
}

/// Binary (P5) writer, maxval 255; amplitudes are clamped to [0, 255] and
/// rounded to the nearest integer. Written atomically (temp file + rename).
inline void write_pgm(const AmplitudeImage& image, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("write_pgm: cannot open " + tmp.string());
        out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
        std::vector<unsigned char> raw(image.size());
        for (std::size_t i = 0; i < image.size(); ++i) {
            double v = std::llround(image.pixels()[i]);
            if (v < 0.0) v = 0.0;
            if (v > 255.0) v = 255.0;
            raw[i] = static_cast<unsigned char>(v);
        }
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
        if (!out)
            throw IoError("write_pgm: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace clutterstat
