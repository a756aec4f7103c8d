#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "clutterstat/error.hpp"
#include "clutterstat/image.hpp"

namespace clutterstat {

enum class ByteOrder { Big, Little };

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline long parse_long_strict(const std::string& s, const char* what) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (...) {
        throw FormatError(std::string("read_mstar: non-numeric ") + what);
    }
    if (pos != s.size())
        throw FormatError(std::string("read_mstar: non-numeric ") + what);
    return v;
}

inline float assemble_float(const unsigned char* b, ByteOrder order) {
    std::uint32_t bits;
    if (order == ByteOrder::Big)
        bits = (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
               (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
    else
        bits = (std::uint32_t(b[3]) << 24) | (std::uint32_t(b[2]) << 16) |
               (std::uint32_t(b[1]) << 8) | std::uint32_t(b[0]);
    float f;
    std::memcpy(&f, &bits, sizeof f);
    return f;
}

}  // namespace detail

/// Reads a Phoenix-format MSTAR chip: ASCII key=value header between the
/// [PhoenixHeaderVer...] and [EndofPhoenixHeader] sentinels, then the
/// magnitude block of rows*cols big-endian 32-bit floats (the phase block
/// that follows is ignored). The payload offset comes from the
/// PhoenixHeaderLength and native_header_length keys when present, else
/// the byte after the end sentinel's line.
inline AmplitudeImage read_mstar(const std::filesystem::path& path,
                                 ByteOrder order = ByteOrder::Big) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("read_mstar: cannot open " + path.string());
    std::string buf((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());

    const std::size_t begin = buf.find("[PhoenixHeaderVer");
    if (begin == std::string::npos)
        throw FormatError("read_mstar: missing [PhoenixHeaderVer header sentinel");
    static constexpr const char kEnd[] = "[EndofPhoenixHeader]";
    const std::size_t end = buf.find(kEnd, begin);
    if (end == std::string::npos)
        throw FormatError("read_mstar: missing [EndofPhoenixHeader] sentinel");

    AmplitudeImage::Meta meta;
    std::size_t line_start = begin;
    while (line_start < end) {
        std::size_t line_end = buf.find('\n', line_start);
        if (line_end == std::string::npos || line_end > end) line_end = end;
        const std::string line = buf.substr(line_start, line_end - line_start);
        const std::size_t eq = line.find('=');
        if (eq != std::string::npos) {
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (!key.empty()) meta[key] = value;
        }
        line_start = line_end + 1;
    }

    auto require = [&meta](const char* key) -> const std::string& {
        auto it = meta.find(key);
        if (it == meta.end())
            throw FormatError(std::string("read_mstar: header lacks ") + key);
        return it->second;
    };
    const long rows = detail::parse_long_strict(require("NumberOfRows"), "NumberOfRows");
    const long cols =
        detail::parse_long_strict(require("NumberOfColumns"), "NumberOfColumns");
    if (rows <= 0 || cols <= 0)
        throw FormatError("read_mstar: non-positive image dimensions");

    std::size_t offset = 0;
    const auto hdr_len = meta.find("PhoenixHeaderLength");
    const auto native_len = meta.find("native_header_length");
    if (hdr_len != meta.end() && native_len != meta.end()) {
        try {
            const long a = detail::parse_long_strict(hdr_len->second, "PhoenixHeaderLength");
            const long b =
                detail::parse_long_strict(native_len->second, "native_header_length");
            if (a >= 0 && b >= 0) offset = static_cast<std::size_t>(a + b);
        } catch (const FormatError&) {
            offset = 0;   // fall back to the sentinel position below
        }
    }
    if (offset == 0 || offset > buf.size()) {
        offset = end + sizeof(kEnd) - 1;
        if (offset < buf.size() && buf[offset] == '\r') ++offset;
        if (offset < buf.size() && buf[offset] == '\n') ++offset;
    }

    const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    if (buf.size() < offset || buf.size() - offset < n * 4)
        throw LengthError("read_mstar: magnitude payload truncated");

    std::vector<double> pixels(n);
    const auto* bytes = reinterpret_cast<const unsigned char*>(buf.data()) + offset;
    for (std::size_t i = 0; i < n; ++i) {
        const float f = detail::assemble_float(bytes + 4 * i, order);
        if (!std::isfinite(f) || f < 0.0f)
            throw FormatError("read_mstar: negative or non-finite magnitude sample");
        pixels[i] = static_cast<double>(f);
    }

    meta["SourceFile"] = path.filename().string();
    return AmplitudeImage(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                          std::move(pixels), std::move(meta));
}

}  // namespace clutterstat
