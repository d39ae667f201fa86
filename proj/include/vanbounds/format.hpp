#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <system_error>

#include "vanbounds/errors.hpp"

namespace vanbounds {

/// Shortest round-trip decimal form of a double, locale independent; NaN and
/// infinities come out as "nan", "inf", "-inf".
inline std::string format_shortest(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) throw numerical_error("number formatting failed");
    return std::string(buf, res.ptr);
}

/// Fixed-precision decimal form, locale independent (for plot coordinates).
inline std::string format_fixed(double value, int precision) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
    if (res.ec != std::errc()) throw numerical_error("number formatting failed");
    return std::string(buf, res.ptr);
}

inline std::string format_integer(std::int64_t value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) throw numerical_error("number formatting failed");
    return std::string(buf, res.ptr);
}

inline std::string format_unsigned(std::uint64_t value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) throw numerical_error("number formatting failed");
    return std::string(buf, res.ptr);
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw invalid_input_error("cannot open for writing: " + path);
    file << content;
    if (!file) throw invalid_input_error("write failed: " + path);
}

}  // namespace vanbounds
