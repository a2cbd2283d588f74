#pragma once

// Locale-independent number formatting.

#include <charconv>
#include <string>

namespace reefer {

/// Shortest text that parses back to the same double.
inline std::string format_exact(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

/// Six significant digits, `%g` style.
inline std::string format_sig6(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

inline std::string format_fixed(double x, int digits) {
    char buf[64];
    if (x == 0.0) x = 0.0;  // drop negative zero
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
    std::string s(buf, res.ptr);
    if (s.find_first_not_of("-0.") == std::string::npos) return digits > 0 ? "0." + std::string(digits, '0') : "0";
    return s;
}

} // namespace reefer
