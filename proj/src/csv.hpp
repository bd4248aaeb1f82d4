#pragma once

// Minimal CSV helpers shared by the readers. Fields are unquoted.

#include "entscale/error.hpp"

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

namespace entscale::csv {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            return fields;
        }
        start = comma + 1;
    }
}

inline double parse_double(std::string_view text, std::size_t line_no, std::string_view column) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw SchemaError(fmt::format("line {}: column '{}' is not numeric: '{}'", line_no, column, text));
    }
    return value;
}

inline std::uint64_t parse_uint(std::string_view text, std::size_t line_no, std::string_view column) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw SchemaError(
            fmt::format("line {}: column '{}' is not a nonnegative integer: '{}'", line_no, column, text));
    }
    return value;
}

/// Checks that the header line matches `expected` exactly (after trimming).
inline void expect_header(std::string_view line, std::string_view expected) {
    if (trim(line) != expected) {
        throw SchemaError(fmt::format("line 1: expected header '{}', got '{}'", expected, trim(line)));
    }
}

inline void expect_columns(const std::vector<std::string_view>& fields, std::size_t count, std::size_t line_no) {
    if (fields.size() != count) {
        throw SchemaError(fmt::format("line {}: expected {} columns, found {}", line_no, count, fields.size()));
    }
}

} // namespace entscale::csv
