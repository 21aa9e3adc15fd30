#pragma once

#include <cmath>
#include <concepts>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mixphase/error.hpp"

namespace mixphase {

/// Types that serialise to one CSV row.
template <typename R>
concept CsvRecord = requires(const R& r) {
    { R::csv_header() } -> std::convertible_to<std::vector<std::string>>;
    { r.csv_fields() } -> std::convertible_to<std::vector<std::string>>;
};

/// Nine significant digits; non-finite values become an empty (absent) field.
inline std::string csv_number(double v) {
    if (!std::isfinite(v)) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(fields[i]);
    }
    os << '\n';
}

template <CsvRecord R>
void write_csv(std::ostream& os, std::span<const R> records) {
    write_csv_row(os, R::csv_header());
    for (const R& r : records) write_csv_row(os, r.csv_fields());
}

template <CsvRecord R>
void write_csv(const std::string& path, std::span<const R> records) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    write_csv(os, records);
    if (!os) throw Error("failed writing '" + path + "'");
}

template <CsvRecord R>
void write_csv(const std::string& path, const std::vector<R>& records) {
    write_csv(path, std::span<const R>(records));
}

inline std::string join_flags(const std::vector<std::string>& flags) {
    std::string s;
    for (const auto& f : flags) {
        if (!s.empty()) s += ';';
        s += f;
    }
    return s;
}

}  // namespace mixphase
