#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mixphase/error.hpp"

namespace mixphase {

class MarkerError : public Error {
public:
    MarkerError(std::size_t line, const std::string& what)
        : Error("markers line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

enum class MarkerUnit { Samples, Seconds };

/// GCI positions, converted to sample indices at load time.
struct MarkerFile {
    MarkerUnit unit = MarkerUnit::Samples;
    std::vector<std::int64_t> samples;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// One value per line; an optional first line `unit=samples` or
/// `unit=seconds` (default samples). Blank lines and lines starting with '#'
/// are ignored. Values must be non-negative and strictly increasing.
inline MarkerFile parse_markers(const std::string& text, double fs) {
    MarkerFile mf;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    bool first_content = true;
    double prev = -1.0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (first_content && line.rfind("unit=", 0) == 0) {
            first_content = false;
            const std::string u = line.substr(5);
            if (u == "samples")
                mf.unit = MarkerUnit::Samples;
            else if (u == "seconds")
                mf.unit = MarkerUnit::Seconds;
            else
                throw MarkerError(lineno, "unknown unit '" + u + "'");
            if (mf.unit == MarkerUnit::Seconds && !(fs > 0.0))
                throw MarkerError(lineno, "seconds require a positive sampling rate");
            continue;
        }
        first_content = false;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc{} || ptr != line.data() + line.size())
            throw MarkerError(lineno, "cannot parse '" + line + "'");
        if (!std::isfinite(v)) throw MarkerError(lineno, "non-finite value");
        if (v < 0.0) throw MarkerError(lineno, "negative position");
        if (v <= prev) throw MarkerError(lineno, "positions not strictly increasing");
        prev = v;
        const double s = mf.unit == MarkerUnit::Seconds ? v * fs : v;
        if (mf.unit == MarkerUnit::Samples && s != std::floor(s)) throw MarkerError(lineno, "sample index is not an integer");
        const auto idx = static_cast<std::int64_t>(std::llround(s));
        if (!mf.samples.empty() && idx <= mf.samples.back())
            throw MarkerError(lineno, "positions collapse to the same sample");
        mf.samples.push_back(idx);
    }
    return mf;
}

inline MarkerFile read_markers(const std::string& path, double fs) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open marker file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_markers(ss.str(), fs);
}

inline void write_markers(const std::string& path, std::span<const std::int64_t> samples) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    os << "unit=samples\n";
    for (auto s : samples) os << s << '\n';
    if (!os) throw Error("failed writing '" + path + "'");
}

}  // namespace mixphase
