#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mixphase/error.hpp"

namespace mixphase {

/// Shape of the analysis window: alpha selects a member of the raised-cosine
/// family (1 = Hann, 0.84 = Blackman), length is counted in local pitch periods.
struct WindowSpec {
    double alpha = 0.72;
    double length_periods = 2.0;

    void validate() const {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("window alpha must lie in [0, 1]");
        if (!(length_periods > 0.0)) throw InvalidArgument("window length must be positive");
    }
};

/// A GCI-centred windowed segment. The GCI sits on the centre sample.
struct Frame {
    std::vector<double> samples;
    std::int64_t gci_index = 0;  // centre position in the source signal
    double fs = 0.0;
    double local_period = 0.0;  // samples

    std::size_t size() const noexcept { return samples.size(); }
    std::int64_t start_index() const noexcept {
        return gci_index - static_cast<std::int64_t>(samples.size() / 2);
    }
};

struct SkippedGci {
    std::int64_t gci;
    std::string reason;
};

struct FrameSet {
    std::vector<Frame> frames;
    std::vector<SkippedGci> skipped;
};

/// w(n) = alpha/2 - cos(2 pi n/(N-1))/2 + (1-alpha)/2 cos(4 pi n/(N-1)).
/// Endpoints are exactly zero and the result is exactly symmetric.
inline std::vector<double> make_window(std::size_t n, double alpha) {
    if (n < 2) throw InvalidArgument("make_window: N must be at least 2");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("make_window: alpha outside [0, 1]");
    std::vector<double> w(n, 0.0);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 1; i <= (n - 1) / 2; ++i) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / denom;
        const double v = 0.5 * alpha - 0.5 * std::cos(phase) + 0.5 * (1.0 - alpha) * std::cos(2.0 * phase);
        w[i] = v;
        w[n - 1 - i] = v;
    }
    if (n % 2 == 1 && n > 2) w[n / 2] = 1.0;
    return w;
}

/// Cuts one window per interior GCI. Each window spans length_periods local
/// periods (mean spacing to the two neighbouring GCIs), rounded to an odd
/// length so the GCI is the centre sample. The first and last GCI have no
/// two-sided period estimate and are skipped, as are GCIs whose window would
/// run off either end of the signal.
inline FrameSet extract_frames(std::span<const double> signal, std::span<const std::int64_t> gcis,
                               double fs, const WindowSpec& spec) {
    spec.validate();
    if (gcis.empty()) throw InvalidArgument("extract_frames: empty GCI list");
    if (gcis.size() < 2) throw InvalidArgument("extract_frames: fewer than 2 GCIs, no period estimate");
    const auto len = static_cast<std::int64_t>(signal.size());
    for (std::size_t i = 0; i < gcis.size(); ++i) {
        if (gcis[i] < 0 || gcis[i] >= len) throw InvalidArgument("extract_frames: GCI outside signal");
        if (i > 0 && gcis[i] <= gcis[i - 1]) throw InvalidArgument("extract_frames: GCIs not strictly increasing");
    }

    FrameSet out;
    out.skipped.push_back({gcis.front(), "boundary GCI (one-sided period)"});
    for (std::size_t i = 1; i + 1 < gcis.size(); ++i) {
        const double period = 0.5 * static_cast<double>(gcis[i + 1] - gcis[i - 1]);
        auto n = static_cast<std::int64_t>(std::lround(spec.length_periods * period));
        if (n % 2 == 0) ++n;
        if (n < 9) n = 9;
        const std::int64_t half = n / 2;
        const std::int64_t start = gcis[i] - half;
        if (start < 0 || gcis[i] + half >= len) {
            out.skipped.push_back({gcis[i], "window overruns signal"});
            continue;
        }
        Frame f;
        f.gci_index = gcis[i];
        f.fs = fs;
        f.local_period = period;
        f.samples = make_window(static_cast<std::size_t>(n), spec.alpha);
        for (std::int64_t k = 0; k < n; ++k) f.samples[k] *= signal[start + k];
        out.frames.push_back(std::move(f));
    }
    out.skipped.push_back({gcis.back(), "boundary GCI (one-sided period)"});
    return out;
}

}  // namespace mixphase
