#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mixphase/error.hpp"
#include "mixphase/fft.hpp"

namespace mixphase {

struct GlottalFormantEstimate {
    double fg = 0.0;           // Hz
    double bandwidth = 0.0;    // Hz, -3 dB width
    double peak_mag_db = 0.0;  // dB
    bool bandwidth_one_sided = false;  // one -3 dB edge missing; width mirrored from the other
};

struct SdOptions {
    bool normalize = true;  // peak-normalise both spectra over the evaluated bins
    std::size_t first_bin = 0;
    std::size_t last_bin = std::numeric_limits<std::size_t>::max();  // inclusive; clamped to size - 1
};

/// Root-mean-square log-spectral ratio in dB over the selected bins.
inline double spectral_distortion(std::span<const Complex> x, std::span<const Complex> y, const SdOptions& opt = {}) {
    if (x.size() != y.size()) throw InvalidArgument("spectral_distortion: length mismatch");
    if (x.empty()) throw InvalidArgument("spectral_distortion: empty spectra");
    const std::size_t last = std::min(opt.last_bin, x.size() - 1);
    if (opt.first_bin > last) throw InvalidArgument("spectral_distortion: empty bin range");

    double px = 1.0;
    double py = 1.0;
    if (opt.normalize) {
        px = 0.0;
        py = 0.0;
        for (std::size_t k = opt.first_bin; k <= last; ++k) {
            px = std::max(px, std::abs(x[k]));
            py = std::max(py, std::abs(y[k]));
        }
    }
    double acc = 0.0;
    for (std::size_t k = opt.first_bin; k <= last; ++k) {
        const double mx = std::abs(x[k]);
        const double my = std::abs(y[k]);
        if (!(my > 0.0)) throw InvalidArgument("spectral_distortion: zero bin in reference spectrum");
        if (!(mx > 0.0)) throw InvalidArgument("spectral_distortion: zero bin in test spectrum");
        const double d = 20.0 * std::log10((mx / px) / (my / py));
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(last - opt.first_bin + 1));
}

/// Strongest interior peak of |X| in (0, max_freq] with parabolic refinement on
/// the dB magnitude, plus its -3 dB bandwidth (linear interpolation between bins).
/// max_freq defaults to fs / 4.
inline GlottalFormantEstimate glottal_formant(std::span<const Complex> spec, double fs, double max_freq = 0.0) {
    const std::size_t nfft = spec.size();
    if (nfft < 8) throw InvalidArgument("glottal_formant: spectrum too short");
    if (max_freq <= 0.0) max_freq = fs / 4.0;
    const std::size_t half = nfft / 2;
    const auto kmax = std::min(half - 1, static_cast<std::size_t>(std::floor(max_freq * static_cast<double>(nfft) / fs)));

    std::vector<double> db(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
        const double m = std::abs(spec[k]);
        db[k] = m > 0.0 ? 20.0 * std::log10(m) : -std::numeric_limits<double>::infinity();
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k <= kmax; ++k) {
        if (db[k] > db[k - 1] && db[k] >= db[k + 1] && (best == 0 || db[k] > db[best])) best = k;
    }
    if (best == 0) throw InvalidArgument("glottal_formant: no interior spectral peak");

    const double bin_hz = fs / static_cast<double>(nfft);
    GlottalFormantEstimate est;
    const double a = db[best - 1], b = db[best], c = db[best + 1];
    const double denom = a - 2.0 * b + c;
    const double delta = (std::isfinite(denom) && denom < 0.0) ? 0.5 * (a - c) / denom : 0.0;
    est.fg = (static_cast<double>(best) + delta) * bin_hz;
    est.peak_mag_db = b - 0.25 * (a - c) * delta;

    const double level = est.peak_mag_db - 3.0;
    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double t = (db[inside] - level) / (db[inside] - db[outside]);
        return (static_cast<double>(inside) + t * (static_cast<double>(outside) - static_cast<double>(inside))) * bin_hz;
    };
    std::optional<double> left, right;
    for (std::size_t k = best; k > 0; --k) {
        if (db[k - 1] < level) {
            left = crossing(k, k - 1);
            break;
        }
    }
    for (std::size_t k = best; k < half; ++k) {
        if (db[k + 1] < level) {
            right = crossing(k, k + 1);
            break;
        }
    }
    if (left && right) {
        est.bandwidth = *right - *left;
    } else if (right) {
        est.bandwidth = 2.0 * (*right - est.fg);
        est.bandwidth_one_sided = true;
    } else if (left) {
        est.bandwidth = 2.0 * (est.fg - *left);
        est.bandwidth_one_sided = true;
    } else {
        est.bandwidth = fs / 2.0;
        est.bandwidth_one_sided = true;
    }
    if (!(est.bandwidth > 0.0)) est.bandwidth = bin_hz;
    return est;
}

/// Fraction of estimates within 10% relative error of the truth. Non-finite
/// estimates count as misses.
inline double determination_rate(std::span<const double> estimates, std::span<const double> truths) {
    if (estimates.size() != truths.size()) throw InvalidArgument("determination_rate: length mismatch");
    if (estimates.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (!(truths[i] > 0.0)) throw InvalidArgument("determination_rate: truths must be positive");
        if (std::isfinite(estimates[i]) && std::abs(estimates[i] - truths[i]) / truths[i] < 0.10) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(estimates.size());
}

/// Relative RMS distance ||a - g S_l b|| / ||a|| between two circular
/// sequences, minimised over the least-squares gain g and circular shifts
/// S_l with |l| <= max_lag.
inline double aligned_relative_rms(std::span<const double> a, std::span<const double> b, std::size_t max_lag = 2) {
    if (a.size() != b.size()) throw InvalidArgument("aligned_relative_rms: length mismatch");
    const std::size_t n = a.size();
    double ea = 0.0;
    for (double v : a) ea += v * v;
    if (!(ea > 0.0)) throw InvalidArgument("aligned_relative_rms: reference is zero");
    double best = std::numeric_limits<double>::infinity();
    const auto lag = static_cast<std::int64_t>(std::min(max_lag, n - 1));
    std::vector<double> shifted(n);
    for (std::int64_t l = -lag; l <= lag; ++l) {
        const auto sn = static_cast<std::int64_t>(n);
        for (std::size_t i = 0; i < n; ++i)
            shifted[i] = b[static_cast<std::size_t>(((static_cast<std::int64_t>(i) - l) % sn + sn) % sn)];
        double ab = 0.0, bb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ab += a[i] * shifted[i];
            bb += shifted[i] * shifted[i];
        }
        const double g = bb > 0.0 ? ab / bb : 0.0;
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = a[i] - g * shifted[i];
            err += d * d;
        }
        best = std::min(best, std::sqrt(err / ea));
    }
    return best;
}

}  // namespace mixphase
