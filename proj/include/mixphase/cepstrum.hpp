#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mixphase/error.hpp"
#include "mixphase/fft.hpp"
#include "mixphase/framing.hpp"

namespace mixphase {

inline constexpr std::size_t kDefaultNfft = 4096;

/// Bins whose magnitude falls below this fraction of the spectral peak are
/// treated as zeros of X(z) on the grid.
inline constexpr double kZeroBinRelTol = 1e-13;

/// Maximum tolerated |imag| / |real| of the inverse transform of the complex log.
inline constexpr double kImagResidueTol = 1e-8;

/// Radius shift applied when a frame has a zero on the DFT grid.
inline constexpr double kTaperRadius = 0.9999;

enum class Method { CC, ZZT };

inline const char* to_string(Method m) noexcept { return m == Method::CC ? "CC" : "ZZT"; }

struct CepstrumDiagnostics {
    double imag_residue = 0.0;        // relative imaginary part left after the inverse transform
    double max_phase_step = 0.0;      // largest |principal phase difference| between adjacent bins
    double min_rel_magnitude = 0.0;   // smallest |X_k| / max |X|
    double alias_energy = 0.0;        // cepstral energy at |n| >= nfft/4 over energy at n != 0
};

/// Complex cepstrum on an nfft-point quefrency grid.
///
/// `values` uses the wrap-around layout of the inverse DFT: index i holds
/// quefrency n = i for i < nfft/2 and n = i - nfft otherwise. Use at() for
/// signed access.
struct ComplexCepstrum {
    std::vector<double> values;
    std::size_t nfft = 0;
    int linear_phase_slope = 0;  // samples of linear phase removed before the log
    double log_gain = 0.0;       // x^(0)
    int gain_sign = 1;           // sign of X(omega = 0); folded into the minimum-phase side
    CepstrumDiagnostics diagnostics{};

    std::int64_t min_quefrency() const noexcept { return -static_cast<std::int64_t>(nfft / 2); }
    std::int64_t max_quefrency() const noexcept { return static_cast<std::int64_t>(nfft / 2) - 1; }

    double at(std::int64_t n) const {
        if (n < min_quefrency() || n > max_quefrency()) return 0.0;
        const auto i = n >= 0 ? n : n + static_cast<std::int64_t>(nfft);
        return values[static_cast<std::size_t>(i)];
    }

    /// Values reordered as n = -nfft/2 .. nfft/2 - 1.
    std::vector<double> centered() const {
        std::vector<double> out(nfft);
        for (std::size_t i = 0; i < nfft; ++i) out[i] = at(min_quefrency() + static_cast<std::int64_t>(i));
        return out;
    }
};

struct DecompositionDiagnostics {
    bool tapered = false;
    double imag_residue = 0.0;
    double max_phase_step = 0.0;
    double alias_energy = 0.0;
    double root_residual = 0.0;
    std::size_t degree = 0;
    std::size_t on_circle = 0;
    double min_circle_distance = std::numeric_limits<double>::infinity();

    /// Names of the diagnostics that exceed their warning thresholds.
    std::vector<std::string> flags(std::size_t nfft) const {
        std::vector<std::string> f;
        if (tapered) f.emplace_back("tapered");
        if (imag_residue > 1e-10) f.emplace_back("imag_residue");
        if (max_phase_step > 0.5 * std::numbers::pi) f.emplace_back("unwrap_step");
        if (alias_energy > 1e-6) f.emplace_back("cep_alias");
        if (root_residual > 1e-10) f.emplace_back("root_residual");
        if (on_circle > 0) f.emplace_back("on_circle");
        // a root this close to |z| = 1 leaves > e^-4 of its cepstral tail past nfft/2
        if (nfft > 0 && min_circle_distance < 8.0 / static_cast<double>(nfft)) f.emplace_back("near_circle");
        return f;
    }
};

/// Paired maximum-phase (anticausal, glottal) and minimum-phase (causal, tract)
/// components. Time sequences are nfft long in wrap-around layout, so the
/// anticausal support appears at the tail of the buffer.
struct DecompositionResult {
    std::vector<double> max_phase;
    std::vector<double> min_phase;
    ComplexVector max_phase_spectrum;
    ComplexVector min_phase_spectrum;
    Method method = Method::CC;
    std::size_t nfft = 0;
    int linear_phase_slope = 0;
    DecompositionDiagnostics diagnostics{};

    /// Maximum-phase time component for n = -before .. after.
    std::vector<double> max_phase_window(std::size_t before, std::size_t after) const {
        return window_of(max_phase, before, after);
    }
    std::vector<double> min_phase_window(std::size_t before, std::size_t after) const {
        return window_of(min_phase, before, after);
    }

private:
    std::vector<double> window_of(const std::vector<double>& buf, std::size_t before, std::size_t after) const {
        std::vector<double> out;
        out.reserve(before + after + 1);
        const auto n = static_cast<std::int64_t>(buf.size());
        for (auto k = -static_cast<std::int64_t>(before); k <= static_cast<std::int64_t>(after); ++k)
            out.push_back(buf[static_cast<std::size_t>(((k % n) + n) % n)]);
        return out;
    }
};

struct UnwrappedPhase {
    std::vector<double> phase;  // linear phase removed; phase[0] is 0 or pi
    int linear_phase_slope = 0;
    double max_step = 0.0;
};

/// Zero-padded DFT of the frame samples.
inline ComplexVector spectrum(std::span<const double> samples, std::size_t nfft) {
    if (!is_power_of_two(nfft)) throw InvalidArgument("spectrum: nfft must be a power of two");
    if (nfft < samples.size()) throw InvalidArgument("spectrum: nfft smaller than frame");
    return fft_real(samples, nfft);
}

inline ComplexVector spectrum(const Frame& frame, std::size_t nfft) { return spectrum(frame.samples, nfft); }

inline double wrap_to_pi(double x) noexcept {
    x = std::remainder(x, 2.0 * std::numbers::pi);
    return x;
}

/// Accumulates principal-value phase differences around the full DFT grid and
/// removes the integer linear-phase slope r (the winding number of X on the
/// unit circle, negated). The remaining phase is continuous and periodic.
inline UnwrappedPhase unwrap_phase(std::span<const Complex> X) {
    const std::size_t n = X.size();
    if (n < 2) throw InvalidArgument("unwrap_phase: spectrum too short");
    double peak = 0.0;
    for (const auto& v : X) peak = std::max(peak, std::abs(v));
    for (std::size_t k = 0; k < n; ++k) {
        const double m = std::abs(X[k]);
        if (!(m > kZeroBinRelTol * peak)) throw ZeroBinError(k, m);
    }

    UnwrappedPhase out;
    out.phase.resize(n);
    // X(0) is real for real frames; pin its phase to exactly 0 or pi.
    double prev_arg = X[0].real() < 0.0 ? std::numbers::pi : 0.0;
    out.phase[0] = prev_arg;
    for (std::size_t k = 1; k < n; ++k) {
        const double a = std::arg(X[k]);
        const double step = wrap_to_pi(a - prev_arg);
        out.max_step = std::max(out.max_step, std::abs(step));
        out.phase[k] = out.phase[k - 1] + step;
        prev_arg = a;
    }
    const double closing = wrap_to_pi(out.phase[0] - prev_arg);
    out.max_step = std::max(out.max_step, std::abs(closing));
    const double span = out.phase[n - 1] + closing - out.phase[0];
    const long winding = std::lround(span / (2.0 * std::numbers::pi));
    out.linear_phase_slope = static_cast<int>(-winding);
    const double dw = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
        out.phase[k] += static_cast<double>(out.linear_phase_slope) * dw * static_cast<double>(k);
    return out;
}

/// Complex cepstrum x^ = IDFT( log|X| + j arg X ), with arg X unwrapped and its
/// linear-phase term removed. A negative X(0) contributes a constant pi that is
/// recorded in gain_sign instead of the cepstrum.
inline ComplexCepstrum complex_cepstrum(std::span<const double> samples, std::size_t nfft = kDefaultNfft) {
    if (!is_power_of_two(nfft)) throw InvalidArgument("complex_cepstrum: nfft must be a power of two");
    if (nfft < 4 * samples.size()) throw InvalidArgument("complex_cepstrum: nfft must be at least 4x the frame length");
    if (std::all_of(samples.begin(), samples.end(), [](double v) { return v == 0.0; }))
        throw InvalidArgument("complex_cepstrum: all-zero frame");

    const ComplexVector X = spectrum(samples, nfft);
    UnwrappedPhase uw = unwrap_phase(X);

    ComplexCepstrum cc;
    cc.nfft = nfft;
    cc.linear_phase_slope = uw.linear_phase_slope;
    if (uw.phase[0] != 0.0) {
        cc.gain_sign = -1;
        for (auto& p : uw.phase) p -= std::numbers::pi;
    }

    double peak = 0.0;
    double floor = std::numeric_limits<double>::infinity();
    ComplexVector logX(nfft);
    for (std::size_t k = 0; k < nfft; ++k) {
        const double m = std::abs(X[k]);
        peak = std::max(peak, m);
        floor = std::min(floor, m);
        logX[k] = Complex(std::log(m), uw.phase[k]);
    }
    const ComplexVector xhat = ifft(logX);

    double max_re = 0.0;
    double max_im = 0.0;
    cc.values.resize(nfft);
    for (std::size_t i = 0; i < nfft; ++i) {
        cc.values[i] = xhat[i].real();
        max_re = std::max(max_re, std::abs(xhat[i].real()));
        max_im = std::max(max_im, std::abs(xhat[i].imag()));
    }
    cc.log_gain = cc.values[0];

    double e_total = 0.0;
    double e_outer = 0.0;
    for (std::size_t i = 1; i < nfft; ++i) {
        const double e = cc.values[i] * cc.values[i];
        e_total += e;
        if (i >= nfft / 4 && i <= nfft - nfft / 4) e_outer += e;
    }
    cc.diagnostics.imag_residue = max_re > 0.0 ? max_im / max_re : max_im;
    cc.diagnostics.max_phase_step = uw.max_step;
    cc.diagnostics.min_rel_magnitude = floor / peak;
    cc.diagnostics.alias_energy = e_total > 0.0 ? e_outer / e_total : 0.0;
    if (cc.diagnostics.imag_residue > kImagResidueTol)
        throw UnwrapError("complex_cepstrum: imaginary residue " + std::to_string(cc.diagnostics.imag_residue) +
                              " exceeds tolerance (phase unwrapping failed)",
                          cc.diagnostics.imag_residue);
    return cc;
}

inline ComplexCepstrum complex_cepstrum(const Frame& frame, std::size_t nfft = kDefaultNfft) {
    return complex_cepstrum(frame.samples, nfft);
}

struct CepstrumSplit {
    ComplexCepstrum anticausal;  // n < 0
    ComplexCepstrum causal;      // n >= 0, carries the gain
};

/// Partitions the cepstrum at quefrency zero. The n = 0 term and the gain sign
/// go to the causal (minimum-phase) side. The bin at nfft/2 stands for both
/// +nfft/2 and -nfft/2 and is shared equally, so that time reversal swaps the
/// two parts exactly.
inline CepstrumSplit split_cepstrum(const ComplexCepstrum& cc) {
    CepstrumSplit s{cc, cc};
    const std::size_t half = cc.nfft / 2;
    for (std::size_t i = 0; i < cc.nfft; ++i) {
        if (i < half)
            s.anticausal.values[i] = 0.0;
        else if (i > half)
            s.causal.values[i] = 0.0;
    }
    if (half > 0) {
        s.anticausal.values[half] = 0.5 * cc.values[half];
        s.causal.values[half] = 0.5 * cc.values[half];
    }
    s.anticausal.log_gain = 0.0;
    s.anticausal.gain_sign = 1;
    return s;
}

struct Component {
    std::vector<double> time;  // nfft samples, wrap-around layout
    ComplexVector spectrum;
};

/// Spectrum = gain_sign * exp(DFT(part)); time = IDFT(spectrum).
inline Component realize_component(const ComplexCepstrum& part) {
    const ComplexVector C = fft_real(part.values, part.nfft);
    Component out;
    out.spectrum.resize(part.nfft);
    for (std::size_t k = 0; k < part.nfft; ++k) out.spectrum[k] = static_cast<double>(part.gain_sign) * std::exp(C[k]);
    const ComplexVector t = ifft(out.spectrum);
    out.time.resize(part.nfft);
    for (std::size_t i = 0; i < part.nfft; ++i) out.time[i] = t[i].real();
    return out;
}

inline std::vector<double> exponential_taper(std::span<const double> x, double radius = kTaperRadius) {
    std::vector<double> y(x.begin(), x.end());
    double g = 1.0;
    for (auto& v : y) {
        v *= g;
        g *= radius;
    }
    return y;
}

/// Mixed-phase decomposition through the complex cepstrum. If the frame has a
/// zero on the DFT grid it is retried once after an exponential taper, and the
/// result is marked `tapered`.
inline DecompositionResult cc_decompose(std::span<const double> samples, std::size_t nfft = kDefaultNfft) {
    DecompositionResult r;
    ComplexCepstrum cc;
    try {
        cc = complex_cepstrum(samples, nfft);
    } catch (const ZeroBinError&) {
        const auto tapered = exponential_taper(samples);
        cc = complex_cepstrum(tapered, nfft);
        r.diagnostics.tapered = true;
    }
    const CepstrumSplit parts = split_cepstrum(cc);
    Component mx = realize_component(parts.anticausal);
    Component mn = realize_component(parts.causal);
    r.max_phase = std::move(mx.time);
    r.max_phase_spectrum = std::move(mx.spectrum);
    r.min_phase = std::move(mn.time);
    r.min_phase_spectrum = std::move(mn.spectrum);
    r.method = Method::CC;
    r.nfft = nfft;
    r.linear_phase_slope = cc.linear_phase_slope;
    r.diagnostics.imag_residue = cc.diagnostics.imag_residue;
    r.diagnostics.max_phase_step = cc.diagnostics.max_phase_step;
    r.diagnostics.alias_energy = cc.diagnostics.alias_energy;
    r.diagnostics.degree = samples.size() - 1;
    return r;
}

inline DecompositionResult cc_decompose(const Frame& frame, std::size_t nfft = kDefaultNfft) {
    return cc_decompose(frame.samples, nfft);
}

namespace detail {

// A_k B_k e^{-j r w_k}, the frame spectrum implied by the two components.
inline ComplexVector recombined_spectrum(const DecompositionResult& r) {
    ComplexVector y(r.nfft);
    for (std::size_t k = 0; k < r.nfft; ++k) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(r.nfft);
        y[k] = r.max_phase_spectrum[k] * r.min_phase_spectrum[k] *
               std::polar(1.0, -static_cast<double>(r.linear_phase_slope) * w);
    }
    return y;
}

inline std::vector<double> analysed_samples(const DecompositionResult& r, std::span<const double> frame) {
    if (r.diagnostics.tapered) return exponential_taper(frame);
    return {frame.begin(), frame.end()};
}

}  // namespace detail

/// max_k |A_k B_k e^{-j r w_k} - X_k| / max_k |X_k| for the frame the
/// decomposition was computed from (after the taper, if one was applied).
inline double factorization_error(const DecompositionResult& r, std::span<const double> frame) {
    const std::vector<double> x = detail::analysed_samples(r, frame);
    const ComplexVector X = fft_real(x, r.nfft);
    const ComplexVector Y = detail::recombined_spectrum(r);
    double peak = 0.0, worst = 0.0;
    for (std::size_t k = 0; k < r.nfft; ++k) {
        peak = std::max(peak, std::abs(X[k]));
        worst = std::max(worst, std::abs(Y[k] - X[k]));
    }
    return worst / peak;
}

/// Relative RMS between the frame and the circular convolution of the two
/// components, delayed by the removed linear phase.
inline double reconstruction_error(const DecompositionResult& r, std::span<const double> frame) {
    const std::vector<double> x = detail::analysed_samples(r, frame);
    const ComplexVector y = ifft(detail::recombined_spectrum(r));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < r.nfft; ++i) {
        const double ref = i < x.size() ? x[i] : 0.0;
        num += (y[i].real() - ref) * (y[i].real() - ref);
        den += ref * ref;
    }
    return std::sqrt(num / den);
}

}  // namespace mixphase
