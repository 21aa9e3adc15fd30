#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixphase/error.hpp"
#include "mixphase/fft.hpp"
#include "mixphase/metrics.hpp"

namespace mixphase {

/// Liljencrants-Fant source parameters. Te = oq * T0, Tp = am * Te and the
/// return-phase time constant Ta = ra * T0.
struct LFParams {
    double f0 = 100.0;
    double oq = 0.6;
    double am = 0.7;
    double ee = 1.0;
    double ra = 0.02;

    void validate() const {
        if (!(f0 > 0.0)) throw InvalidArgument("LF: f0 must be positive");
        if (!(oq > 0.0 && oq < 1.0)) throw InvalidArgument("LF: open quotient must lie in (0, 1)");
        if (!(am > 0.5 && am < 1.0)) throw InvalidArgument("LF: asymmetry coefficient must lie in (0.5, 1)");
        if (!(ee > 0.0)) throw InvalidArgument("LF: ee must be positive");
        if (!(ra > 0.0 && ra < 1.0)) throw InvalidArgument("LF: ra must lie in (0, 1)");
    }
};

enum class Vowel { A, Schwa, I, Y };

inline constexpr std::array<Vowel, 4> kAllVowels{Vowel::A, Vowel::Schwa, Vowel::I, Vowel::Y};

inline const char* to_string(Vowel v) noexcept {
    switch (v) {
        case Vowel::A: return "a";
        case Vowel::Schwa: return "@";
        case Vowel::I: return "i";
        case Vowel::Y: return "y";
    }
    return "?";
}

inline Vowel parse_vowel(std::string_view s) {
    if (s == "a") return Vowel::A;
    if (s == "@" || s == "schwa") return Vowel::Schwa;
    if (s == "i") return Vowel::I;
    if (s == "y") return Vowel::Y;
    throw InvalidArgument("unsupported vowel '" + std::string(s) + "'");
}

struct Formant {
    double frequency;  // Hz
    double bandwidth;  // Hz
};

/// Male-voice formant table used to build the vocal-tract filters.
inline std::span<const Formant> formant_table(Vowel v) {
    static constexpr std::array<Formant, 5> a{{{700, 60}, {1220, 70}, {2600, 110}, {3300, 150}, {4200, 200}}};
    static constexpr std::array<Formant, 5> schwa{{{500, 60}, {1500, 80}, {2500, 110}, {3500, 150}, {4500, 200}}};
    static constexpr std::array<Formant, 5> i{{{280, 50}, {2250, 90}, {2900, 120}, {3500, 150}, {4500, 200}}};
    static constexpr std::array<Formant, 5> y{{{250, 50}, {1750, 80}, {2150, 100}, {3300, 150}, {4500, 200}}};
    switch (v) {
        case Vowel::A: return a;
        case Vowel::Schwa: return schwa;
        case Vowel::I: return i;
        case Vowel::Y: return y;
    }
    throw InvalidArgument("unsupported vowel");
}

struct SyntheticUtterance {
    std::vector<double> signal;
    std::vector<double> source;  // LF derivative train before filtering
    double fs = 0.0;
    std::vector<std::int64_t> gcis;
    LFParams params;
    Vowel vowel = Vowel::A;
    std::vector<double> filter_coeffs;  // 1, a1, ..., ap
    double true_fg = 0.0;
};

namespace detail {

// eps * Ta = 1 - exp(-eps * D), solved for eps > 0 as x = eps * D.
inline double solve_return_constant(double ta, double d) {
    const double rho = ta / d;
    if (!(rho > 0.0 && rho < 1.0)) throw ModelError("LF: return phase longer than the closed interval");
    auto f = [rho](double x) { return rho * x - 1.0 + std::exp(-x); };
    double lo = 1e-12;
    double hi = 1.0 / rho;
    while (f(lo) >= 0.0 && lo < hi) lo = 0.5 * (lo + hi);  // move off the trivial root
    for (int it = 0; it < 400 && (hi - lo) > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) / d;
}

struct LfShape {
    std::size_t period = 0;
    std::size_t te_index = 0;
    double te = 0, tp = 0, t0 = 0, ta = 0, eps = 0;
};

inline std::vector<double> sample_lf(const LfShape& s, double growth, double ee, double fs) {
    std::vector<double> e(s.period);
    const double wg = std::numbers::pi / s.tp;
    const double sin_te = std::sin(wg * s.te);
    const double tail = std::exp(-s.eps * (s.t0 - s.te));
    for (std::size_t n = 0; n < s.period; ++n) {
        const double t = static_cast<double>(n) / fs;
        if (n < s.te_index)
            e[n] = -ee * std::exp(growth * (t - s.te)) * std::sin(wg * t) / sin_te;
        else if (n == s.te_index)
            e[n] = -ee;
        else
            e[n] = -(ee / (s.eps * s.ta)) * (std::exp(-s.eps * (t - s.te)) - tail);
    }
    return e;
}

inline double sum_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace detail

/// One period of the LF glottal flow derivative, sampled at fs. The open phase
/// E0 e^{at} sin(pi t / Tp) ends at the GCI sample Te with value -ee; an
/// exponential return phase follows. The growth rate a is chosen so the sampled
/// pulse sums to zero (no net flow over the period).
inline std::vector<double> lf_pulse(const LFParams& p, double fs) {
    p.validate();
    if (!(fs >= 8000.0)) throw InvalidArgument("LF: fs must be at least 8000 Hz");
    detail::LfShape s;
    s.period = static_cast<std::size_t>(std::lround(fs / p.f0));
    s.te_index = static_cast<std::size_t>(std::lround(p.oq * static_cast<double>(s.period)));
    if (s.te_index < 2 || s.te_index + 1 >= s.period) throw ModelError("LF: open phase leaves no room for return phase");
    s.t0 = static_cast<double>(s.period) / fs;
    s.te = static_cast<double>(s.te_index) / fs;
    s.tp = p.am * s.te;
    const double closed = s.t0 - s.te;
    s.ta = std::min(p.ra * s.t0, 0.5 * closed);
    s.eps = detail::solve_return_constant(s.ta, closed);

    // Net flow decreases monotonically with the growth rate.
    auto net = [&](double a) { return detail::sum_of(detail::sample_lf(s, a, p.ee, fs)); };
    double lo = -1.0 / s.t0;
    double hi = 1.0 / s.t0;
    const double limit = 600.0 / s.te;
    while (net(lo) < 0.0) {
        lo *= 2.0;
        if (-lo > limit) throw ModelError("LF: cannot balance flow (open phase too negative)");
    }
    while (net(hi) > 0.0) {
        hi *= 2.0;
        if (hi > limit) throw ModelError("LF: cannot balance flow (open phase too positive)");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (net(mid) > 0.0 ? lo : hi) = mid;
    }
    std::vector<double> pulse = detail::sample_lf(s, 0.5 * (lo + hi), p.ee, fs);

    // Absorb the bisection remainder in the return phase so the sum is zero to rounding.
    const double residual = detail::sum_of(pulse);
    double ret = 0.0;
    for (std::size_t n = s.te_index + 1; n < s.period; ++n) ret += pulse[n];
    if (ret != 0.0) {
        const double scale = (ret - residual) / ret;
        for (std::size_t n = s.te_index + 1; n < s.period; ++n) pulse[n] *= scale;
    }
    return pulse;
}

/// Sample index of the GCI inside one pulse.
inline std::size_t lf_gci_offset(const LFParams& p, double fs) {
    const auto period = std::lround(fs / p.f0);
    return static_cast<std::size_t>(std::lround(p.oq * static_cast<double>(period)));
}

struct LfTrain {
    std::vector<double> signal;
    std::vector<std::int64_t> gcis;
};

inline LfTrain lf_train(const LFParams& p, double duration, double fs) {
    p.validate();
    const auto periods = static_cast<std::size_t>(std::floor(duration * p.f0 + 1e-9));
    if (periods < 4) throw InvalidArgument("lf_train: duration shorter than 4 periods");
    const std::vector<double> pulse = lf_pulse(p, fs);
    const std::size_t te = lf_gci_offset(p, fs);
    LfTrain t;
    t.signal.reserve(periods * pulse.size());
    for (std::size_t i = 0; i < periods; ++i) {
        t.gcis.push_back(static_cast<std::int64_t>(t.signal.size() + te));
        t.signal.insert(t.signal.end(), pulse.begin(), pulse.end());
    }
    return t;
}

/// Cascade of second-order resonators from the formant table, expanded to
/// A(z) = 1 + a1 z^-1 + ... Formants above 0.45 fs are dropped.
inline std::vector<double> vowel_filter(Vowel v, double fs) {
    std::vector<double> a{1.0};
    for (const Formant& f : formant_table(v)) {
        if (f.frequency >= 0.45 * fs) continue;
        const double r = std::exp(-std::numbers::pi * f.bandwidth / fs);
        const double c = -2.0 * r * std::cos(2.0 * std::numbers::pi * f.frequency / fs);
        const double d = r * r;
        std::vector<double> next(a.size() + 2, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            next[i] += a[i];
            next[i + 1] += c * a[i];
            next[i + 2] += d * a[i];
        }
        a = std::move(next);
    }
    return a;
}

/// y(n) = x(n) - sum_k a_k y(n - k), zero initial state.
inline std::vector<double> all_pole_filter(std::span<const double> x, std::span<const double> a) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double acc = x[n];
        for (std::size_t k = 1; k < a.size() && k <= n; ++k) acc -= a[k] * y[n - k];
        y[n] = acc / a[0];
    }
    return y;
}

/// Frequency of the amplitude-spectrum maximum of one LF pulse, zero-padded to
/// a grid of about 3.9 Hz per bin (4096 points at 16 kHz) and parabolically refined.
inline double true_glottal_formant(const LFParams& p, double fs) {
    const std::vector<double> pulse = lf_pulse(p, fs);
    const std::size_t grid = next_power_of_two(static_cast<std::size_t>(std::lround(4096.0 * fs / 16000.0)));
    const std::size_t nfft = std::max(grid, next_power_of_two(8 * pulse.size()));
    return glottal_formant(fft_real(pulse, nfft), fs).fg;
}

inline SyntheticUtterance synthesize(const LFParams& p, Vowel vowel, double duration, double fs) {
    if (!(duration > 0.0)) throw InvalidArgument("synthesize: duration must be positive");
    LfTrain train = lf_train(p, duration, fs);
    SyntheticUtterance u;
    u.filter_coeffs = vowel_filter(vowel, fs);
    u.signal = all_pole_filter(train.signal, u.filter_coeffs);
    u.source = std::move(train.signal);
    u.fs = fs;
    u.gcis = std::move(train.gcis);
    u.params = p;
    u.vowel = vowel;
    u.true_fg = true_glottal_formant(p, fs);
    return u;
}

/// Utterance whose source parameters change from period to period (e.g. an
/// open quotient that falls under increasing vocal effort). `per_period`
/// holds one parameter set per period; true_fg is that of the first period.
inline SyntheticUtterance synthesize_varying(std::span<const LFParams> per_period, Vowel vowel, double fs) {
    if (per_period.size() < 4) throw InvalidArgument("synthesize_varying: need at least 4 periods");
    SyntheticUtterance u;
    for (const LFParams& p : per_period) {
        const std::vector<double> pulse = lf_pulse(p, fs);
        u.gcis.push_back(static_cast<std::int64_t>(u.source.size() + lf_gci_offset(p, fs)));
        u.source.insert(u.source.end(), pulse.begin(), pulse.end());
    }
    u.filter_coeffs = vowel_filter(vowel, fs);
    u.signal = all_pole_filter(u.source, u.filter_coeffs);
    u.fs = fs;
    u.params = per_period.front();
    u.vowel = vowel;
    u.true_fg = true_glottal_formant(u.params, fs);
    return u;
}

}  // namespace mixphase
