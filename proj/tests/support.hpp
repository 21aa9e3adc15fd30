#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <vector>

#include "mixphase/mixphase.hpp"

namespace testing_support {

using mixphase::Complex;

inline std::vector<double> random_signal(std::mt19937& rng, std::size_t n) {
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return x;
}

// Middle GCI-centred frame of a synthetic vowel.
inline mixphase::Frame synthetic_frame(double f0, double oq, double am, mixphase::Vowel v, double alpha = 0.72,
                                       double periods = 2.0) {
    const auto u = mixphase::synthesize(mixphase::LFParams{f0, oq, am}, v, 12.5 / f0, 16000.0);
    const auto fs = mixphase::extract_frames(u.signal, u.gcis, u.fs, mixphase::WindowSpec{alpha, periods});
    return fs.frames[fs.frames.size() / 2];
}

// Impulse response of an all-pole filter with the given pole pairs, truncated.
inline std::vector<double> all_pole_response(const std::vector<Complex>& pole_pairs, std::size_t n) {
    std::vector<double> a{1.0};
    for (const auto& p : pole_pairs) {
        const double b1 = -2.0 * p.real(), b2 = std::norm(p);
        std::vector<double> next(a.size() + 2, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            next[i] += a[i];
            next[i + 1] += b1 * a[i];
            next[i + 2] += b2 * a[i];
        }
        a = next;
    }
    std::vector<double> impulse(n, 0.0);
    impulse[0] = 1.0;
    return mixphase::all_pole_filter(impulse, a);
}

inline double rel_rms(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / den);
}

}  // namespace testing_support
