#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mixphase/cepstrum.hpp"
#include "support.hpp"

using namespace mixphase;
using testing_support::rel_rms;

TEST(Spectrum, ImpulseIsFlat) {
    const std::vector<double> x{1.0};
    const auto X = spectrum(x, 8);
    ASSERT_EQ(X.size(), 8u);
    for (const auto& v : X) {
        EXPECT_NEAR(v.real(), 1.0, 1e-15);
        EXPECT_NEAR(v.imag(), 0.0, 1e-15);
    }
}

TEST(Spectrum, FourPointExample) {
    const std::vector<double> x{1.0, -0.5};
    const auto X = spectrum(x, 4);
    const Complex expect[] = {{0.5, 0.0}, {1.0, 0.5}, {1.5, 0.0}, {1.0, -0.5}};
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(X[k].real(), expect[k].real(), 1e-15);
        EXPECT_NEAR(X[k].imag(), expect[k].imag(), 1e-15);
    }
}

TEST(Spectrum, Errors) {
    const std::vector<double> x(10, 1.0);
    EXPECT_THROW(spectrum(x, 8), InvalidArgument);
    EXPECT_THROW(spectrum(x, 12), InvalidArgument);
    const std::vector<double> z(4, 0.0);
    for (const auto& v : spectrum(z, 8)) EXPECT_EQ(std::abs(v), 0.0);
}

TEST(UnwrapPhase, MinimumPhaseHasNoSlope) {
    const std::vector<double> x{1.0, -0.5};
    const auto X = spectrum(x, 4096);
    const auto u = unwrap_phase(X);
    EXPECT_EQ(u.linear_phase_slope, 0);
    for (std::size_t k = 0; k < X.size(); ++k) {
        const double w = 2.0 * std::numbers::pi * double(k) / 4096.0;
        EXPECT_GT(u.phase[k], -std::numbers::pi / 2);
        EXPECT_LT(u.phase[k], std::numbers::pi / 2);
        EXPECT_NEAR(u.phase[k], std::atan2(0.5 * std::sin(w), 1.0 - 0.5 * std::cos(w)), 1e-12);
    }
}

TEST(UnwrapPhase, PureDelay) {
    std::vector<double> x(4, 0.0);
    x[3] = 1.0;
    const auto u = unwrap_phase(spectrum(x, 64));
    EXPECT_EQ(u.linear_phase_slope, 3);
    for (double p : u.phase) EXPECT_NEAR(p, 0.0, 1e-12);
}

TEST(UnwrapPhase, MaximumPhaseZeroWindsOnce) {
    const std::vector<double> x{-0.5, 1.0};
    const auto u = unwrap_phase(spectrum(x, 1024));
    EXPECT_EQ(u.linear_phase_slope, 1);
    for (double p : u.phase) EXPECT_LT(std::abs(p), std::numbers::pi / 2);
}

TEST(UnwrapPhase, ZeroBinIsReported) {
    const std::vector<double> x{1.0, 1.0};  // zero at w = pi
    try {
        (void)unwrap_phase(spectrum(x, 8));
        FAIL() << "expected ZeroBinError";
    } catch (const ZeroBinError& e) {
        EXPECT_EQ(e.bin(), 4u);
    }
}

TEST(ComplexCepstrum, MinimumPhaseSeries) {
    const std::vector<double> x{1.0, -0.5};
    const auto cc = complex_cepstrum(x, 4096);
    EXPECT_NEAR(cc.at(0), 0.0, 1e-14);
    for (int n = 1; n < 60; ++n) EXPECT_NEAR(cc.at(n), -std::pow(0.5, n) / n, 1e-14) << n;
    for (int n = -1; n > -2048; --n) EXPECT_NEAR(cc.at(n), 0.0, 1e-14) << n;
    EXPECT_NEAR(cc.at(1), -0.5, 1e-14);
    EXPECT_NEAR(cc.at(2), -0.125, 1e-14);
    EXPECT_NEAR(cc.at(3), -0.041666666666666664, 1e-14);
}

TEST(ComplexCepstrum, MaximumPhaseMirror) {
    const std::vector<double> a{1.0, -0.5};
    const std::vector<double> b{-0.5, 1.0};
    const auto ca = complex_cepstrum(a, 4096);
    const auto cb = complex_cepstrum(b, 4096);
    EXPECT_EQ(cb.linear_phase_slope, 1);
    for (int n = -2047; n < 2048; ++n) EXPECT_NEAR(cb.at(n), ca.at(-n), 1e-14) << n;
    for (int n = 1; n < 2048; ++n) EXPECT_NEAR(cb.at(n), 0.0, 1e-14);
}

TEST(ComplexCepstrum, ImpulseIsZero) {
    const std::vector<double> x{1.0, 0.0, 0.0};
    for (double v : complex_cepstrum(x, 16).values) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(ComplexCepstrum, NegativeGainIsRecordedAsSign) {
    const std::vector<double> x{-1.0, 0.5};
    const auto cc = complex_cepstrum(x, 64);
    EXPECT_EQ(cc.gain_sign, -1);
    EXPECT_NEAR(cc.at(1), -0.5, 1e-14);
    EXPECT_LT(cc.diagnostics.imag_residue, 1e-12);
}

TEST(ComplexCepstrum, Preconditions) {
    const std::vector<double> x(100, 1.0);
    EXPECT_THROW(complex_cepstrum(x, 256), InvalidArgument);
    EXPECT_THROW(complex_cepstrum(x, 1000), InvalidArgument);
    EXPECT_THROW(complex_cepstrum(std::vector<double>(8, 0.0), 64), InvalidArgument);
}

TEST(SplitCepstrum, PartsSumToWhole) {
    std::mt19937 rng(11);
    const auto x = testing_support::random_signal(rng, 40);
    const auto cc = complex_cepstrum(x, 1024);
    const auto s = split_cepstrum(cc);
    for (std::size_t i = 0; i < cc.nfft; ++i) EXPECT_EQ(s.anticausal.values[i] + s.causal.values[i], cc.values[i]);
    for (int n = 0; n < 512; ++n) EXPECT_EQ(s.anticausal.at(n), 0.0);
    EXPECT_EQ(s.anticausal.values[512], 0.5 * cc.values[512]);
    EXPECT_EQ(s.causal.values[512], 0.5 * cc.values[512]);
    for (int n = -511; n < 0; ++n) EXPECT_EQ(s.causal.at(n), 0.0);
    EXPECT_EQ(s.causal.at(0), cc.at(0));
}

TEST(SplitCepstrum, MinimumAndMaximumPhaseInputs) {
    const auto smin = split_cepstrum(complex_cepstrum(std::vector<double>{1.0, -0.5}, 4096));
    for (double v : smin.anticausal.values) EXPECT_NEAR(v, 0.0, 1e-14);
    const auto smax = split_cepstrum(complex_cepstrum(std::vector<double>{-0.5, 1.0}, 4096));
    for (int n = 1; n < 2048; ++n) EXPECT_NEAR(smax.causal.at(n), 0.0, 1e-14);
    EXPECT_NEAR(smax.anticausal.at(-1), -0.5, 1e-14);
}

TEST(RealizeComponent, RoundTripsMinimumPhaseSignal) {
    const auto s = split_cepstrum(complex_cepstrum(std::vector<double>{1.0, -0.5}, 4096));
    const auto c = realize_component(s.causal);
    EXPECT_NEAR(c.time[0], 1.0, 1e-12);
    EXPECT_NEAR(c.time[1], -0.5, 1e-12);
    for (std::size_t i = 2; i < c.time.size(); ++i) EXPECT_NEAR(c.time[i], 0.0, 1e-12);
    const auto a = realize_component(s.anticausal);
    EXPECT_NEAR(a.time[0], 1.0, 1e-12);
    for (std::size_t i = 1; i < a.time.size(); ++i) EXPECT_NEAR(a.time[i], 0.0, 1e-12);
}

TEST(CcDecompose, ReconstructsFrame) {
    const Frame f = testing_support::synthetic_frame(100.0, 0.6, 0.7, Vowel::A);
    const auto r = cc_decompose(f, 4096);
    EXPECT_LT(mixphase::factorization_error(r, f.samples), 1e-8);
    EXPECT_LT(mixphase::reconstruction_error(r, f.samples), 1e-10);

    // circular convolution of the components = frame advanced by the slope
    const auto A = fft_real(r.max_phase, r.nfft);
    const auto B = fft_real(r.min_phase, r.nfft);
    ComplexVector P(r.nfft);
    for (std::size_t k = 0; k < r.nfft; ++k) P[k] = A[k] * B[k];
    const auto y = ifft(P);
    std::vector<double> got(r.nfft), want(r.nfft, 0.0);
    for (std::size_t i = 0; i < r.nfft; ++i) got[i] = y[i].real();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto j = (static_cast<std::int64_t>(i) - r.linear_phase_slope + std::int64_t(r.nfft)) % std::int64_t(r.nfft);
        want[static_cast<std::size_t>(j)] = f.samples[i];
    }
    EXPECT_LT(rel_rms(got, want), 1e-3);
}

TEST(CcDecompose, MinimumPhaseFrameHasImpulseGlottalPart) {
    const auto h = testing_support::all_pole_response({std::polar(0.95, 0.3), std::polar(0.9, 1.2)}, 400);
    const auto r = cc_decompose(h, 4096);
    EXPECT_EQ(r.linear_phase_slope, 0);
    EXPECT_NEAR(r.max_phase[0], 1.0, 1e-6);
    double rest = 0.0;
    for (std::size_t i = 1; i < r.nfft; ++i) rest = std::max(rest, std::abs(r.max_phase[i]));
    EXPECT_LT(rest, 1e-6);
    for (std::size_t i = 0; i < 400; ++i) EXPECT_NEAR(r.min_phase[i], h[i], 1e-6);
}

TEST(CcDecompose, TimeReversalSwapsComponents) {
    const auto h = testing_support::all_pole_response({std::polar(0.95, 0.3), std::polar(0.9, 1.2)}, 400);
    std::vector<double> rev(h.rbegin(), h.rend());
    const auto fwd = cc_decompose(h, 4096);
    const auto bwd = cc_decompose(rev, 4096);
    const double k = bwd.min_phase[0];  // gain sits on the minimum-phase side
    for (std::size_t i = 1; i < bwd.nfft; ++i) EXPECT_NEAR(bwd.min_phase[i], 0.0, 1e-6);
    const auto mx = bwd.max_phase_window(399, 0);
    for (std::size_t n = 0; n < 400; ++n) EXPECT_NEAR(k * mx[399 - n], fwd.min_phase[n], 1e-6);
}

TEST(CcDecompose, ZeroBinTriggersTaperRetry) {
    const std::vector<double> x{1.0, 1.0, 0.0};
    const auto r = cc_decompose(x, 16);
    EXPECT_TRUE(r.diagnostics.tapered);
    const auto flags = r.diagnostics.flags(r.nfft);
    EXPECT_NE(std::find(flags.begin(), flags.end(), "tapered"), flags.end());
}

TEST(CepstrumProperties, CausalPurityForMinimumPhaseSignals) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> rad(0.3, 0.95), ang(0.05, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Complex> poles;
        for (int i = 0; i < 4; ++i) poles.push_back(std::polar(rad(rng), ang(rng)));
        const auto h = testing_support::all_pole_response(poles, 1024);
        const auto cc = complex_cepstrum(h, 4096);
        double neg = 0.0, tot = 0.0;
        for (int n = -2048; n < 2048; ++n) {
            tot += cc.at(n) * cc.at(n);
            if (n < 0) neg += cc.at(n) * cc.at(n);
        }
        EXPECT_LT(neg / tot, 1e-6);
    }
}

TEST(CepstrumProperties, ReversalDuality) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = testing_support::random_signal(rng, 64);
        const std::vector<double> rev(x.rbegin(), x.rend());
        const auto a = complex_cepstrum(x, 4096);
        const auto b = complex_cepstrum(rev, 4096);
        EXPECT_EQ(a.linear_phase_slope + b.linear_phase_slope, 63);
        for (int n = -2047; n < 2048; ++n) ASSERT_NEAR(b.at(n), a.at(-n), 1e-8) << n;
    }
}

TEST(CepstrumProperties, AliasingControlOnSyntheticFrames) {
    for (double f0 : {60.0, 120.0, 180.0})
        for (Vowel v : {Vowel::A, Vowel::I}) {
            const Frame f = testing_support::synthetic_frame(f0, 0.6, 0.7, v);
            const auto a = complex_cepstrum(f, 4096);
            const auto b = complex_cepstrum(f, 8192);
            std::vector<double> va, vb;
            const auto n_max = static_cast<int>(f.size());
            for (int n = -n_max + 1; n < n_max; ++n) {
                va.push_back(a.at(n));
                vb.push_back(b.at(n));
            }
            EXPECT_LT(rel_rms(va, vb), 1e-4) << "f0 " << f0;
        }
}
