#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mixphase/framing.hpp"
#include "mixphase/glottal_synth.hpp"

using namespace mixphase;

TEST(MakeWindow, EndpointsVanishAndMidpointIsOne) {
    for (double a : {0.0, 0.3, 0.72, 0.84, 1.0}) {
        const auto w = make_window(5, a);
        EXPECT_EQ(w[0], 0.0);
        EXPECT_EQ(w[4], 0.0);
        EXPECT_DOUBLE_EQ(w[2], 1.0);
    }
}

TEST(MakeWindow, AlphaOneIsHann) {
    const auto w5 = make_window(5, 1.0);
    const double expect[] = {0.0, 0.5, 1.0, 0.5, 0.0};
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(w5[i], expect[i], 1e-15);

    for (std::size_t n : {8u, 64u, 535u}) {
        const auto w = make_window(n, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_NEAR(w[i], 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(i) / double(n - 1)), 1e-12);
    }
}

TEST(MakeWindow, MatchesClosedForm) {
    const std::size_t n = 101;
    const double a = 0.72;
    const auto w = make_window(n, a);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * double(i) / double(n - 1);
        EXPECT_NEAR(w[i], a / 2 - std::cos(t) / 2 + (1 - a) / 2 * std::cos(2 * t), 1e-12);
    }
}

TEST(MakeWindow, Symmetric) {
    for (std::size_t n : {2u, 3u, 10u, 267u, 1024u})
        for (double a : {0.0, 0.5, 0.72, 1.0}) {
            const auto w = make_window(n, a);
            for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(w[i], w[n - 1 - i], 1e-12);
        }
}

TEST(MakeWindow, RejectsBadArguments) {
    EXPECT_THROW(make_window(1, 0.5), InvalidArgument);
    EXPECT_THROW(make_window(10, -0.1), InvalidArgument);
    EXPECT_THROW(make_window(10, 1.1), InvalidArgument);
}

TEST(ExtractFrames, ThreeGcisGiveOneCentredFrame) {
    std::vector<double> signal(1600, 1.0);
    const std::vector<std::int64_t> gcis{400, 667, 934};
    const FrameSet fs = extract_frames(signal, gcis, 16000.0, WindowSpec{0.72, 2.0});
    ASSERT_EQ(fs.frames.size(), 1u);
    const Frame& f = fs.frames[0];
    EXPECT_EQ(f.gci_index, 667);
    EXPECT_EQ(f.size(), 535u);
    EXPECT_DOUBLE_EQ(f.local_period, 267.0);
    EXPECT_EQ(f.start_index(), 667 - 267);
    ASSERT_EQ(fs.skipped.size(), 2u);
    EXPECT_EQ(fs.skipped[0].gci, 400);
    EXPECT_EQ(fs.skipped[1].gci, 934);
}

TEST(ExtractFrames, ConstantSignalYieldsWindow) {
    std::vector<double> signal(1600, 1.0);
    const std::vector<std::int64_t> gcis{400, 667, 934};
    const FrameSet fs = extract_frames(signal, gcis, 16000.0, WindowSpec{0.72, 2.0});
    const auto w = make_window(535, 0.72);
    ASSERT_EQ(fs.frames[0].samples.size(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(fs.frames[0].samples[i], w[i]);
}

TEST(ExtractFrames, RejectsTooFewGcis) {
    std::vector<double> signal(1000, 1.0);
    EXPECT_THROW(extract_frames(signal, std::vector<std::int64_t>{100}, 16000.0, {}), InvalidArgument);
    EXPECT_THROW(extract_frames(signal, std::vector<std::int64_t>{}, 16000.0, {}), InvalidArgument);
}

TEST(ExtractFrames, RejectsUnorderedOrOutOfRange) {
    std::vector<double> signal(1000, 1.0);
    EXPECT_THROW(extract_frames(signal, std::vector<std::int64_t>{100, 90, 300}, 16000.0, {}), InvalidArgument);
    EXPECT_THROW(extract_frames(signal, std::vector<std::int64_t>{100, 200, 1000}, 16000.0, {}), InvalidArgument);
}

TEST(ExtractFrames, OverrunIsSkippedNotPadded) {
    std::vector<double> signal(700, 1.0);
    const std::vector<std::int64_t> gcis{100, 300, 500, 690};
    const FrameSet fs = extract_frames(signal, gcis, 16000.0, WindowSpec{0.72, 2.0});
    // at 2.2 periods the window around 500 (N = 429) runs past sample 699
    const FrameSet wide = extract_frames(signal, gcis, 16000.0, WindowSpec{0.72, 2.2});
    EXPECT_EQ(fs.frames.size(), 2u);
    ASSERT_EQ(wide.frames.size(), 1u);
    EXPECT_EQ(wide.frames[0].gci_index, 300);
    EXPECT_EQ(wide.skipped.size(), 3u);
}

TEST(ExtractFrames, SyntheticFramesAreOddWithZeroEnds) {
    for (double f0 : {60.0, 100.0, 180.0}) {
        const auto u = synthesize(LFParams{f0, 0.6, 0.7}, Vowel::A, 8.5 / f0, 16000.0);
        for (double periods : {1.25, 2.0, 3.0}) {
            const FrameSet fs = extract_frames(u.signal, u.gcis, u.fs, WindowSpec{0.72, periods});
            ASSERT_FALSE(fs.frames.empty());
            for (const Frame& f : fs.frames) {
                EXPECT_EQ(f.size() % 2, 1u);
                EXPECT_EQ(f.samples.front(), 0.0);
                EXPECT_EQ(f.samples.back(), 0.0);
                EXPECT_GE(f.size(), 8u);
            }
        }
    }
}
