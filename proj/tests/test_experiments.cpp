#include <gtest/gtest.h>

#include <set>
#include <sstream>
#include <tuple>

#include "mixphase/experiments.hpp"

using namespace mixphase;

namespace {

std::vector<GridConfig> small_grid() {
    std::vector<GridConfig> g;
    for (double f0 : {60.0, 120.0, 180.0})
        for (double oq : {0.5, 0.8})
            for (Vowel v : {Vowel::A, Vowel::I}) g.push_back({f0, oq, 0.7, v});
    return g;
}

std::string to_csv(const std::vector<FrameRecord>& rows) {
    std::ostringstream os;
    write_csv(os, std::span<const FrameRecord>(rows));
    return os.str();
}

}  // namespace

TEST(EvaluationGrid, CoversTable) {
    const auto g = evaluation_grid();
    EXPECT_EQ(g.size(), 2156u);
    std::set<std::tuple<int, int, int, int>> seen;
    for (const auto& c : g) {
        seen.insert({int(std::lround(c.f0)), int(std::lround(c.oq * 100)), int(std::lround(c.am * 100)), int(c.vowel)});
        EXPECT_GE(c.f0, 60.0);
        EXPECT_LE(c.f0, 180.0);
        EXPECT_NO_THROW(c.params().validate());
    }
    EXPECT_EQ(seen.size(), 2156u);
}

TEST(RunGrid, RowsAreOrderedAndComplete) {
    const auto corpus = build_corpus(small_grid());
    GridOptions opt;
    opt.methods = {Method::CC, Method::ZZT};
    opt.frames_per_config = 2;
    const auto rows = run_grid(corpus, opt);
    ASSERT_EQ(rows.size(), corpus.size() * 2 * 2);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].method, i % 2 == 0 ? Method::CC : Method::ZZT);
        EXPECT_EQ(rows[i].config.f0, corpus[i / 4].config.f0);
        EXPECT_TRUE(rows[i].ok()) << rows[i].error;
        EXPECT_TRUE(std::isfinite(rows[i].cross_rms));
        if (rows[i].disagree) EXPECT_FALSE(rows[i].flags.empty());
    }
}

TEST(RunGrid, EmptyMethodSetIsAnError) {
    const auto corpus = build_corpus({GridConfig{}});
    GridOptions opt;
    opt.methods.clear();
    EXPECT_THROW(run_grid(corpus, opt), InvalidArgument);
}

TEST(RunGrid, DeterministicAndIndependentOfThreads) {
    const auto corpus = build_corpus(small_grid(), 16000.0, 1);
    GridOptions opt;
    opt.methods = {Method::CC, Method::ZZT};
    opt.threads = 1;
    const auto seq = to_csv(run_grid(corpus, opt));
    opt.threads = 4;
    const auto par = to_csv(run_grid(corpus, opt));
    const auto again = to_csv(run_grid(corpus, opt));
    EXPECT_EQ(seq, par);
    EXPECT_EQ(par, again);

    const auto corpus4 = build_corpus(small_grid(), 16000.0, 4);
    for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_EQ(corpus[i].utterance.signal, corpus4[i].utterance.signal);
}

TEST(Summarize, FailedRowsCountAsMisses) {
    std::vector<FrameRecord> rows(4);
    for (auto& r : rows) {
        r.fg_true = 100.0;
        r.fg_est = 101.0;
        r.sd_db = 2.0;
    }
    rows[3].error = "boom";
    rows[3].fg_est = NAN;
    rows[3].sd_db = NAN;
    rows[2].method = Method::ZZT;
    const auto s = summarize(rows, Method::CC);
    EXPECT_EQ(s.frames, 3u);
    EXPECT_EQ(s.failures, 1u);
    EXPECT_DOUBLE_EQ(s.det_rate, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.sd_mean, 2.0);
}

TEST(Sweeps, SinglePointAndPreconditions) {
    const auto corpus = build_corpus(small_grid());
    const auto s = sweep_alpha(corpus, {0.72});
    ASSERT_EQ(s.axis_values.size(), 1u);
    EXPECT_EQ(s.frames_evaluated[0], corpus.size());
    EXPECT_GE(s.det_rate[0], 0.0);
    EXPECT_LE(s.det_rate[0], 1.0);
    EXPECT_EQ(s.argmax_rate(), 0u);
    EXPECT_DOUBLE_EQ(s.rate_at(0.72), s.det_rate[0]);
    for (const auto& r : s.rows) EXPECT_DOUBLE_EQ(r.axis, 0.72);

    EXPECT_THROW(sweep_alpha(corpus, {1.2}), InvalidArgument);
    EXPECT_THROW(sweep_alpha(corpus, {}), InvalidArgument);
    EXPECT_THROW(sweep_length(corpus, {0.5}), InvalidArgument);
    EXPECT_THROW(sweep_length(corpus, {4.5}), InvalidArgument);

    const auto l = sweep_length(corpus, {1.5, 2.0});
    EXPECT_EQ(l.axis_values.size(), 2u);
    EXPECT_EQ(l.rows.size(), 2 * corpus.size());
}

TEST(Benchmark, ProducesPositiveTimings) {
    EXPECT_THROW(benchmark({100.0}, 16000.0, 5), InvalidArgument);
    EXPECT_THROW(benchmark({100.0}, 16000.0, 20, 1), InvalidArgument);
    const auto b = benchmark({180.0}, 16000.0, 20, 3);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_GT(b[0].cc_ms, 0.0);
    EXPECT_GT(b[0].zzt_ms, 0.0);
    EXPECT_GE(b[0].cc_iqr_ms, 0.0);
    EXPECT_EQ(b[0].repetitions, 20u);
    EXPECT_EQ(b[0].frame_length, 179u);
    const auto rows = bench_rows(b);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(BenchRow::csv_header(), (std::vector<std::string>{"f0_hz", "method", "median_ms", "iqr_ms", "frame_len", "fs"}));
}
