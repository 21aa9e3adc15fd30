#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mixphase/cepstrum.hpp"
#include "mixphase/csv.hpp"
#include "mixphase/error.hpp"
#include "mixphase/framing.hpp"
#include "mixphase/glottal_synth.hpp"
#include "mixphase/metrics.hpp"
#include "mixphase/parallel.hpp"
#include "mixphase/zzt.hpp"

namespace mixphase {

/// One synthesis condition of the evaluation grid.
struct GridConfig {
    double f0 = 100.0;
    double oq = 0.6;
    double am = 0.7;
    Vowel vowel = Vowel::A;

    LFParams params() const { return LFParams{f0, oq, am}; }
};

/// f0 60:20:180 Hz, Oq 0.40:0.05:0.90, asymmetry 0.60:0.05:0.90 and the four
/// vowels: 2156 configurations, ordered by (f0, oq, am, vowel).
inline std::vector<GridConfig> evaluation_grid() {
    std::vector<GridConfig> g;
    g.reserve(7 * 11 * 7 * 4);
    for (int f = 60; f <= 180; f += 20)
        for (int q = 40; q <= 90; q += 5)
            for (int m = 60; m <= 90; m += 5)
                for (Vowel v : kAllVowels) g.push_back({double(f), q / 100.0, m / 100.0, v});
    return g;
}

struct CorpusEntry {
    GridConfig config;
    SyntheticUtterance utterance;
    std::vector<double> pulse;  // one reference LF period
};

inline constexpr std::size_t kCorpusPeriods = 12;

/// Synthesises kCorpusPeriods periods per configuration.
inline std::vector<CorpusEntry> build_corpus(const std::vector<GridConfig>& configs, double fs = 16000.0,
                                             unsigned threads = 0) {
    std::vector<CorpusEntry> corpus(configs.size());
    parallel_for(
        configs.size(),
        [&](std::size_t i) {
            const GridConfig& c = configs[i];
            const LFParams p = c.params();
            corpus[i].config = c;
            corpus[i].utterance = synthesize(p, c.vowel, (static_cast<double>(kCorpusPeriods) + 0.5) / c.f0, fs);
            corpus[i].pulse = lf_pulse(p, fs);
        },
        threads);
    return corpus;
}

struct GridOptions {
    WindowSpec window{};
    std::vector<Method> methods{Method::CC};
    std::size_t nfft = kDefaultNfft;  // raised to the next power of two >= 4 N when needed
    std::size_t frames_per_config = 1;
    double period_scale = 1.0;  // multiplies the period estimate used to size windows
    double circle_tol = kDefaultCircleTol;
    unsigned threads = 0;
};

/// One (configuration, frame, method) evaluation.
struct FrameRecord {
    GridConfig config;
    double axis = std::numeric_limits<double>::quiet_NaN();  // sweep coordinate, if any
    std::size_t frame = 0;
    std::int64_t gci = 0;
    std::size_t frame_length = 0;
    Method method = Method::CC;
    double fg_est = std::numeric_limits<double>::quiet_NaN();
    double fg_true = std::numeric_limits<double>::quiet_NaN();
    double bw_est = std::numeric_limits<double>::quiet_NaN();
    double sd_db = std::numeric_limits<double>::quiet_NaN();
    double cross_rms = std::numeric_limits<double>::quiet_NaN();  // CC vs ZZT max-phase distance
    double factor_err = std::numeric_limits<double>::quiet_NaN();
    double recon_err = std::numeric_limits<double>::quiet_NaN();
    bool disagree = false;
    std::vector<std::string> flags;
    std::string error;

    double rel_err() const { return std::abs(fg_est - fg_true) / fg_true; }
    bool ok() const { return error.empty(); }

    static std::vector<std::string> csv_header() {
        return {"f0_hz", "oq", "am", "vowel", "axis", "frame", "gci", "frame_len", "method", "fg_est_hz",
                "fg_true_hz", "rel_err", "sd_db", "cross_rms", "flags"};
    }
    std::vector<std::string> csv_fields() const {
        std::vector<std::string> f = flags;
        if (!error.empty()) f.push_back("error:" + error);
        return {csv_number(config.f0), csv_number(config.oq), csv_number(config.am), to_string(config.vowel),
                csv_number(axis), std::to_string(frame), std::to_string(gci), std::to_string(frame_length),
                to_string(method), csv_number(fg_est), csv_number(fg_true), csv_number(ok() ? rel_err() : NAN),
                csv_number(sd_db), csv_number(cross_rms), join_flags(f)};
    }
};

inline constexpr double kEquivalenceRms = 1e-2;
inline constexpr double kEquivalenceFg = 0.10;

inline DecompositionResult decompose(std::span<const double> samples, Method m, std::size_t nfft,
                                     double circle_tol = kDefaultCircleTol) {
    return m == Method::CC ? cc_decompose(samples, nfft) : zzt_decompose(samples, nfft, circle_tol);
}

namespace detail {

inline std::vector<std::size_t> middle_indices(std::size_t available, std::size_t wanted) {
    wanted = std::min(wanted, available);
    const std::size_t first = (available - wanted) / 2;
    std::vector<std::size_t> idx(wanted);
    for (std::size_t i = 0; i < wanted; ++i) idx[i] = first + i;
    return idx;
}

inline std::vector<FrameRecord> evaluate_entry(const CorpusEntry& e, const GridOptions& opt) {
    const SyntheticUtterance& u = e.utterance;
    WindowSpec w = opt.window;
    w.length_periods *= opt.period_scale;
    const FrameSet fs = extract_frames(u.signal, u.gcis, u.fs, w);
    std::vector<FrameRecord> out;
    for (std::size_t fi : middle_indices(fs.frames.size(), opt.frames_per_config)) {
        const Frame& frame = fs.frames[fi];
        const std::size_t nfft = std::max(opt.nfft, next_power_of_two(4 * frame.size()));
        const ComplexVector reference = fft_real(e.pulse, nfft);
        const SdOptions sd_band{true, 1, nfft / 4};

        std::vector<FrameRecord> rows;
        std::vector<std::optional<DecompositionResult>> results;
        for (Method m : opt.methods) {
            FrameRecord r;
            r.config = e.config;
            r.frame = fi;
            r.gci = frame.gci_index;
            r.frame_length = frame.size();
            r.method = m;
            r.fg_true = u.true_fg;
            std::optional<DecompositionResult> res;
            try {
                res = decompose(frame.samples, m, nfft, opt.circle_tol);
                r.flags = res->diagnostics.flags(nfft);
                const GlottalFormantEstimate g = glottal_formant(res->max_phase_spectrum, u.fs);
                r.fg_est = g.fg;
                r.bw_est = g.bandwidth;
                r.sd_db = spectral_distortion(res->max_phase_spectrum, reference, sd_band);
                r.factor_err = factorization_error(*res, frame.samples);
                r.recon_err = reconstruction_error(*res, frame.samples);
            } catch (const Error& ex) {
                r.error = ex.what();
            }
            rows.push_back(std::move(r));
            results.push_back(std::move(res));
        }

        // Cross-method comparison when both decompositions are present.
        std::optional<std::size_t> icc, izz;
        for (std::size_t i = 0; i < opt.methods.size(); ++i)
            (opt.methods[i] == Method::CC ? icc : izz) = i;
        if (icc && izz && results[*icc] && results[*izz]) {
            FrameRecord& rc = rows[*icc];
            FrameRecord& rz = rows[*izz];
            const double rms = aligned_relative_rms(results[*izz]->max_phase, results[*icc]->max_phase, 2);
            const bool fg_ok = rc.ok() && rz.ok() && std::isfinite(rc.fg_est) && std::isfinite(rz.fg_est) &&
                               std::abs(rc.fg_est - rz.fg_est) / rz.fg_est < kEquivalenceFg;
            const bool disagree = !(rms < kEquivalenceRms) || !fg_ok;
            const std::vector<std::string> fc = rc.flags, fz = rz.flags;
            for (FrameRecord* r : {&rc, &rz}) {
                r->cross_rms = rms;
                r->disagree = disagree;
            }
            if (disagree) {
                for (const auto& f : fz) rc.flags.push_back("zzt:" + f);
                for (const auto& f : fc) rz.flags.push_back("cc:" + f);
                rc.flags.emplace_back("disagree");
                rz.flags.emplace_back("disagree");
            }
        }
        for (auto& r : rows) out.push_back(std::move(r));
    }
    return out;
}

}  // namespace detail

/// Decomposes the middle frame(s) of every corpus entry with each requested
/// method and scores them against the synthesis ground truth. Per-frame
/// failures are recorded in the row. Rows are ordered by (entry, frame, method).
inline std::vector<FrameRecord> run_grid(const std::vector<CorpusEntry>& corpus, const GridOptions& opt) {
    opt.window.validate();
    if (opt.methods.empty()) throw InvalidArgument("run_grid: no decomposition method requested");
    if (opt.frames_per_config == 0) throw InvalidArgument("run_grid: frames_per_config must be positive");
    std::vector<std::vector<FrameRecord>> per_entry(corpus.size());
    parallel_for(
        corpus.size(), [&](std::size_t i) { per_entry[i] = detail::evaluate_entry(corpus[i], opt); }, opt.threads);
    std::vector<FrameRecord> out;
    for (auto& rows : per_entry)
        for (auto& r : rows) out.push_back(std::move(r));
    return out;
}

struct GridSummary {
    double det_rate = 0.0;
    double sd_mean = 0.0;
    std::size_t frames = 0;
    std::size_t failures = 0;
};

/// Determination rate over all rows of `method` (failed rows count as misses)
/// and mean SD over the rows that produced one.
inline GridSummary summarize(const std::vector<FrameRecord>& rows, Method method) {
    GridSummary s;
    std::vector<double> est, truth;
    double sd = 0.0;
    std::size_t sd_n = 0;
    for (const FrameRecord& r : rows) {
        if (r.method != method) continue;
        ++s.frames;
        if (!r.ok()) ++s.failures;
        est.push_back(r.fg_est);
        truth.push_back(r.fg_true);
        if (std::isfinite(r.sd_db)) {
            sd += r.sd_db;
            ++sd_n;
        }
    }
    s.det_rate = determination_rate(est, truth);
    s.sd_mean = sd_n ? sd / static_cast<double>(sd_n) : std::numeric_limits<double>::quiet_NaN();
    return s;
}

struct SweepResult {
    std::vector<double> axis_values;
    std::vector<double> sd_mean;
    std::vector<double> det_rate;
    std::vector<std::size_t> frames_evaluated;
    std::vector<FrameRecord> rows;

    std::size_t argmax_rate() const {
        return static_cast<std::size_t>(std::max_element(det_rate.begin(), det_rate.end()) - det_rate.begin());
    }
    double rate_at(double axis) const {
        for (std::size_t i = 0; i < axis_values.size(); ++i)
            if (std::abs(axis_values[i] - axis) < 1e-9) return det_rate[i];
        throw InvalidArgument("sweep has no point at " + std::to_string(axis));
    }
    double sd_at(double axis) const {
        for (std::size_t i = 0; i < axis_values.size(); ++i)
            if (std::abs(axis_values[i] - axis) < 1e-9) return sd_mean[i];
        throw InvalidArgument("sweep has no point at " + std::to_string(axis));
    }
};

namespace detail {

template <typename Configure>
SweepResult sweep(const std::vector<CorpusEntry>& corpus, const std::vector<double>& axis, GridOptions base,
                  Method method, Configure&& configure) {
    base.methods = {method};
    SweepResult s;
    for (double v : axis) {
        GridOptions o = base;
        configure(o, v);
        std::vector<FrameRecord> rows = run_grid(corpus, o);
        const GridSummary g = summarize(rows, method);
        s.axis_values.push_back(v);
        s.det_rate.push_back(g.det_rate);
        s.sd_mean.push_back(g.sd_mean);
        s.frames_evaluated.push_back(g.frames);
        for (auto& r : rows) {
            r.axis = v;
            s.rows.push_back(std::move(r));
        }
    }
    return s;
}

}  // namespace detail

/// Determination rate and mean SD per window shape at fixed window length.
inline SweepResult sweep_alpha(const std::vector<CorpusEntry>& corpus, const std::vector<double>& alphas,
                               const GridOptions& base = {}, Method method = Method::CC) {
    if (alphas.empty()) throw InvalidArgument("sweep_alpha: no alpha values");
    for (double a : alphas)
        if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("sweep_alpha: alpha outside [0, 1]");
    return detail::sweep(corpus, alphas, base, method, [](GridOptions& o, double a) { o.window.alpha = a; });
}

/// Determination rate per window length (in periods) at fixed window shape.
inline SweepResult sweep_length(const std::vector<CorpusEntry>& corpus, const std::vector<double>& periods,
                                const GridOptions& base = {}, Method method = Method::CC) {
    if (periods.empty()) throw InvalidArgument("sweep_length: no window lengths");
    for (double p : periods)
        if (!(p >= 1.0 && p <= 4.0)) throw InvalidArgument("sweep_length: window length outside [1, 4] periods");
    return detail::sweep(corpus, periods, base, method,
                         [](GridOptions& o, double p) { o.window.length_periods = p; });
}

/// 0.50:0.02:1.00
inline std::vector<double> default_alpha_axis() {
    std::vector<double> a;
    for (int i = 50; i <= 100; i += 2) a.push_back(i / 100.0);
    return a;
}

inline std::vector<double> default_length_axis() { return {1.25, 1.5, 2.0, 2.5, 3.0}; }

struct BenchResult {
    double f0 = 0.0;
    double cc_ms = 0.0;
    double zzt_ms = 0.0;
    double cc_iqr_ms = 0.0;
    double zzt_iqr_ms = 0.0;
    std::size_t frame_length = 0;
    double fs = 0.0;
    std::size_t repetitions = 0;
};

/// One CSV row per (f0, method).
struct BenchRow {
    double f0_hz;
    Method method;
    double median_ms;
    double iqr_ms;
    std::size_t frame_len;
    double fs;

    static std::vector<std::string> csv_header() { return {"f0_hz", "method", "median_ms", "iqr_ms", "frame_len", "fs"}; }
    std::vector<std::string> csv_fields() const {
        return {csv_number(f0_hz), to_string(method), csv_number(median_ms), csv_number(iqr_ms),
                std::to_string(frame_len), csv_number(fs)};
    }
};

inline std::vector<BenchRow> bench_rows(const std::vector<BenchResult>& results) {
    std::vector<BenchRow> rows;
    for (const auto& b : results) {
        rows.push_back({b.f0, Method::ZZT, b.zzt_ms, b.zzt_iqr_ms, b.frame_length, b.fs});
        rows.push_back({b.f0, Method::CC, b.cc_ms, b.cc_iqr_ms, b.frame_length, b.fs});
    }
    return rows;
}

namespace detail {

struct TimingStats {
    double median;
    double iqr;
};

inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

template <typename Fn>
TimingStats time_calls(Fn&& fn, std::size_t reps, std::size_t warmup) {
    for (std::size_t i = 0; i < warmup; ++i) fn();
    std::vector<double> ms;
    ms.reserve(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return {quantile(ms, 0.5), quantile(ms, 0.75) - quantile(ms, 0.25)};
}

}  // namespace detail

/// Median single-frame decomposition time for each method, on the middle
/// two-period frame of a synthetic /a/ (Oq 0.6, asymmetry 0.7) at each f0.
/// Runs sequentially on the calling thread.
inline std::vector<BenchResult> benchmark(const std::vector<double>& f0s, double fs = 16000.0,
                                          std::size_t repetitions = 20, std::size_t warmup = 3,
                                          std::size_t nfft = kDefaultNfft) {
    if (repetitions < 20) throw InvalidArgument("benchmark: at least 20 repetitions required");
    if (warmup < 3) throw InvalidArgument("benchmark: at least 3 warmup iterations required");
    std::vector<BenchResult> out;
    for (double f0 : f0s) {
        const SyntheticUtterance u = synthesize(LFParams{f0, 0.6, 0.7}, Vowel::A, 8.5 / f0, fs);
        const FrameSet frames = extract_frames(u.signal, u.gcis, fs, WindowSpec{0.72, 2.0});
        if (frames.frames.empty()) throw InvalidArgument("benchmark: no frame available");
        const Frame& frame = frames.frames[frames.frames.size() / 2];
        const std::size_t n = std::max(nfft, next_power_of_two(4 * frame.size()));
        BenchResult b;
        b.f0 = f0;
        b.fs = fs;
        b.frame_length = frame.size();
        b.repetitions = repetitions;
        const auto cc = detail::time_calls([&] { (void)cc_decompose(frame, n); }, repetitions, warmup);
        const auto zz = detail::time_calls([&] { (void)zzt_decompose(frame, n); }, repetitions, warmup);
        b.cc_ms = cc.median;
        b.cc_iqr_ms = cc.iqr;
        b.zzt_ms = zz.median;
        b.zzt_iqr_ms = zz.iqr;
        out.push_back(b);
    }
    return out;
}

}  // namespace mixphase
