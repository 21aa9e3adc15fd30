#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mixphase/cepstrum.hpp"
#include "mixphase/csv.hpp"
#include "mixphase/framing.hpp"
#include "mixphase/metrics.hpp"
#include "mixphase/parallel.hpp"
#include "mixphase/zzt.hpp"

namespace mixphase {

struct AnalysisOptions {
    WindowSpec window{};
    std::vector<Method> methods{Method::CC, Method::ZZT};
    std::size_t nfft = kDefaultNfft;  // raised to the next power of two >= 4 N when needed
    double circle_tol = kDefaultCircleTol;
    unsigned threads = 0;
};

/// Glottal-formant estimate for one frame and one method.
struct AnalysisRecord {
    std::size_t frame = 0;
    std::int64_t gci = 0;
    double time_s = 0.0;
    Method method = Method::CC;
    std::size_t frame_length = 0;
    std::size_t nfft = 0;
    double fg = std::numeric_limits<double>::quiet_NaN();
    double bandwidth = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> flags;
    std::string error;

    bool ok() const { return error.empty(); }

    static std::vector<std::string> csv_header() { return {"time_s", "method", "fg_hz", "bw_hz", "flags"}; }
    std::vector<std::string> csv_fields() const {
        std::vector<std::string> f = flags;
        if (!error.empty()) f.push_back("error:" + error);
        return {csv_number(time_s), to_string(method), csv_number(fg), csv_number(bandwidth), join_flags(f)};
    }
};

/// Full decomposition of one frame, kept for export.
struct FrameDecomposition {
    Frame frame;
    AnalysisRecord record;
    std::optional<DecompositionResult> result;
};

namespace detail {

inline std::size_t analysis_nfft(std::size_t requested, std::size_t frame_len) {
    if (!is_power_of_two(requested)) throw InvalidArgument("nfft must be a power of two");
    return std::max(requested, next_power_of_two(4 * frame_len));
}

inline FrameDecomposition analyse_frame(const Frame& frame, std::size_t index, Method m, std::size_t nfft_req,
                                        double circle_tol) {
    FrameDecomposition d;
    d.frame = frame;
    AnalysisRecord& r = d.record;
    r.frame = index;
    r.gci = frame.gci_index;
    r.time_s = static_cast<double>(frame.gci_index) / frame.fs;
    r.method = m;
    r.frame_length = frame.size();
    r.nfft = analysis_nfft(nfft_req, frame.size());
    try {
        d.result = m == Method::CC ? cc_decompose(frame, r.nfft) : zzt_decompose(frame, r.nfft, circle_tol);
        r.flags = d.result->diagnostics.flags(r.nfft);
        const GlottalFormantEstimate g = glottal_formant(d.result->max_phase_spectrum, frame.fs);
        r.fg = g.fg;
        r.bandwidth = g.bandwidth;
        if (g.bandwidth_one_sided) r.flags.emplace_back("bw_one_sided");
    } catch (const Error& ex) {
        r.error = ex.what();
    }
    return d;
}

}  // namespace detail

/// Decomposes every frame with every requested method. The result is ordered
/// by (frame, method); frame-level failures are recorded, not thrown.
inline std::vector<FrameDecomposition> decompose_frames(const FrameSet& frames, const AnalysisOptions& opt) {
    if (opt.methods.empty()) throw InvalidArgument("no decomposition method requested");
    (void)detail::analysis_nfft(opt.nfft, 1);
    const std::size_t nm = opt.methods.size();
    std::vector<FrameDecomposition> out(frames.frames.size() * nm);
    parallel_for(
        out.size(),
        [&](std::size_t i) {
            out[i] = detail::analyse_frame(frames.frames[i / nm], i / nm, opt.methods[i % nm], opt.nfft, opt.circle_tol);
        },
        opt.threads);
    return out;
}

/// Frames the signal at the given GCIs and estimates the glottal formant of
/// each frame with each method.
inline std::vector<AnalysisRecord> analyze(std::span<const double> signal, double fs, std::span<const std::int64_t> gcis,
                                           const AnalysisOptions& opt = {}) {
    opt.window.validate();
    const FrameSet frames = extract_frames(signal, gcis, fs, opt.window);
    std::vector<AnalysisRecord> out;
    for (auto& d : decompose_frames(frames, opt)) out.push_back(std::move(d.record));
    return out;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct TrajectoryAgreement {
    std::size_t frames = 0;       // frames where both methods succeeded
    double fg_median_rel = std::numeric_limits<double>::quiet_NaN();  // median |cc - zzt| / zzt
    double bw_median_rel = std::numeric_limits<double>::quiet_NaN();
    double fg_median_cc = std::numeric_limits<double>::quiet_NaN();
    double fg_median_zzt = std::numeric_limits<double>::quiet_NaN();
};

/// Frame-wise agreement between the CC and ZZT trajectories of an analysis.
inline TrajectoryAgreement trajectory_agreement(const std::vector<AnalysisRecord>& records) {
    std::vector<const AnalysisRecord*> cc, zz;
    for (const auto& r : records) {
        if (!r.ok()) continue;
        (r.method == Method::CC ? cc : zz).push_back(&r);
    }
    std::vector<double> dfg, dbw, fcc, fzz;
    for (const AnalysisRecord* c : cc) {
        const auto it = std::find_if(zz.begin(), zz.end(), [&](const AnalysisRecord* z) { return z->frame == c->frame; });
        if (it == zz.end()) continue;
        const AnalysisRecord* z = *it;
        dfg.push_back(std::abs(c->fg - z->fg) / z->fg);
        dbw.push_back(std::abs(c->bandwidth - z->bandwidth) / z->bandwidth);
        fcc.push_back(c->fg);
        fzz.push_back(z->fg);
    }
    TrajectoryAgreement t;
    t.frames = dfg.size();
    t.fg_median_rel = median(dfg);
    t.bw_median_rel = median(dbw);
    t.fg_median_cc = median(fcc);
    t.fg_median_zzt = median(fzz);
    return t;
}

/// Per-frame decomposition summary written by the decompose command.
struct DecomposeRow {
    const FrameDecomposition* d;

    static std::vector<std::string> csv_header() {
        return {"frame", "gci", "time_s", "method", "frame_len", "nfft", "linear_phase_slope", "fg_hz", "bw_hz", "flags"};
    }
    std::vector<std::string> csv_fields() const {
        const AnalysisRecord& r = d->record;
        std::vector<std::string> f = r.flags;
        if (!r.error.empty()) f.push_back("error:" + r.error);
        return {std::to_string(r.frame), std::to_string(r.gci), csv_number(r.time_s), to_string(r.method),
                std::to_string(r.frame_length), std::to_string(r.nfft),
                d->result ? std::to_string(d->result->linear_phase_slope) : std::string{}, csv_number(r.fg),
                csv_number(r.bandwidth), join_flags(f)};
    }
};

/// Time-domain components of one frame around n = 0, n in [-(N-1), N-1].
struct ComponentSample {
    std::size_t frame;
    std::int64_t gci;
    Method method;
    std::int64_t n;
    double max_phase;
    double min_phase;

    static std::vector<std::string> csv_header() { return {"frame", "gci", "method", "n", "max_phase", "min_phase"}; }
    std::vector<std::string> csv_fields() const {
        return {std::to_string(frame), std::to_string(gci), to_string(method), std::to_string(n), csv_number(max_phase),
                csv_number(min_phase)};
    }
};

inline std::vector<ComponentSample> component_samples(const std::vector<FrameDecomposition>& ds) {
    std::vector<ComponentSample> out;
    for (const auto& d : ds) {
        if (!d.result) continue;
        const std::size_t span = d.frame.size() - 1;
        const auto mx = d.result->max_phase_window(span, span);
        const auto mn = d.result->min_phase_window(span, span);
        for (std::size_t i = 0; i < mx.size(); ++i)
            out.push_back({d.record.frame, d.record.gci, d.record.method,
                           static_cast<std::int64_t>(i) - static_cast<std::int64_t>(span), mx[i], mn[i]});
    }
    return out;
}

}  // namespace mixphase
