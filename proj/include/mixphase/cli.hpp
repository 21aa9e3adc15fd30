#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixphase/analysis.hpp"
#include "mixphase/csv.hpp"
#include "mixphase/experiments.hpp"
#include "mixphase/markers.hpp"
#include "mixphase/wav.hpp"

namespace mixphase {

/// One row of a sweep summary.
struct SweepPoint {
    double axis;
    Method method;
    double det_rate;
    double sd_mean;
    std::size_t frames;

    static std::vector<std::string> csv_header() { return {"axis", "method", "det_rate", "sd_mean_db", "frames"}; }
    std::vector<std::string> csv_fields() const {
        return {csv_number(axis), to_string(method), csv_number(det_rate), csv_number(sd_mean), std::to_string(frames)};
    }
};

inline std::vector<SweepPoint> sweep_points(const SweepResult& s, Method m) {
    std::vector<SweepPoint> out;
    for (std::size_t i = 0; i < s.axis_values.size(); ++i)
        out.push_back({s.axis_values[i], m, s.det_rate[i], s.sd_mean[i], s.frames_evaluated[i]});
    return out;
}

namespace cli {

inline Method parse_method(const std::string& s) {
    if (s == "cc" || s == "CC") return Method::CC;
    if (s == "zzt" || s == "ZZT") return Method::ZZT;
    throw InvalidArgument("unknown method '" + s + "' (expected cc or zzt)");
}

template <typename R>
void emit_csv(const std::string& path, const std::vector<R>& rows, std::ostream& out) {
    if (path.empty() || path == "-")
        write_csv(out, std::span<const R>(rows));
    else
        write_csv(path, rows);
}

struct GridFilter {
    std::vector<double> f0;
    std::vector<double> oq;
    std::vector<double> am;
    std::vector<std::string> vowels;

    void add_to(CLI::App* app) {
        app->add_option("--f0", f0, "Restrict the grid to these f0 values (Hz)")->delimiter(',');
        app->add_option("--oq", oq, "Restrict the grid to these open quotients")->delimiter(',');
        app->add_option("--am", am, "Restrict the grid to these asymmetry coefficients")->delimiter(',');
        app->add_option("--vowel", vowels, "Restrict the grid to these vowels (a, @, i, y)")->delimiter(',');
    }

    std::vector<GridConfig> select() const {
        auto in = [](const std::vector<double>& set, double v) {
            if (set.empty()) return true;
            for (double s : set)
                if (std::abs(s - v) < 1e-9) return true;
            return false;
        };
        std::vector<Vowel> vs;
        for (const auto& v : vowels) vs.push_back(parse_vowel(v));
        std::vector<GridConfig> out;
        for (const GridConfig& c : evaluation_grid()) {
            if (!in(f0, c.f0) || !in(oq, c.oq) || !in(am, c.am)) continue;
            if (!vs.empty() && std::find(vs.begin(), vs.end(), c.vowel) == vs.end()) continue;
            out.push_back(c);
        }
        if (out.empty()) throw InvalidArgument("grid filter selects no configuration");
        return out;
    }
};

inline std::string file_stem(const GridConfig& c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "f0_%03d_oq_%.2f_am_%.2f_%s", static_cast<int>(std::lround(c.f0)), c.oq, c.am,
                  c.vowel == Vowel::Schwa ? "schwa" : to_string(c.vowel));
    return buf;
}

struct CorpusIndexRow {
    std::string stem;
    GridConfig c;
    double true_fg;

    static std::vector<std::string> csv_header() { return {"name", "f0_hz", "oq", "am", "vowel", "fg_true_hz"}; }
    std::vector<std::string> csv_fields() const {
        return {stem, csv_number(c.f0), csv_number(c.oq), csv_number(c.am), to_string(c.vowel), csv_number(true_fg)};
    }
};

inline void print_sweep(std::ostream& out, const char* axis, const SweepResult& s) {
    out << std::left << std::setw(10) << axis << std::setw(10) << "det_rate" << std::setw(12) << "sd_mean_db"
        << "frames\n";
    for (std::size_t i = 0; i < s.axis_values.size(); ++i) {
        out << std::fixed << std::setprecision(2) << std::setw(10) << s.axis_values[i] << std::setprecision(4)
            << std::setw(10) << s.det_rate[i] << std::setw(12) << s.sd_mean[i] << s.frames_evaluated[i] << '\n';
    }
    out << std::defaultfloat;
    out << "best " << axis << " = " << s.axis_values[s.argmax_rate()] << '\n';
}

}  // namespace cli

/// Entry point of the mixphase command-line tool. Returns the process exit
/// code: 0 on success, 1 on a runtime error, 2 on a usage error.
inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
    CLI::App app{"Mixed-phase glottal source estimation (complex cepstrum and zeros of the z-transform)", "mixphase"};
    app.require_subcommand(1);

    // shared analysis knobs
    double alpha = 0.72;
    double periods = 2.0;
    std::size_t nfft = kDefaultNfft;
    double circle_tol = kDefaultCircleTol;
    unsigned threads = 0;
    std::string out_path;
    auto add_window = [&](CLI::App* sub, bool with_alpha, bool with_periods) {
        if (with_alpha)
            sub->add_option("--alpha", alpha, "Window shape parameter (1 = Hann, 0.84 = Blackman)")
                ->capture_default_str()
                ->check(CLI::Range(0.0, 1.0));
        if (with_periods)
            sub->add_option("--periods", periods, "Window length in pitch periods")
                ->capture_default_str()
                ->check(CLI::PositiveNumber);
        sub->add_option("--nfft", nfft, "FFT size (power of two, raised to >= 4 x frame length)")->capture_default_str();
        sub->add_option("--circle-tol", circle_tol, "ZZT unit-circle tolerance")->capture_default_str();
    };

    // synth
    auto* synth = app.add_subcommand("synth", "Write the synthetic LF corpus (WAV + GCI markers + JSON metadata)");
    std::string synth_dir;
    std::string synth_format = "float32";
    double synth_fs = 16000.0;
    std::size_t synth_periods = kCorpusPeriods;
    cli::GridFilter synth_filter;
    synth->add_option("--out-dir", synth_dir, "Output directory")->required();
    synth->add_option("--format", synth_format, "Sample format")
        ->check(CLI::IsMember({"pcm16", "float32"}))
        ->capture_default_str();
    synth->add_option("--fs", synth_fs, "Sampling rate (Hz)")->capture_default_str();
    synth->add_option("--num-periods", synth_periods, "Glottal periods per utterance")->capture_default_str();
    synth_filter.add_to(synth);

    // decompose
    auto* dec = app.add_subcommand("decompose", "Per-frame mixed-phase decomposition of a WAV file at given GCIs");
    std::string in_wav, in_gci, method_name = "cc", components_path;
    dec->add_option("--in", in_wav, "Mono WAV file")->required();
    dec->add_option("--gci", in_gci, "GCI marker file")->required();
    dec->add_option("--method", method_name, "cc or zzt")->check(CLI::IsMember({"cc", "zzt"}))->capture_default_str();
    add_window(dec, true, true);
    dec->add_option("--out", out_path, "Per-frame CSV (default: standard output)");
    dec->add_option("--components", components_path, "CSV of the time-domain components");
    dec->add_option("--threads", threads, "Worker threads (0 = all cores)");

    // analyze
    auto* ana = app.add_subcommand("analyze", "Glottal formant and bandwidth trajectories with both methods");
    ana->add_option("--in", in_wav, "Mono WAV file")->required();
    ana->add_option("--gci", in_gci, "GCI marker file")->required();
    add_window(ana, true, true);
    ana->add_option("--out", out_path, "Trajectory CSV (default: standard output)");
    ana->add_option("--threads", threads, "Worker threads (0 = all cores)");

    // grid-style experiments
    std::vector<std::string> methods_names;
    std::size_t frames_per_config = 1;
    std::string summary_path;
    cli::GridFilter grid_filter;
    auto add_grid = [&](CLI::App* sub) {
        grid_filter.add_to(sub);
        sub->add_option("--frames-per-config", frames_per_config, "Frames evaluated per configuration")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
        sub->add_option("--out", out_path, "Per-frame CSV");
    };

    auto* sa = app.add_subcommand("sweep-alpha", "Determination rate and SD as a function of the window shape");
    std::vector<double> alpha_list = default_alpha_axis();
    sa->add_option("--alpha-list", alpha_list, "Window shapes to evaluate")->delimiter(',');
    sa->add_option("--method", method_name, "cc or zzt")->check(CLI::IsMember({"cc", "zzt"}))->capture_default_str();
    sa->add_option("--summary", summary_path, "Summary CSV (one row per alpha)");
    add_window(sa, false, true);
    add_grid(sa);

    auto* sl = app.add_subcommand("sweep-length", "Determination rate as a function of the window length");
    std::vector<double> period_list = default_length_axis();
    sl->add_option("--periods-list", period_list, "Window lengths (pitch periods) to evaluate")->delimiter(',');
    sl->add_option("--method", method_name, "cc or zzt")->check(CLI::IsMember({"cc", "zzt"}))->capture_default_str();
    sl->add_option("--summary", summary_path, "Summary CSV (one row per length)");
    add_window(sl, true, false);
    add_grid(sl);

    auto* grid = app.add_subcommand("grid", "Evaluate CC and ZZT on the synthetic grid");
    methods_names = {"cc", "zzt"};
    grid->add_option("--method", methods_names, "Methods to run")
        ->delimiter(',')
        ->check(CLI::IsMember({"cc", "zzt"}))
        ->capture_default_str();
    add_window(grid, true, true);
    add_grid(grid);

    auto* bench = app.add_subcommand("bench", "Time single-frame decompositions");
    std::vector<double> bench_f0 = {60.0, 180.0};
    std::size_t reps = 20, warmup = 3;
    double bench_fs = 16000.0;
    bench->add_option("--f0", bench_f0, "Pitch values (Hz)")->delimiter(',')->capture_default_str();
    bench->add_option("--reps", reps, "Timed repetitions (>= 20)")->capture_default_str();
    bench->add_option("--warmup", warmup, "Warmup iterations (>= 3)")->capture_default_str();
    bench->add_option("--fs", bench_fs, "Sampling rate (Hz)")->capture_default_str();
    bench->add_option("--nfft", nfft, "FFT size")->capture_default_str();
    bench->add_option("--out", out_path, "CSV (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (synth->parsed()) {
            const auto configs = synth_filter.select();
            const SampleFormat fmt = synth_format == "pcm16" ? SampleFormat::Pcm16 : SampleFormat::Float32;
            std::filesystem::create_directories(synth_dir);
            std::vector<cli::CorpusIndexRow> index;
            for (const GridConfig& c : configs) {
                const auto u = synthesize(c.params(), c.vowel, (static_cast<double>(synth_periods) + 0.5) / c.f0, synth_fs);
                const std::string stem = cli::file_stem(c);
                const auto base = std::filesystem::path(synth_dir) / stem;
                write_wav(base.string() + ".wav", u.signal, u.fs, fmt);
                write_markers(base.string() + ".gci", u.gcis);
                nlohmann::ordered_json j;
                j["f0_hz"] = c.f0;
                j["oq"] = c.oq;
                j["am"] = c.am;
                j["ra"] = u.params.ra;
                j["ee"] = u.params.ee;
                j["vowel"] = to_string(c.vowel);
                j["fs"] = u.fs;
                j["format"] = synth_format;
                j["fg_true_hz"] = u.true_fg;
                j["gcis"] = u.gcis;
                j["filter_coeffs"] = u.filter_coeffs;
                std::ofstream js(base.string() + ".json");
                js << j.dump(2) << '\n';
                if (!js) throw Error("failed writing '" + base.string() + ".json'");
                index.push_back({stem, c, u.true_fg});
            }
            write_csv((std::filesystem::path(synth_dir) / "index.csv").string(), index);
            out << "wrote " << index.size() << " utterances to " << synth_dir << '\n';
            return 0;
        }

        if (dec->parsed() || ana->parsed()) {
            const WavData w = read_wav(in_wav);
            const MarkerFile m = read_markers(in_gci, w.fs);
            AnalysisOptions opt;
            opt.window = WindowSpec{alpha, periods};
            opt.window.validate();
            opt.nfft = nfft;
            opt.circle_tol = circle_tol;
            opt.threads = threads;
            if (dec->parsed()) opt.methods = {cli::parse_method(method_name)};
            const FrameSet frames = extract_frames(w.samples, m.samples, w.fs, opt.window);
            const auto ds = decompose_frames(frames, opt);
            for (const auto& s : frames.skipped) err << "skipped GCI " << s.gci << ": " << s.reason << '\n';
            if (dec->parsed()) {
                std::vector<DecomposeRow> rows;
                for (const auto& d : ds) rows.push_back({&d});
                cli::emit_csv(out_path, rows, out);
                if (!components_path.empty()) write_csv(components_path, component_samples(ds));
            } else {
                std::vector<AnalysisRecord> recs;
                for (const auto& d : ds) recs.push_back(d.record);
                cli::emit_csv(out_path, recs, out);
                if (!out_path.empty() && out_path != "-") {
                    const TrajectoryAgreement t = trajectory_agreement(recs);
                    out << "frames: " << t.frames << "  median fg CC " << t.fg_median_cc << " Hz, ZZT "
                        << t.fg_median_zzt << " Hz, median frame-wise difference " << 100.0 * t.fg_median_rel
                        << "% (fg), " << 100.0 * t.bw_median_rel << "% (bandwidth)\n";
                }
            }
            return 0;
        }

        if (sa->parsed() || sl->parsed() || grid->parsed()) {
            const auto corpus = build_corpus(grid_filter.select(), 16000.0, threads);
            GridOptions opt;
            opt.window = WindowSpec{alpha, periods};
            opt.nfft = nfft;
            opt.circle_tol = circle_tol;
            opt.frames_per_config = frames_per_config;
            opt.threads = threads;
            if (grid->parsed()) {
                opt.window.validate();
                opt.methods.clear();
                for (const auto& n : methods_names) opt.methods.push_back(cli::parse_method(n));
                const auto rows = run_grid(corpus, opt);
                if (!out_path.empty()) cli::emit_csv(out_path, rows, out);
                std::size_t pairs = 0, agree = 0;
                for (const auto& r : rows)
                    if (r.method == Method::CC && std::isfinite(r.cross_rms)) {
                        ++pairs;
                        if (!r.disagree) ++agree;
                    }
                out << corpus.size() << " configurations, alpha " << alpha << ", " << periods << " periods\n";
                for (Method m : opt.methods) {
                    const GridSummary s = summarize(rows, m);
                    out << std::left << std::setw(4) << to_string(m) << " det_rate " << s.det_rate << "  sd_mean "
                        << s.sd_mean << " dB  frames " << s.frames << "  failures " << s.failures << '\n';
                }
                if (pairs) out << "CC/ZZT equivalent on " << agree << " of " << pairs << " frames\n";
                return 0;
            }
            const Method m = cli::parse_method(method_name);
            const SweepResult s = sa->parsed() ? sweep_alpha(corpus, alpha_list, opt, m) : sweep_length(corpus, period_list, opt, m);
            if (!out_path.empty()) cli::emit_csv(out_path, s.rows, out);
            if (!summary_path.empty()) write_csv(summary_path, sweep_points(s, m));
            cli::print_sweep(out, sa->parsed() ? "alpha" : "periods", s);
            return 0;
        }

        if (bench->parsed()) {
            const auto results = benchmark(bench_f0, bench_fs, reps, warmup, nfft);
            const auto rows = bench_rows(results);
            if (out_path.empty() || out_path == "-") {
                write_csv(out, std::span<const BenchRow>(rows));
            } else {
                write_csv(out_path, rows);
                out << std::left << std::setw(8) << "f0_hz" << std::setw(12) << "cc_ms" << std::setw(12) << "zzt_ms"
                    << "frame_len\n";
                for (const auto& b : results)
                    out << std::setw(8) << b.f0 << std::setw(12) << b.cc_ms << std::setw(12) << b.zzt_ms << b.frame_length
                        << '\n';
            }
            return 0;
        }
    } catch (const std::exception& e) {
        err << "mixphase: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

inline int cli_dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
    std::vector<const char*> argv{"mixphase"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mixphase
