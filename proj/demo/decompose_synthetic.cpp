// Synthesize a sustained /a/, cut one GCI-centred frame and split it into its
// maximum-phase (glottal) and minimum-phase (vocal tract) parts with both methods.
#include <cstdio>

#include "mixphase/mixphase.hpp"

using namespace mixphase;

int main() {
    const LFParams p{.f0 = 120.0, .oq = 0.6, .am = 0.7};
    const SyntheticUtterance u = synthesize(p, Vowel::A, 0.1, 16000.0);
    const FrameSet frames = extract_frames(u.signal, u.gcis, u.fs, WindowSpec{0.72, 2.0});
    const Frame& f = frames.frames[frames.frames.size() / 2];
    std::printf("frame at sample %lld, %zu samples, true Fg %.1f Hz\n", static_cast<long long>(f.gci_index), f.size(),
                u.true_fg);

    const DecompositionResult cc = cc_decompose(f);
    const DecompositionResult zz = zzt_decompose(f);
    for (const DecompositionResult* r : {&cc, &zz}) {
        const GlottalFormantEstimate g = glottal_formant(r->max_phase_spectrum, u.fs);
        std::printf("%-4s Fg %.1f Hz  bandwidth %.1f Hz  linear phase %d\n", to_string(r->method), g.fg, g.bandwidth,
                    r->linear_phase_slope);
    }
    std::printf("max-phase distance CC vs ZZT: %.2e\n", aligned_relative_rms(zz.max_phase, cc.max_phase));

    // first samples of the anticausal component, n = -8 .. 0
    for (double v : cc.max_phase_window(8, 0)) std::printf("%+.4f ", v);
    std::printf("\n");
}
