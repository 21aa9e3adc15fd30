// Small version of the window-shape study: a few configurations, a coarse alpha axis.
#include <cstdio>

#include "mixphase/mixphase.hpp"

using namespace mixphase;

int main() {
    std::vector<GridConfig> configs;
    for (double f0 : {80.0, 140.0})
        for (double oq : {0.5, 0.7})
            for (Vowel v : kAllVowels) configs.push_back({f0, oq, 0.7, v});
    const auto corpus = build_corpus(configs);

    const SweepResult s = sweep_alpha(corpus, {0.5, 0.6, 0.72, 0.84, 1.0});
    std::printf("alpha  det_rate  sd_db\n");
    for (std::size_t i = 0; i < s.axis_values.size(); ++i)
        std::printf("%.2f   %.3f     %.2f\n", s.axis_values[i], s.det_rate[i], s.sd_mean[i]);
}
