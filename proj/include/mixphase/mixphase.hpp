#pragma once

#include "mixphase/analysis.hpp"
#include "mixphase/cepstrum.hpp"
#include "mixphase/csv.hpp"
#include "mixphase/error.hpp"
#include "mixphase/experiments.hpp"
#include "mixphase/fft.hpp"
#include "mixphase/framing.hpp"
#include "mixphase/glottal_synth.hpp"
#include "mixphase/markers.hpp"
#include "mixphase/metrics.hpp"
#include "mixphase/parallel.hpp"
#include "mixphase/wav.hpp"
#include "mixphase/zzt.hpp"
