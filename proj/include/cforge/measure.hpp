#pragma once

// Waveform statistics over one period: time-weighted mean and RMS
// (trapezoidal quadrature on the uniform grid, both endpoints included),
// sample-extrema ripple, average power and power factor.

#include <span>

#include "cforge/simulator.hpp"

namespace cforge::measure {

struct SignalStats {
    double mean = 0.0;
    double rms = 0.0;
    double peak_to_peak = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Stats over exactly one period of a uniformly sampled signal that includes
/// both period endpoints. Throws on signals shorter than two samples.
SignalStats stats(std::span<const double> signal);

/// Time-average of v(t)*i(t) over the period (trapezoidal).
double average_power(std::span<const double> v, std::span<const double> i);

/// |average power| / (v_rms * i_rms), in [0,1] by Cauchy-Schwarz. Throws when
/// either RMS is zero.
double power_factor(std::span<const double> v, std::span<const double> i);

}  // namespace cforge::measure
