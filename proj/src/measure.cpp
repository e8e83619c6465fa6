#include "cforge/measure.hpp"

#include <cmath>

namespace cforge::measure {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError({msg});
}

// Trapezoid weights on a uniform grid: full sum minus half of each endpoint,
// divided by the interval count.
double trapezoid_mean(std::span<const double> x) {
    const auto& ops = kernels::active_ops();
    const double s = ops.sum(x.data(), x.size());
    const double n = static_cast<double>(x.size() - 1);
    return (s - 0.5 * (x.front() + x.back())) / n;
}

}  // namespace

SignalStats stats(std::span<const double> x) {
    require(x.size() >= 2, "stats: signal must span at least one interval");
    const auto& ops = kernels::active_ops();

    SignalStats st;
    st.mean = trapezoid_mean(x);
    const double sq = ops.dot(x.data(), x.data(), x.size());
    const double n = static_cast<double>(x.size() - 1);
    const double ms =
        (sq - 0.5 * (x.front() * x.front() + x.back() * x.back())) / n;
    st.rms = std::sqrt(std::max(ms, 0.0));
    ops.minmax(x.data(), x.size(), &st.min, &st.max);
    st.peak_to_peak = st.max - st.min;
    return st;
}

double average_power(std::span<const double> v, std::span<const double> i) {
    require(v.size() == i.size(), "average_power: signal lengths differ");
    require(v.size() >= 2, "average_power: signals must span at least one interval");
    const auto& ops = kernels::active_ops();
    const double s = ops.dot(v.data(), i.data(), v.size());
    const double n = static_cast<double>(v.size() - 1);
    return (s - 0.5 * (v.front() * i.front() + v.back() * i.back())) / n;
}

double power_factor(std::span<const double> v, std::span<const double> i) {
    const SignalStats sv = stats(v);
    const SignalStats si = stats(i);
    require(sv.rms > 0 && si.rms > 0, "power_factor: zero-RMS signal");
    const double pf = std::abs(average_power(v, i)) / (sv.rms * si.rms);
    return std::min(pf, 1.0);
}

}  // namespace cforge::measure
