#pragma once

// Fixed-step transient integration of a SwitchedCircuit through its gate
// schedule to periodic steady state. Classical 4th-order one-step
// integration; gate edges snap to the step grid, diode commutation inside a
// gate-off step is located by bisection to within dt/1024.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cforge/circuit.hpp"

namespace cforge::sim {

using circuit::ConfigId;
using circuit::SwitchedCircuit;
using kernels::Vec4;

enum class ConductionMode { CCM, DCM };

inline const char* conduction_mode_name(ConductionMode m) {
    return m == ConductionMode::CCM ? "CCM" : "DCM";
}

struct SimConfig {
    int steps_per_period = 2000;       // >= 100; default gives dt = 5 ns at 100 kHz
    int max_cycles = 20000;
    double steady_state_tol = 1e-6;    // relative cycle-to-cycle state change
    std::vector<std::string> record;   // empty = record every available signal
};

void validate_sim_config(const SimConfig& cfg);

struct Signal {
    std::string name;
    std::string unit;
    std::vector<double> samples;
};

/// Uniformly sampled signals over the recorded cycles; samples include both
/// endpoints of each period (steps_per_period + 1 per recorded cycle, with
/// shared boundaries when consecutive cycles are recorded).
struct WaveformSet {
    double dt = 0.0;
    std::vector<Signal> signals;
    std::vector<std::size_t> cycle_boundaries;  // sample index of each period start

    const Signal& signal(const std::string& name) const;
    bool has_signal(const std::string& name) const;
    std::size_t n_samples() const { return signals.empty() ? 0 : signals[0].samples.size(); }
};

struct SimResult {
    WaveformSet waveforms;  // final cycle (or full transient when requested)
    Vec4 final_state{};
    int cycles_run = 0;
    bool converged = false;
    ConductionMode conduction_mode = ConductionMode::CCM;
};

/// Thrown when the state stops being finite; carries the simulated time.
class SimDivergence : public std::runtime_error {
public:
    SimDivergence(double t, const std::string& what);
    double time() const { return t_; }

private:
    double t_;
};

/// Gate command: on for t mod T in [0, D*T), off otherwise.
bool duty_schedule(double duty, double period, double t);

/// Advances the state one fixed step under the given configuration. For the
/// diode-conducting configuration, a zero crossing of the diode current
/// inside the step is located by bisection and the remainder of the step is
/// integrated in the idle configuration. Returns the configuration in force
/// at the end of the step.
ConfigId step(const SwitchedCircuit& c, Vec4& x, ConfigId active, double dt);

/// Integrates whole periods from zero initial state until the max-norm
/// relative state change at period boundaries drops below the tolerance (or
/// max_cycles is hit; the result is then flagged unconverged). The returned
/// waveforms cover exactly the final cycle.
SimResult run_to_steady_state(const SwitchedCircuit& c, const SimConfig& cfg);

/// Start-up transient from rest: records every cycle from t = 0 up to
/// cycle_limit cycles (no steady-state stopping criterion).
SimResult run_transient(const SwitchedCircuit& c, const SimConfig& cfg, int cycle_limit);

/// Writes the waveform set as CSV: first column t in seconds, one column per
/// signal, header row carries names with units in parentheses.
void write_csv(std::ostream& os, const WaveformSet& w);

}  // namespace cforge::sim
