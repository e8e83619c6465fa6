#pragma once

// Piecewise-affine state-space models of one converter stage: one affine
// system x' = A x + b per switch/diode configuration, plus the rules that
// pick the active configuration.
//
// State vectors (padded to 4 lanes for the kernels):
//   SEPIC:               [i_L1, i_L2, v_C1, v_C2]
//   inverting buck-boost: [i_L, v_C, 0, 0]
//
// Sign conventions: i_L1 flows from the source into the switch node; i_L2
// flows up from ground into the coupling node, so the switch carries
// i_L1 + i_L2 when closed and the diode carries i_L1 + i_L2 when it
// conducts. Capacitor states are the internal voltages behind their ESR.
// The inverting stage's output is reported as negative volts.

#include <array>
#include <string>

#include "cforge/kernels.hpp"
#include "cforge/quantities.hpp"

namespace cforge::circuit {

using kernels::Mat4;
using kernels::Vec4;

enum class ConfigId {
    GateOn,          // switch conducting, diode blocking
    GateOffDiodeOn,  // switch open, diode conducting
    GateOffIdle,     // switch open, diode blocking (DCM idle)
};

const char* config_name(ConfigId id);

struct Configuration {
    ConfigId id = ConfigId::GateOn;
    bool gate_on = false;
    bool diode_conducting = false;
    Mat4 a;   // 1/seconds
    Vec4 b{}; // state-units/second, source and diode-drop terms folded in
};

/// Branch quantities derived from the state under one configuration.
struct BranchQuantities {
    double i_sw = 0.0;     // switch current, amperes
    double i_d = 0.0;      // diode current, amperes
    double i_c_out = 0.0;  // output capacitor current (into the capacitor), amperes
    double v_out = 0.0;    // load voltage (after output-cap ESR), volts
    double i_out = 0.0;    // load current v_out / R, amperes
    double v_sw = 0.0;     // voltage across the switch, volts
    double p_sw = 0.0;     // instantaneous switch power, watts
    double i_src = 0.0;    // source current, amperes
    double v_l1 = 0.0;     // voltage across L1 (or the single L), volts
    double v_l2 = 0.0;     // voltage across L2 (SEPIC only), volts
    double i_c1 = 0.0;     // coupling capacitor current (SEPIC only), amperes
};

struct SwitchedCircuit {
    Topology topology = Topology::Sepic;
    int n_states = 0;
    std::array<std::string, 4> state_labels;

    Configuration gate_on;
    Configuration gate_off_diode_on;
    Configuration gate_off_idle;

    ParasiticSet parasitics;
    double duty = 0.0;
    double period = 0.0;
    double source_voltage = 0.0;
    double load_resistance = 0.0;

    // Component values, for output maps and stored-energy audits.
    double l1 = 0.0, l2 = 0.0, c1 = 0.0, c2 = 0.0;

    const Configuration& config(ConfigId id) const {
        switch (id) {
            case ConfigId::GateOn: return gate_on;
            case ConfigId::GateOffDiodeOn: return gate_off_diode_on;
            case ConfigId::GateOffIdle: return gate_off_idle;
        }
        return gate_on;
    }

    /// Stored energy sum(L i^2 + C v^2)/2, for conservation audits.
    double stored_energy(const Vec4& x) const;

    /// Diode current the diode-on configuration would carry for this state;
    /// its sign drives commutation.
    double diode_current_if_conducting(const Vec4& x) const;
};

/// Builds the three-configuration circuit for a sized stage. The diode is an
/// ideal threshold switch in series with Vf and Rf; capacitor ESRs sit in
/// series with each capacitor so the ESR step is visible in v_out.
SwitchedCircuit build_stage_circuit(const DesignResult& design, const StageSpec& spec,
                                    const ParasiticSet& parasitics);

/// KCL-derived branch quantities for a state under a given configuration.
BranchQuantities branch_currents(const SwitchedCircuit& c, const Vec4& x, ConfigId id);

/// Deterministic configuration choice: gate on always selects GateOn; gate
/// off selects GateOffDiodeOn when the diode would carry positive current,
/// GateOffIdle otherwise.
ConfigId configuration_transition(const SwitchedCircuit& c, const Vec4& x, bool gate);

}  // namespace cforge::circuit
