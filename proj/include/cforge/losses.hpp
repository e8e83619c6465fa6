#pragma once

// Conduction-loss models and efficiency. Formulas follow the inverting-stage
// derivation (rectangular switch/diode currents, ripple-free inductor); they
// are applied per element to SEPIC stages as well, which is a documented
// approximation.

#include <vector>

#include "cforge/quantities.hpp"

namespace cforge::losses {

struct LossBreakdown {
    double inductor_loss = 0.0;          // P_L, watts
    double switch_conduction_loss = 0.0; // P_RDS, watts
    double capacitor_loss = 0.0;         // P_C, watts
    double diode_loss = 0.0;             // P_D, watts
    double other_losses = 0.0;           // constant switching-loss adder, watts

    double total() const {
        return inductor_loss + switch_conduction_loss + capacitor_loss + diode_loss +
               other_losses;
    }
};

/// P_L = r_L Io^2 / (1-D)^2 (inductor carries Io/(1-D) on average).
double inductor_conduction_loss(double r_l, double io, double duty);

/// I_sw,rms = sqrt(D) Io / (1-D).
double switch_rms_current(double io, double duty);

/// P_RDS = D R_DS Io^2 / (1-D)^2 = R_DS * I_sw,rms^2.
double mosfet_conduction_loss(double r_ds, double io, double duty);

/// I_C,rms = Io sqrt(D / (1-D)).
double capacitor_rms_current(double io, double duty);

/// P_C = D r_C Io^2 / (1-D). Negative r_C is rejected: passive components
/// dissipate.
double capacitor_loss(double r_c, double io, double duty);

/// I_D,rms = Io / sqrt(1-D).
double diode_rms_current(double io, double duty);

/// P_D = Vf Io + Rf Io^2 / (1-D); the average diode current is exactly Io.
double diode_loss(double v_f, double r_f, double io, double duty);

/// r_C = |dVo_esr| / di_C. Magnitudes only.
double esr_from_ripple(double dvo_esr, double di_c);

/// Inductor ESR from an assumed fractional voltage drop across the stage:
/// r_L = drop_frac * (Vs - Vo) / I_L (Vo signed).
double inductor_esr_from_drop(double vs, double vo, double i_l_avg,
                              double drop_frac = 0.01);

/// eta = P_out / (P_out + total losses), in (0, 1] for non-negative losses.
double efficiency(double p_out, const LossBreakdown& breakdown);

/// Per-stage breakdown from a parasitic set. SEPIC stages sum both inductor
/// and both capacitor contributions (the coupling capacitor's RMS current
/// has the same closed form as the output capacitor's).
LossBreakdown stage_loss_breakdown(const ParasiticSet& parasitics, Topology topology,
                                   double io, double duty);

struct StagePower {
    double p_in = 0.0;
    double p_out = 0.0;
};

struct PowerRatio {
    double ratio = 0.0;  // P_out / P_in, reported raw, never clamped
    bool feasible = false;  // ratio <= 1
};

/// Raw per-stage power ratios; ratio > 1 marks the stage spec infeasible
/// instead of clamping (a clamped "efficiency of 1" would hide the
/// inconsistency).
std::vector<PowerRatio> chain_power_ratios(const std::vector<StagePower>& stage_powers);

struct ScenarioParameters {
    double i_s = 0.0;  // source current, amperes
    double r = 0.0;    // load resistance delivering P_in at ideal conversion, ohms
};

/// Reduced-input-power scenario: I_s = P_in / Vs and R = Vo^2 / P_in.
ScenarioParameters scenario_stage_parameters(double p_in, double vs, double vo);

}  // namespace cforge::losses
