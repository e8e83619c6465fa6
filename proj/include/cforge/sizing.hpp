#pragma once

// Closed-form component sizing for SEPIC and inverting buck-boost stages.

#include <utility>

#include "cforge/quantities.hpp"

namespace cforge::sizing {

inline constexpr double kDefaultContinuityMargin = 1.25;

/// D = Vo / (Vo + Vs) for a SEPIC stage. Requires Vs > 0, Vo > 0.
double sepic_duty_cycle(double vs, double vo);

/// D = |Vo| / (|Vo| + Vs) for the inverting stage. Requires Vs > 0, Vo < 0.
double inverting_duty_cycle(double vs, double vo);

/// Continuous-conduction bounds: L1_min = (1-D)^2 R / (2 D f),
/// L2_min = (1-D) R / (2 f).
std::pair<double, double> sepic_min_inductances(double duty, double load_resistance,
                                                double frequency);

/// C1 = D Vo / (R dVc1 f) and C2 = D Vo / (R dVo f) with ABSOLUTE ripple
/// budgets in volts. Either budget may be passed alone by giving the other a
/// positive placeholder and ignoring that output.
std::pair<double, double> sepic_capacitances(double duty, double vo, double load_resistance,
                                             double dvc1_abs, double dvo_abs,
                                             double frequency);

/// L_min = (1-D)^2 R / (2 f).
double buckboost_min_inductance(double duty, double load_resistance, double frequency);

/// C = D / (R ripple_frac f).
double buckboost_capacitance(double duty, double load_resistance, double ripple_frac,
                             double frequency);

/// Scales a continuous-conduction bound by the selection margin (default 25%
/// above the bound). Requires factor >= 1.
double apply_continuity_margin(double l_min, double factor = kDefaultContinuityMargin);

/// Average inductor current and its ripple envelope for the inverting stage:
/// I_L = Vs D / (R (1-D)^2), I_max/min = I_L +- Vs D T / (2 L).
/// i_min <= 0 is reported through CurrentBounds::ccm(), not as an error.
CurrentBounds buckboost_current_bounds(double vs, double duty, double period,
                                       double load_resistance, double inductance);

struct DesignOptions {
    double continuity_margin = kDefaultContinuityMargin;
    // Overrides for sweeps: replace the computed duty, or the margin applied
    // to every L_min.
    std::optional<double> duty_override;
};

/// Full per-stage sizing: duty, period, load resistance, margined inductors,
/// capacitors with their absolute ripple budgets, and (inverting stage)
/// current bounds.
DesignResult design_stage(const StageSpec& spec, const DesignOptions& opts = {});

}  // namespace cforge::sizing
