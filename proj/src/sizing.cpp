#include "cforge/sizing.hpp"

#include <cmath>

namespace cforge::sizing {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError({msg});
}

}  // namespace

double sepic_duty_cycle(double vs, double vo) {
    require(vs > 0, "sepic_duty_cycle: Vs must be > 0");
    require(vo > 0, "sepic_duty_cycle: Vo must be > 0");
    return vo / (vo + vs);
}

double inverting_duty_cycle(double vs, double vo) {
    require(vs > 0, "inverting_duty_cycle: Vs must be > 0");
    require(vo < 0, "inverting_duty_cycle: Vo must be < 0 (polarity reversal)");
    const double mag = -vo;
    return mag / (mag + vs);
}

std::pair<double, double> sepic_min_inductances(double duty, double load_resistance,
                                                double frequency) {
    require(duty > 0 && duty < 1, "sepic_min_inductances: duty must be in (0,1)");
    require(load_resistance > 0, "sepic_min_inductances: R must be > 0");
    require(frequency > 0, "sepic_min_inductances: f must be > 0");
    const double om = 1.0 - duty;
    const double l1 = om * om * load_resistance / (2.0 * duty * frequency);
    const double l2 = om * load_resistance / (2.0 * frequency);
    return {l1, l2};
}

std::pair<double, double> sepic_capacitances(double duty, double vo, double load_resistance,
                                             double dvc1_abs, double dvo_abs,
                                             double frequency) {
    require(duty > 0 && duty < 1, "sepic_capacitances: duty must be in (0,1)");
    require(vo > 0, "sepic_capacitances: Vo must be > 0");
    require(load_resistance > 0, "sepic_capacitances: R must be > 0");
    require(frequency > 0, "sepic_capacitances: f must be > 0");
    require(dvc1_abs > 0, "sepic_capacitances: coupling ripple budget must be > 0");
    require(dvo_abs > 0, "sepic_capacitances: output ripple budget must be > 0");
    const double num = duty * vo;
    const double c1 = num / (load_resistance * dvc1_abs * frequency);
    const double c2 = num / (load_resistance * dvo_abs * frequency);
    return {c1, c2};
}

double buckboost_min_inductance(double duty, double load_resistance, double frequency) {
    require(duty > 0 && duty < 1, "buckboost_min_inductance: duty must be in (0,1)");
    require(load_resistance > 0, "buckboost_min_inductance: R must be > 0");
    require(frequency > 0, "buckboost_min_inductance: f must be > 0");
    const double om = 1.0 - duty;
    return om * om * load_resistance / (2.0 * frequency);
}

double buckboost_capacitance(double duty, double load_resistance, double ripple_frac,
                             double frequency) {
    require(duty > 0 && duty < 1, "buckboost_capacitance: duty must be in (0,1)");
    require(load_resistance > 0, "buckboost_capacitance: R must be > 0");
    require(ripple_frac > 0, "buckboost_capacitance: ripple fraction must be > 0");
    require(frequency > 0, "buckboost_capacitance: f must be > 0");
    return duty / (load_resistance * ripple_frac * frequency);
}

double apply_continuity_margin(double l_min, double factor) {
    require(l_min > 0, "apply_continuity_margin: L_min must be > 0");
    require(factor >= 1.0, "apply_continuity_margin: factor must be >= 1");
    return factor * l_min;
}

CurrentBounds buckboost_current_bounds(double vs, double duty, double period,
                                       double load_resistance, double inductance) {
    require(vs > 0, "buckboost_current_bounds: Vs must be > 0");
    require(duty > 0 && duty < 1, "buckboost_current_bounds: duty must be in (0,1)");
    require(period > 0, "buckboost_current_bounds: T must be > 0");
    require(load_resistance > 0, "buckboost_current_bounds: R must be > 0");
    require(inductance > 0, "buckboost_current_bounds: L must be > 0");
    const double om = 1.0 - duty;
    CurrentBounds b;
    b.i_l_avg = vs * duty / (load_resistance * om * om);
    const double half_ripple = vs * duty * period / (2.0 * inductance);
    b.i_max = b.i_l_avg + half_ripple;
    b.i_min = b.i_l_avg - half_ripple;
    return b;
}

DesignResult design_stage(const StageSpec& raw, const DesignOptions& opts) {
    const StageSpec spec = validate_spec(raw);

    DesignResult d;
    d.topology = spec.topology;
    d.period = spec.period();
    d.load_resistance = spec.load_resistance();

    const double vs = spec.source_voltage;
    const double vo = spec.output_voltage;
    const double f = spec.switching_frequency;
    const double r = d.load_resistance;

    if (spec.topology == Topology::Sepic) {
        d.duty = opts.duty_override.value_or(sepic_duty_cycle(vs, vo));
        auto [l1_min, l2_min] = sepic_min_inductances(d.duty, r, f);
        d.inductances = {
            {"L1", l1_min, apply_continuity_margin(l1_min, opts.continuity_margin)},
            {"L2", l2_min, apply_continuity_margin(l2_min, opts.continuity_margin)},
        };
        // Absolute budgets: the coupling budget is a fraction of the
        // coupling capacitor's average voltage, taken as Vs - Vo; the output
        // budget is a fraction of Vo.
        const double dvc1 = spec.coupling_cap_ripple_frac * std::abs(vs - vo);
        require(dvc1 > 0,
                "coupling_cap_ripple_frac: coupling ripple budget is zero (Vs == Vo)");
        const double dvo = spec.output_ripple_frac * vo;
        auto [c1, c2] = sepic_capacitances(d.duty, vo, r, dvc1, dvo, f);
        d.capacitances = {{"C1", c1, dvc1}, {"C2", c2, dvo}};
    } else {
        d.duty = opts.duty_override.value_or(inverting_duty_cycle(vs, vo));
        const double l_min = buckboost_min_inductance(d.duty, r, f);
        const double l_sel = apply_continuity_margin(l_min, opts.continuity_margin);
        d.inductances = {{"L", l_min, l_sel}};
        const double c = buckboost_capacitance(d.duty, r, spec.output_ripple_frac, f);
        d.capacitances = {{"C", c, spec.output_ripple_frac * std::abs(vo)}};
        d.current_bounds = buckboost_current_bounds(vs, d.duty, d.period, r, l_sel);
    }
    return d;
}

}  // namespace cforge::sizing
