#include "cforge/losses.hpp"

#include <cmath>

namespace cforge::losses {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError({msg});
}

void require_io_duty(double io, double duty, const char* who) {
    if (!(io > 0)) throw ValidationError({std::string(who) + ": Io must be > 0"});
    if (!(duty > 0 && duty < 1))
        throw ValidationError({std::string(who) + ": duty must be in (0,1)"});
}

}  // namespace

double inductor_conduction_loss(double r_l, double io, double duty) {
    require(r_l >= 0, "inductor_conduction_loss: r_L must be >= 0");
    require_io_duty(io, duty, "inductor_conduction_loss");
    const double om = 1.0 - duty;
    return r_l * io * io / (om * om);
}

double switch_rms_current(double io, double duty) {
    require_io_duty(io, duty, "switch_rms_current");
    return std::sqrt(duty) * io / (1.0 - duty);
}

double mosfet_conduction_loss(double r_ds, double io, double duty) {
    require(r_ds >= 0, "mosfet_conduction_loss: R_DS must be >= 0");
    require_io_duty(io, duty, "mosfet_conduction_loss");
    const double om = 1.0 - duty;
    return duty * r_ds * io * io / (om * om);
}

double capacitor_rms_current(double io, double duty) {
    require_io_duty(io, duty, "capacitor_rms_current");
    return io * std::sqrt(duty / (1.0 - duty));
}

double capacitor_loss(double r_c, double io, double duty) {
    require(r_c >= 0, "capacitor_loss: r_C must be >= 0 (passive components dissipate)");
    require_io_duty(io, duty, "capacitor_loss");
    return duty * r_c * io * io / (1.0 - duty);
}

double diode_rms_current(double io, double duty) {
    require_io_duty(io, duty, "diode_rms_current");
    return io / std::sqrt(1.0 - duty);
}

double diode_loss(double v_f, double r_f, double io, double duty) {
    require(v_f >= 0, "diode_loss: Vf must be >= 0");
    require(r_f >= 0, "diode_loss: Rf must be >= 0");
    require_io_duty(io, duty, "diode_loss");
    return v_f * io + r_f * io * io / (1.0 - duty);
}

double esr_from_ripple(double dvo_esr, double di_c) {
    require(di_c > 0, "esr_from_ripple: capacitor current swing must be > 0");
    return std::abs(dvo_esr) / di_c;
}

double inductor_esr_from_drop(double vs, double vo, double i_l_avg, double drop_frac) {
    require(i_l_avg > 0, "inductor_esr_from_drop: average inductor current must be > 0");
    require(drop_frac > 0, "inductor_esr_from_drop: drop fraction must be > 0");
    return drop_frac * std::abs(vs - vo) / i_l_avg;
}

double efficiency(double p_out, const LossBreakdown& breakdown) {
    require(p_out > 0, "efficiency: P_out must be > 0");
    require(breakdown.total() >= 0, "efficiency: total losses must be >= 0");
    return p_out / (p_out + breakdown.total());
}

LossBreakdown stage_loss_breakdown(const ParasiticSet& raw, Topology topology, double io,
                                   double duty) {
    const ParasiticSet p = validate_parasitics(raw);
    require_io_duty(io, duty, "stage_loss_breakdown");

    LossBreakdown b;
    b.switch_conduction_loss = mosfet_conduction_loss(p.switch_on_resistance, io, duty);
    b.diode_loss = diode_loss(p.diode_forward_voltage, p.diode_series_resistance, io, duty);
    b.other_losses = p.constant_switching_loss;

    if (topology == Topology::Sepic) {
        // L1 carries the input current Io D/(1-D), L2 carries Io; the
        // coupling capacitor's RMS current matches the output capacitor's
        // closed form, so both capacitors contribute equally.
        const double i_l1 = io * duty / (1.0 - duty);
        b.inductor_loss = p.inductor_esr * (i_l1 * i_l1 + io * io);
        b.capacitor_loss = 2.0 * capacitor_loss(p.capacitor_esr, io, duty);
    } else {
        b.inductor_loss = inductor_conduction_loss(p.inductor_esr, io, duty);
        b.capacitor_loss = capacitor_loss(p.capacitor_esr, io, duty);
    }
    return b;
}

std::vector<PowerRatio> chain_power_ratios(const std::vector<StagePower>& stage_powers) {
    std::vector<PowerRatio> out;
    out.reserve(stage_powers.size());
    for (const auto& sp : stage_powers) {
        require(sp.p_in > 0, "chain_power_ratios: P_in must be > 0");
        require(sp.p_out > 0, "chain_power_ratios: P_out must be > 0");
        PowerRatio r;
        r.ratio = sp.p_out / sp.p_in;
        r.feasible = r.ratio <= 1.0;
        out.push_back(r);
    }
    return out;
}

ScenarioParameters scenario_stage_parameters(double p_in, double vs, double vo) {
    require(p_in > 0, "scenario_stage_parameters: P_in must be > 0");
    require(vs > 0, "scenario_stage_parameters: Vs must be > 0");
    require(vo != 0, "scenario_stage_parameters: Vo must be nonzero");
    ScenarioParameters s;
    s.i_s = p_in / vs;
    s.r = vo * vo / p_in;
    return s;
}

}  // namespace cforge::losses
