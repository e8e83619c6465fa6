#include "cforge/cascade.hpp"

#include <cmath>
#include <sstream>

namespace cforge::cascade {

CascadeDesign compose(const std::vector<StageSpec>& specs,
                      const std::vector<ParasiticSet>& parasitics,
                      const std::vector<sizing::DesignOptions>& options) {
    if (specs.empty()) throw ValidationError({"stages: list must be non-empty"});

    CascadeDesign cd;
    cd.stages.reserve(specs.size());
    for (std::size_t k = 0; k < specs.size(); ++k) {
        CascadeStage st;
        st.spec = validate_spec(specs[k]);
        if (k > 0) {
            const double upstream = std::abs(specs[k - 1].output_voltage);
            const double rel =
                std::abs(st.spec.source_voltage - upstream) / upstream;
            if (rel > 1e-9) {
                std::ostringstream os;
                os << "stages[" << k + 1 << "].vs_volts: chain mismatch, source "
                   << st.spec.source_voltage << " V does not equal upstream output "
                   << upstream << " V";
                throw ValidationError({os.str()});
            }
        }
        if (k < parasitics.size()) st.parasitics = validate_parasitics(parasitics[k]);
        if (k < options.size()) st.design_options = options[k];
        st.design = sizing::design_stage(st.spec, st.design_options);
        cd.stages.push_back(std::move(st));
    }
    return cd;
}

namespace {

StageReport evaluate_stage(const CascadeStage& st, const sim::SimConfig& cfg) {
    StageReport r;
    const auto circ = circuit::build_stage_circuit(st.design, st.spec, st.parasitics);
    r.sim = sim::run_to_steady_state(circ, cfg);

    const auto& w = r.sim.waveforms;
    for (const auto& s : w.signals)
        r.stats.emplace_back(s.name, measure::stats(s.samples));

    if (w.has_signal("p_sw")) {
        const auto& vsw = w.signal("v_sw").samples;
        const auto& isw = w.signal("i_sw").samples;
        r.switch_power = measure::average_power(vsw, isw);
        const auto si = measure::stats(isw);
        const auto sv = measure::stats(vsw);
        r.switch_power_factor =
            (si.rms > 0 && sv.rms > 0) ? measure::power_factor(vsw, isw) : 0.0;
    }
    if (w.has_signal("v_out") && w.has_signal("i_out")) {
        r.p_out_measured = std::abs(
            measure::average_power(w.signal("v_out").samples, w.signal("i_out").samples));
    }

    r.loss = losses::stage_loss_breakdown(st.parasitics, st.spec.topology,
                                          st.spec.output_current, st.design.duty);
    const double p_out_spec =
        std::abs(st.spec.output_voltage) * st.spec.output_current;
    r.efficiency = losses::efficiency(p_out_spec, r.loss);
    return r;
}

}  // namespace

CascadeReport evaluate(const CascadeDesign& cascade, const sim::SimConfig& cfg) {
    if (cascade.stages.empty()) throw ValidationError({"cascade: no stages"});

    CascadeReport rep;
    for (const auto& st : cascade.stages) rep.stages.push_back(evaluate_stage(st, cfg));

    double upstream_p_out = 0.0;
    for (std::size_t k = 0; k < cascade.stages.size(); ++k) {
        const StageSpec& spec = cascade.stages[k].spec;
        losses::StagePower sp;
        sp.p_out = std::abs(spec.output_voltage) * spec.output_current;
        if (spec.source_current) {
            sp.p_in = spec.source_voltage * *spec.source_current;
        } else if (k > 0) {
            sp.p_in = upstream_p_out;
        } else {
            // Without a stated source capability the first stage has no
            // independent input power; report the trivial ratio.
            sp.p_in = sp.p_out;
        }
        upstream_p_out = sp.p_out;
        rep.powers.push_back(sp);
    }
    rep.ratios = losses::chain_power_ratios(rep.powers);
    return rep;
}

}  // namespace cforge::cascade
