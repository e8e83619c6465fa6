#include "cforge/quantities.hpp"

#include <cmath>
#include <sstream>

namespace cforge {

const char* topology_name(Topology t) {
    switch (t) {
        case Topology::Sepic: return "sepic";
        case Topology::InvertingBuckBoost: return "inverting_buck_boost";
    }
    return "?";
}

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::ostringstream os;
    os << "invalid specification:";
    for (const auto& m : v) os << "\n  - " << m;
    return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

StageSpec validate_spec(const StageSpec& spec) {
    std::vector<std::string> bad;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };

    require(std::isfinite(spec.source_voltage) && spec.source_voltage > 0,
            "source_voltage: must be > 0");
    require(std::isfinite(spec.output_current) && spec.output_current > 0,
            "output_current: must be > 0");
    require(std::isfinite(spec.switching_frequency) && spec.switching_frequency > 0,
            "switching_frequency: must be > 0");
    require(std::isfinite(spec.output_voltage) && spec.output_voltage != 0,
            "output_voltage: must be nonzero");

    if (spec.topology == Topology::Sepic) {
        require(spec.output_voltage > 0,
                "output_voltage: SEPIC has no polarity reversal, Vo must be > 0");
        require(spec.coupling_cap_ripple_frac > 0 && spec.coupling_cap_ripple_frac < 1,
                "coupling_cap_ripple_frac: must be in (0, 1)");
    } else {
        require(spec.output_voltage < 0,
                "output_voltage: inverting buck-boost reverses polarity, Vo must be < 0");
    }
    require(spec.output_ripple_frac > 0 && spec.output_ripple_frac < 1,
            "output_ripple_frac: must be in (0, 1)");
    if (spec.source_current)
        require(*spec.source_current > 0, "source_current: must be > 0 when given");

    if (!bad.empty()) throw ValidationError(std::move(bad));
    return spec;
}

ParasiticSet validate_parasitics(const ParasiticSet& p) {
    std::vector<std::string> bad;
    auto require = [&](double v, const char* field) {
        if (!(std::isfinite(v) && v >= 0))
            bad.push_back(std::string(field) + ": must be >= 0");
    };
    require(p.inductor_esr, "r_l_ohms");
    require(p.switch_on_resistance, "r_ds_ohms");
    require(p.capacitor_esr, "r_c_ohms");
    require(p.diode_forward_voltage, "v_f_volts");
    require(p.diode_series_resistance, "r_f_ohms");
    require(p.constant_switching_loss, "switching_loss_watts");
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return p;
}

}  // namespace cforge
