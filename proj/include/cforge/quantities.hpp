#pragma once

// Domain types shared by the sizing, losses, circuit, simulator and cascade
// modules. Everything is stored in SI base units (V, A, H, F, s, Hz); pretty
// formatting (uH, uF) lives in the CLI layer only.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cforge {

enum class Topology {
    Sepic,
    InvertingBuckBoost,
};

const char* topology_name(Topology t);

/// Thrown when a spec or design violates one of its invariants. Collects one
/// message per violated field so the CLI can report them all at once.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Electrical requirements of a single converter stage.
struct StageSpec {
    Topology topology = Topology::Sepic;
    double source_voltage = 0.0;   // Vs > 0
    double output_voltage = 0.0;   // Vo; negative only for the inverting stage
    double output_current = 0.0;   // Io > 0
    double switching_frequency = 0.0;  // f > 0

    // Ripple budgets as dimensionless fractions; absolute budgets are derived
    // at the use site (see sizing).
    double coupling_cap_ripple_frac = 0.0;  // SEPIC only, fraction of coupling-cap average voltage
    double output_ripple_frac = 0.0;        // fraction of |Vo|

    // Source current capability, when the operating point pins one (used for
    // chain power ratios; not a validated limit).
    std::optional<double> source_current;

    double load_resistance() const { return std::abs(output_voltage) / output_current; }
    double period() const { return 1.0 / switching_frequency; }
};

/// Validates every StageSpec invariant; returns the spec unchanged on
/// success, throws ValidationError listing each violated field otherwise.
/// Idempotent: validating a validated spec yields an identical value.
StageSpec validate_spec(const StageSpec& spec);

struct InductorDesign {
    std::string name;
    double l_min = 0.0;       // henries, continuous-conduction bound
    double l_selected = 0.0;  // henries, >= l_min
};

struct CapacitorDesign {
    std::string name;
    double capacitance = 0.0;        // farads
    double ripple_budget_abs = 0.0;  // volts
};

struct CurrentBounds {
    double i_l_avg = 0.0;
    double i_max = 0.0;
    double i_min = 0.0;  // <= 0 means the continuous-conduction bound is violated
    bool ccm() const { return i_min > 0.0; }
};

/// Output of the sizing module for one stage.
struct DesignResult {
    Topology topology = Topology::Sepic;
    double duty = 0.0;             // in (0,1)
    double period = 0.0;           // seconds
    double load_resistance = 0.0;  // ohms, |Vo|/Io
    std::vector<InductorDesign> inductances;
    std::vector<CapacitorDesign> capacitances;
    std::optional<CurrentBounds> current_bounds;
};

/// Non-ideal component parameters. The default-constructed instance is the
/// ideal (lossless) set.
struct ParasiticSet {
    double inductor_esr = 0.0;            // r_L, ohms, applied per inductor
    double switch_on_resistance = 0.0;    // R_DS(on), ohms
    double capacitor_esr = 0.0;           // r_C, ohms, applied per capacitor
    double diode_forward_voltage = 0.0;   // Vf, volts
    double diode_series_resistance = 0.0; // Rf, ohms
    double constant_switching_loss = 0.0; // watts, constant adder

    bool ideal() const {
        return inductor_esr == 0.0 && switch_on_resistance == 0.0 &&
               capacitor_esr == 0.0 && diode_forward_voltage == 0.0 &&
               diode_series_resistance == 0.0 && constant_switching_loss == 0.0;
    }
};

/// Rejects negative parasitic values.
ParasiticSet validate_parasitics(const ParasiticSet& p);

}  // namespace cforge
