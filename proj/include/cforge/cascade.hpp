#pragma once

// Composition and evaluation of a multi-stage chain. Stages couple through
// ideal sources: stage n+1 is driven by an ideal source at stage n's
// specified output voltage, so stage evaluations are independent.

#include <vector>

#include "cforge/losses.hpp"
#include "cforge/measure.hpp"
#include "cforge/simulator.hpp"
#include "cforge/sizing.hpp"

namespace cforge::cascade {

struct CascadeStage {
    StageSpec spec;
    DesignResult design;
    ParasiticSet parasitics;
    sizing::DesignOptions design_options;
};

struct CascadeDesign {
    std::vector<CascadeStage> stages;
};

/// Designs every stage and verifies voltage chaining: stage k's source must
/// equal |stage k-1's output|. Parasitics default to the ideal set when the
/// list is shorter than the spec list.
CascadeDesign compose(const std::vector<StageSpec>& specs,
                      const std::vector<ParasiticSet>& parasitics = {},
                      const std::vector<sizing::DesignOptions>& options = {});

struct StageReport {
    sim::SimResult sim;
    std::vector<std::pair<std::string, measure::SignalStats>> stats;
    double switch_power = 0.0;        // average p_sw over the final cycle, watts
    double switch_power_factor = 0.0; // PF of (v_sw, i_sw)
    losses::LossBreakdown loss;
    double efficiency = 0.0;          // from the closed-form breakdown
    double p_out_measured = 0.0;      // average v_out*i_out, watts
};

struct CascadeReport {
    std::vector<StageReport> stages;
    std::vector<losses::StagePower> powers;   // specified stage powers
    std::vector<losses::PowerRatio> ratios;   // raw, infeasible stages flagged
};

/// Simulates each stage independently, measures its waveforms, computes the
/// closed-form loss breakdown, and reports chain power ratios from the
/// specified stage powers (P_in = Vs*Is where a source current is specified,
/// otherwise the previous stage's specified output power; P_out = |Vo|*Io).
CascadeReport evaluate(const CascadeDesign& cascade, const sim::SimConfig& cfg);

}  // namespace cforge::cascade
