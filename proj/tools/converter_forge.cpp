// converter-forge: design, verify and analyze multi-stage DC-DC converter
// chains (SEPIC / inverting buck-boost) from a JSON spec document.
//
// Exit codes: 0 success, 1 parse error, 2 validation/semantic error,
// 3 numerical non-convergence.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cforge/cascade.hpp"
#include "cforge/spec_io.hpp"

namespace {

using namespace cforge;

constexpr int kExitParse = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;

struct OutStream {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw io::ParseError("cannot open output file: " + path);
            os = &file;
        }
    }
};

std::string si_format(double value, const char* unit) {
    struct Scale {
        double factor;
        const char* prefix;
    };
    static const Scale scales[] = {{1e-6, "u"}, {1e-3, "m"}, {1.0, ""}, {1e3, "k"}};
    const double mag = std::abs(value);
    const Scale* best = &scales[2];
    for (const auto& s : scales)
        if (mag >= s.factor * 0.9999) best = &s;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g %s%s", value / best->factor, best->prefix, unit);
    return buf;
}

void emit_design(io::JsonWriter& w, int stage_no, const StageSpec& spec,
                 const DesignResult& d) {
    w.begin_object();
    w.key("stage").value(stage_no);
    w.key("topology").value(topology_name(spec.topology));
    w.key("duty").value(d.duty);
    w.key("period_s").value(d.period);
    w.key("load_resistance_ohms").value(d.load_resistance);
    w.key("inductors").begin_array();
    for (const auto& l : d.inductances) {
        w.begin_object();
        w.key("name").value(l.name);
        w.key("l_min_henries").value(l.l_min);
        w.key("l_selected_henries").value(l.l_selected);
        w.end_object();
    }
    w.end_array();
    w.key("capacitors").begin_array();
    for (const auto& c : d.capacitances) {
        w.begin_object();
        w.key("name").value(c.name);
        w.key("c_farads").value(c.capacitance);
        w.key("ripple_budget_volts").value(c.ripple_budget_abs);
        w.end_object();
    }
    w.end_array();
    if (d.current_bounds) {
        w.key("current_bounds").begin_object();
        w.key("i_l_avg_amperes").value(d.current_bounds->i_l_avg);
        w.key("i_max_amperes").value(d.current_bounds->i_max);
        w.key("i_min_amperes").value(d.current_bounds->i_min);
        w.key("ccm").value(d.current_bounds->ccm());
        w.end_object();
    }
    w.end_object();
}

void print_design_table(std::ostream& os, const io::SpecDocument& doc,
                        const std::vector<DesignResult>& designs) {
    for (std::size_t k = 0; k < designs.size(); ++k) {
        const auto& d = designs[k];
        const auto& spec = doc.stages[k].spec;
        os << "stage " << k + 1 << "  " << topology_name(spec.topology) << "  "
           << spec.source_voltage << " V -> " << spec.output_voltage << " V @ "
           << spec.output_current << " A\n";
        char line[128];
        std::snprintf(line, sizeof line, "  %-10s %.4f\n", "duty", d.duty);
        os << line;
        std::snprintf(line, sizeof line, "  %-10s %s\n", "R_load",
                      si_format(d.load_resistance, "Ohm").c_str());
        os << line;
        for (const auto& l : d.inductances) {
            std::snprintf(line, sizeof line, "  %-10s %-12s (min %s)\n", l.name.c_str(),
                          si_format(l.l_selected, "H").c_str(),
                          si_format(l.l_min, "H").c_str());
            os << line;
        }
        for (const auto& c : d.capacitances) {
            std::snprintf(line, sizeof line, "  %-10s %-12s (ripple budget %s)\n",
                          c.name.c_str(), si_format(c.capacitance, "F").c_str(),
                          si_format(c.ripple_budget_abs, "V").c_str());
            os << line;
        }
        if (d.current_bounds) {
            std::snprintf(line, sizeof line, "  %-10s avg %.4g A, %.4g .. %.4g A (%s)\n",
                          "I_L", d.current_bounds->i_l_avg, d.current_bounds->i_min,
                          d.current_bounds->i_max,
                          d.current_bounds->ccm() ? "CCM" : "DCM risk");
            os << line;
        }
    }
}

int cmd_design(const std::string& spec_path, const std::string& out_path, bool pretty) {
    const io::SpecDocument doc = io::load_spec_file(spec_path);
    std::vector<DesignResult> designs;
    for (const auto& st : doc.stages)
        designs.push_back(sizing::design_stage(st.spec, st.design_options));

    OutStream out(out_path);
    if (pretty) {
        print_design_table(*out.os, doc, designs);
        return 0;
    }
    io::JsonWriter w(*out.os);
    w.begin_object();
    w.key("stages").begin_array();
    for (std::size_t k = 0; k < designs.size(); ++k)
        emit_design(w, static_cast<int>(k) + 1, doc.stages[k].spec, designs[k]);
    w.end_array();
    w.end_object();
    w.finish();
    return 0;
}

const io::StageEntry& select_stage(const io::SpecDocument& doc, int stage) {
    if (stage < 1 || static_cast<std::size_t>(stage) > doc.stages.size())
        throw ValidationError({"--stage: index " + std::to_string(stage) +
                               " out of range (spec has " +
                               std::to_string(doc.stages.size()) + " stages)"});
    return doc.stages[static_cast<std::size_t>(stage) - 1];
}

void emit_sim_report(io::JsonWriter& w, int stage_no, const cascade::StageReport& r) {
    w.begin_object();
    w.key("stage").value(stage_no);
    w.key("converged").value(r.sim.converged);
    w.key("cycles_run").value(r.sim.cycles_run);
    w.key("conduction_mode").value(sim::conduction_mode_name(r.sim.conduction_mode));
    w.key("signals").begin_array();
    for (const auto& [name, st] : r.stats) {
        w.begin_object();
        w.key("signal").value(name);
        w.key("mean").value(st.mean);
        w.key("rms").value(st.rms);
        w.key("p2p").value(st.peak_to_peak);
        w.key("min").value(st.min);
        w.key("max").value(st.max);
        w.end_object();
    }
    w.end_array();
    w.key("switch").begin_object();
    w.key("average_power_watts").value(r.switch_power);
    w.key("power_factor").value(r.switch_power_factor);
    w.end_object();
    w.end_object();
}

void emit_losses(io::JsonWriter& w, int stage_no, double duty, bool parasitics_given,
                 const losses::LossBreakdown& b, double p_out) {
    w.begin_object();
    w.key("stage").value(stage_no);
    w.key("duty").value(duty);
    w.key("parasitics_given").value(parasitics_given);
    w.key("inductor_loss_watts").value(b.inductor_loss);
    w.key("switch_conduction_loss_watts").value(b.switch_conduction_loss);
    w.key("capacitor_loss_watts").value(b.capacitor_loss);
    w.key("diode_loss_watts").value(b.diode_loss);
    w.key("other_losses_watts").value(b.other_losses);
    w.key("total_watts").value(b.total());
    w.key("p_out_watts").value(p_out);
    w.key("efficiency").value(losses::efficiency(p_out, b));
    w.end_object();
}

int cmd_simulate(const std::string& spec_path, int stage, const std::string& csv_path,
                 int cycles, bool full_transient, const std::string& out_path) {
    const io::SpecDocument doc = io::load_spec_file(spec_path);
    const io::StageEntry& entry = select_stage(doc, stage);
    const DesignResult design = sizing::design_stage(entry.spec, entry.design_options);
    const auto circ = circuit::build_stage_circuit(design, entry.spec, entry.parasitics);

    sim::SimResult res;
    if (full_transient) {
        res = sim::run_transient(circ, doc.sim, cycles > 0 ? cycles : 50);
    } else {
        res = sim::run_to_steady_state(circ, doc.sim);
    }
    if (!res.converged && !full_transient)
        std::cerr << "warning: steady state not reached within " << res.cycles_run
                  << " cycles (partial result)\n";

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw io::ParseError("cannot open CSV output file: " + csv_path);
        sim::write_csv(csv, res.waveforms);
    }

    cascade::StageReport rep;
    rep.sim = std::move(res);
    for (const auto& s : rep.sim.waveforms.signals)
        rep.stats.emplace_back(s.name, measure::stats(s.samples));
    const auto& w = rep.sim.waveforms;
    if (w.has_signal("v_sw") && w.has_signal("i_sw")) {
        const auto& vsw = w.signal("v_sw").samples;
        const auto& isw = w.signal("i_sw").samples;
        rep.switch_power = measure::average_power(vsw, isw);
        const auto si = measure::stats(isw);
        const auto sv = measure::stats(vsw);
        rep.switch_power_factor =
            (si.rms > 0 && sv.rms > 0) ? measure::power_factor(vsw, isw) : 0.0;
    }

    OutStream out(out_path);
    io::JsonWriter jw(*out.os);
    emit_sim_report(jw, stage, rep);
    jw.finish();
    return rep.sim.converged || full_transient ? 0 : kExitNoConvergence;
}

int cmd_losses(const std::string& spec_path, int stage, const std::string& out_path) {
    const io::SpecDocument doc = io::load_spec_file(spec_path);
    const io::StageEntry& entry = select_stage(doc, stage);
    if (!entry.parasitics_given)
        std::cerr << "warning: stage " << stage
                  << " has no parasitics block, assuming ideal components\n";
    const DesignResult design = sizing::design_stage(entry.spec, entry.design_options);
    const auto breakdown = losses::stage_loss_breakdown(
        entry.parasitics, entry.spec.topology, entry.spec.output_current, design.duty);
    const double p_out =
        std::abs(entry.spec.output_voltage) * entry.spec.output_current;

    OutStream out(out_path);
    io::JsonWriter w(*out.os);
    emit_losses(w, stage, design.duty, entry.parasitics_given, breakdown, p_out);
    w.finish();
    return 0;
}

int cmd_cascade(const std::string& spec_path, const std::string& out_path) {
    const io::SpecDocument doc = io::load_spec_file(spec_path);
    std::vector<StageSpec> specs;
    std::vector<ParasiticSet> parasitics;
    std::vector<sizing::DesignOptions> options;
    for (const auto& st : doc.stages) {
        specs.push_back(st.spec);
        parasitics.push_back(st.parasitics);
        options.push_back(st.design_options);
    }
    const auto cd = cascade::compose(specs, parasitics, options);
    const auto rep = cascade::evaluate(cd, doc.sim);

    OutStream out(out_path);
    io::JsonWriter w(*out.os);
    w.begin_object();
    w.key("stages").begin_array();
    for (std::size_t k = 0; k < rep.stages.size(); ++k) {
        const int stage_no = static_cast<int>(k) + 1;
        w.begin_object();
        w.key("design");
        emit_design(w, stage_no, cd.stages[k].spec, cd.stages[k].design);
        w.key("simulation");
        emit_sim_report(w, stage_no, rep.stages[k]);
        w.key("losses");
        emit_losses(w, stage_no, cd.stages[k].design.duty, doc.stages[k].parasitics_given,
                    rep.stages[k].loss,
                    std::abs(cd.stages[k].spec.output_voltage) *
                        cd.stages[k].spec.output_current);
        w.end_object();
    }
    w.end_array();
    w.key("chain").begin_array();
    for (std::size_t k = 0; k < rep.ratios.size(); ++k) {
        w.begin_object();
        w.key("stage").value(static_cast<int>(k) + 1);
        w.key("p_in_watts").value(rep.powers[k].p_in);
        w.key("p_out_watts").value(rep.powers[k].p_out);
        w.key("ratio").value(rep.ratios[k].ratio);
        w.key("feasible").value(rep.ratios[k].feasible);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    w.finish();

    bool all_converged = true;
    for (const auto& st : rep.stages) all_converged = all_converged && st.sim.converged;
    return all_converged ? 0 : kExitNoConvergence;
}

struct SweepRow {
    double param = 0.0;
    double mean_v_out = 0.0;
    double p2p_v_out = 0.0;
    std::string conduction_mode;
    bool converged = false;
};

nlohmann::json::json_pointer sweep_pointer(const std::string& dotted, int* stage_hint) {
    std::string ptr;
    std::istringstream ss(dotted);
    std::string token;
    bool prev_stages = false;
    while (std::getline(ss, token, '.')) {
        if (token.empty())
            throw ValidationError({"--param: empty path segment in '" + dotted + "'"});
        if (prev_stages) {
            // stage indices are 1-based on the command line
            const int idx = std::atoi(token.c_str());
            if (idx < 1) throw ValidationError({"--param: bad stage index '" + token + "'"});
            if (stage_hint && *stage_hint == 0) *stage_hint = idx;
            token = std::to_string(idx - 1);
        }
        prev_stages = token == "stages";
        ptr += "/" + token;
    }
    return nlohmann::json::json_pointer(ptr);
}

int sweep_threads() {
    if (const char* env = std::getenv("CONVERTER_FORGE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

int cmd_sweep(const std::string& spec_path, const std::string& param, double from,
              double to, int points, int stage_opt, const std::string& out_path) {
    if (points < 1) throw ValidationError({"--points: must be >= 1"});

    std::ifstream in(spec_path, std::ios::binary);
    if (!in) throw io::ParseError("cannot open spec file: " + spec_path);
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json base;
    try {
        base = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw io::ParseError(std::string("JSON parse error: ") + e.what());
    }

    int stage_hint = 0;
    const auto ptr = sweep_pointer(param, &stage_hint);
    const int stage = stage_opt > 0 ? stage_opt : (stage_hint > 0 ? stage_hint : 1);

    // The path must land on a writable numeric slot of the schema: existing
    // numbers are overwritten, missing optional keys are created and then
    // validated by the spec reader.
    try {
        if (base.contains(ptr) && !base.at(ptr).is_number())
            throw ValidationError({"--param: '" + param + "' is not a numeric field"});
    } catch (const nlohmann::json::exception&) {
        throw ValidationError({"--param: unknown parameter path '" + param + "'"});
    }

    std::vector<SweepRow> rows(static_cast<std::size_t>(points));
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::string first_error;

    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < points; i = next.fetch_add(1)) {
            const double value =
                points == 1 ? from : from + (to - from) * i / (points - 1);
            try {
                nlohmann::json mutated = base;
                mutated[ptr] = value;
                const io::SpecDocument doc = io::parse_spec(mutated.dump());
                const io::StageEntry& entry = select_stage(doc, stage);
                const DesignResult design =
                    sizing::design_stage(entry.spec, entry.design_options);
                const auto circ =
                    circuit::build_stage_circuit(design, entry.spec, entry.parasitics);
                const auto res = sim::run_to_steady_state(circ, doc.sim);
                const auto vs = measure::stats(res.waveforms.signal("v_out").samples);
                rows[i] = {value, vs.mean, vs.peak_to_peak,
                           sim::conduction_mode_name(res.conduction_mode), res.converged};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error.empty()) first_error = e.what();
                return;
            }
        }
    };

    const int n_threads = std::min(sweep_threads(), points);
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (!first_error.empty()) throw ValidationError({first_error});

    OutStream out(out_path);
    *out.os << param << ",mean_v_out_volts,p2p_v_out_volts,conduction_mode,converged\n";
    char buf[40];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.10g", r.param);
        *out.os << buf;
        std::snprintf(buf, sizeof buf, "%.10g", r.mean_v_out);
        *out.os << ',' << buf;
        std::snprintf(buf, sizeof buf, "%.10g", r.p2p_v_out);
        *out.os << ',' << buf << ',' << r.conduction_mode << ','
                << (r.converged ? "true" : "false") << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"converter-forge: multi-stage DC-DC converter design and verification"};
    app.require_subcommand(1);

    std::string spec_path, out_path, csv_path, param;
    int stage = 1, cycles = 0, points = 16;
    double from = 0.0, to = 0.0;
    bool pretty = false, full_transient = false;

    auto* design = app.add_subcommand("design", "Size every stage from the spec");
    design->add_option("spec", spec_path, "spec JSON file")->required();
    design->add_option("--out", out_path, "write report to file instead of stdout");
    design->add_flag("--pretty", pretty, "human-readable table");

    auto* simulate =
        app.add_subcommand("simulate", "Run one stage to periodic steady state");
    simulate->add_option("spec", spec_path, "spec JSON file")->required();
    simulate->add_option("--stage", stage, "stage number (1-based)")->required();
    simulate->add_option("--csv", csv_path, "write waveform CSV to this path");
    simulate->add_option("--cycles", cycles, "cycles to record with --full-transient");
    simulate->add_flag("--full-transient", full_transient,
                       "record the start-up transient from t = 0");
    simulate->add_option("--out", out_path, "write stats JSON to file");

    auto* lossc = app.add_subcommand("losses", "Closed-form loss breakdown for one stage");
    lossc->add_option("spec", spec_path, "spec JSON file")->required();
    lossc->add_option("--stage", stage, "stage number (1-based)")->required();
    lossc->add_option("--out", out_path, "write report to file");

    auto* casc = app.add_subcommand("cascade", "Design, simulate and report every stage");
    casc->add_option("spec", spec_path, "spec JSON file")->required();
    casc->add_option("--out", out_path, "write report to file");

    auto* sweep = app.add_subcommand("sweep", "Sweep one numeric spec field");
    sweep->add_option("spec", spec_path, "spec JSON file")->required();
    sweep->add_option("--param", param, "dotted path, e.g. stages.3.l_margin")->required();
    sweep->add_option("--from", from, "first value")->required();
    sweep->add_option("--to", to, "last value")->required();
    sweep->add_option("--points", points, "number of points");
    sweep->add_option("--stage", stage, "stage whose metrics to report (default: from path)");
    sweep->add_option("--out", out_path, "write CSV to file");

    int sweep_stage = 0;
    sweep->callback([&] { sweep_stage = sweep->count("--stage") ? stage : 0; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (design->parsed()) return cmd_design(spec_path, out_path, pretty);
        if (simulate->parsed())
            return cmd_simulate(spec_path, stage, csv_path, cycles, full_transient,
                                out_path);
        if (lossc->parsed()) return cmd_losses(spec_path, stage, out_path);
        if (casc->parsed()) return cmd_cascade(spec_path, out_path);
        if (sweep->parsed())
            return cmd_sweep(spec_path, param, from, to, points, sweep_stage, out_path);
    } catch (const io::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const sim::SimDivergence& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
