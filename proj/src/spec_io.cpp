#include "cforge/spec_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

namespace cforge::io {

namespace {

using nlohmann::json;

/// nlohmann reports a byte offset; turn it into line/column for diagnostics.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ValidationError({where + ": unknown key '" + it.key() + "'"});
    }
}

double get_num(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number())
        throw ValidationError({where + "." + key + ": required number missing"});
    return it->get<double>();
}

std::optional<double> opt_num(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_number())
        throw ValidationError({where + "." + key + ": must be a number"});
    return it->get<double>();
}

ParasiticSet parse_parasitics(const json& obj, const std::string& where) {
    reject_unknown_keys(obj,
                        {"r_l_ohms", "r_ds_ohms", "r_c_ohms", "v_f_volts", "r_f_ohms",
                         "switching_loss_watts"},
                        where);
    ParasiticSet p;
    if (auto v = opt_num(obj, "r_l_ohms", where)) p.inductor_esr = *v;
    if (auto v = opt_num(obj, "r_ds_ohms", where)) p.switch_on_resistance = *v;
    if (auto v = opt_num(obj, "r_c_ohms", where)) p.capacitor_esr = *v;
    if (auto v = opt_num(obj, "v_f_volts", where)) p.diode_forward_voltage = *v;
    if (auto v = opt_num(obj, "r_f_ohms", where)) p.diode_series_resistance = *v;
    if (auto v = opt_num(obj, "switching_loss_watts", where))
        p.constant_switching_loss = *v;
    return validate_parasitics(p);
}

StageEntry parse_stage(const json& obj, std::size_t index) {
    const std::string where = "stages[" + std::to_string(index + 1) + "]";
    if (!obj.is_object()) throw ValidationError({where + ": must be an object"});
    reject_unknown_keys(obj,
                        {"topology", "vs_volts", "vo_volts", "io_amperes", "f_hz",
                         "coupling_cap_ripple_frac", "output_ripple_frac", "parasitics",
                         "is_amperes", "l_margin", "duty_override"},
                        where);

    StageEntry e;
    const auto topo_it = obj.find("topology");
    if (topo_it == obj.end() || !topo_it->is_string())
        throw ValidationError({where + ".topology: required string missing"});
    const std::string topo = topo_it->get<std::string>();
    if (topo == "sepic")
        e.spec.topology = Topology::Sepic;
    else if (topo == "inverting_buck_boost")
        e.spec.topology = Topology::InvertingBuckBoost;
    else
        throw ValidationError(
            {where + ".topology: must be 'sepic' or 'inverting_buck_boost'"});

    e.spec.source_voltage = get_num(obj, "vs_volts", where);
    e.spec.output_voltage = get_num(obj, "vo_volts", where);
    e.spec.output_current = get_num(obj, "io_amperes", where);
    e.spec.switching_frequency = get_num(obj, "f_hz", where);
    e.spec.output_ripple_frac = get_num(obj, "output_ripple_frac", where);
    if (auto v = opt_num(obj, "coupling_cap_ripple_frac", where))
        e.spec.coupling_cap_ripple_frac = *v;
    e.spec.source_current = opt_num(obj, "is_amperes", where);

    if (auto v = opt_num(obj, "l_margin", where)) e.design_options.continuity_margin = *v;
    e.design_options.duty_override = opt_num(obj, "duty_override", where);

    if (const auto it = obj.find("parasitics"); it != obj.end()) {
        e.parasitics = parse_parasitics(*it, where + ".parasitics");
        e.parasitics_given = true;
    }
    validate_spec(e.spec);
    return e;
}

}  // namespace

SpecDocument parse_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("JSON parse error at line " + std::to_string(line) +
                         ", column " + std::to_string(col) + ": " + e.what());
    }
    if (!doc.is_object()) throw ValidationError({"document: top level must be an object"});
    reject_unknown_keys(doc, {"stages", "sim"}, "document");

    SpecDocument out;
    const auto stages_it = doc.find("stages");
    if (stages_it == doc.end() || !stages_it->is_array() || stages_it->empty())
        throw ValidationError({"stages: required non-empty array missing"});
    for (std::size_t i = 0; i < stages_it->size(); ++i)
        out.stages.push_back(parse_stage((*stages_it)[i], i));

    if (const auto it = doc.find("sim"); it != doc.end()) {
        reject_unknown_keys(*it, {"steps_per_period", "max_cycles", "steady_state_tol"},
                            "sim");
        if (auto v = opt_num(*it, "steps_per_period", "sim"))
            out.sim.steps_per_period = static_cast<int>(*v);
        if (auto v = opt_num(*it, "max_cycles", "sim"))
            out.sim.max_cycles = static_cast<int>(*v);
        if (auto v = opt_num(*it, "steady_state_tol", "sim")) out.sim.steady_state_tol = *v;
    }
    sim::validate_sim_config(out.sim);
    return out;
}

SpecDocument load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open spec file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

JsonWriter& JsonWriter::begin_object() {
    separator();
    os_ << '{';
    stack_.push_back({false, true});
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    stack_.pop_back();
    newline_indent();
    os_ << '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separator();
    os_ << '[';
    stack_.push_back({true, true});
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    stack_.pop_back();
    newline_indent();
    os_ << ']';
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    separator();
    os_ << '"' << k << "\":";
    if (pretty_) os_ << ' ';
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separator();
    os_ << format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(int v) {
    separator();
    os_ << v;
    return *this;
}

JsonWriter& JsonWriter::value(std::size_t v) {
    separator();
    os_ << v;
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separator();
    os_ << (v ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::value(const std::string& v) {
    separator();
    os_ << '"';
    for (char c : v) {
        switch (c) {
            case '"': os_ << "\\\""; break;
            case '\\': os_ << "\\\\"; break;
            case '\n': os_ << "\\n"; break;
            default: os_ << c;
        }
    }
    os_ << '"';
    return *this;
}

void JsonWriter::finish() { os_ << '\n'; }

void JsonWriter::separator() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (stack_.empty()) return;
    if (!stack_.back().first) os_ << ',';
    stack_.back().first = false;
    newline_indent();
}

void JsonWriter::newline_indent() {
    if (!pretty_) return;
    os_ << '\n';
    for (std::size_t i = 0; i < stack_.size(); ++i) os_ << "  ";
}

}  // namespace cforge::io
