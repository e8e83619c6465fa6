#pragma once

// Spec-document ingestion (JSON, snake_case keys with units in the names)
// and the deterministic JSON writer used for every report: stable key order,
// fixed 10-significant-digit numeric formatting.

#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cforge/cascade.hpp"
#include "cforge/simulator.hpp"

namespace cforge::io {

/// Thrown for malformed JSON; carries a line/column diagnostic in what().
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StageEntry {
    StageSpec spec;
    ParasiticSet parasitics;
    bool parasitics_given = false;
    sizing::DesignOptions design_options;
};

struct SpecDocument {
    std::vector<StageEntry> stages;
    sim::SimConfig sim;
};

/// Parses and validates a spec document. Unknown keys are rejected.
/// ParseError for malformed JSON, ValidationError for semantic problems.
SpecDocument parse_spec(const std::string& text);
SpecDocument load_spec_file(const std::string& path);

/// Streaming JSON writer with deterministic formatting: object keys emitted
/// in call order, doubles as %.10g.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& os, bool pretty = true) : os_(os), pretty_(pretty) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(std::size_t v);
    JsonWriter& value(bool v);
    JsonWriter& value(const char* v);
    JsonWriter& value(const std::string& v);
    void finish();  // trailing newline

private:
    void separator();
    void newline_indent();

    std::ostream& os_;
    bool pretty_;
    struct Level {
        bool array = false;
        bool first = true;
    };
    std::vector<Level> stack_;
    bool pending_key_ = false;
};

std::string format_double(double v);  // %.10g

}  // namespace cforge::io
