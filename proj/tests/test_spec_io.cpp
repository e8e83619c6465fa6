#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include "cforge/spec_io.hpp"

using namespace cforge;
using namespace cforge::io;

namespace {

const char* kMinimal = R"({
  "stages": [
    {
      "topology": "inverting_buck_boost",
      "vs_volts": 5,
      "vo_volts": -12,
      "io_amperes": 0.5,
      "f_hz": 100000,
      "output_ripple_frac": 0.01
    }
  ]
})";

}  // namespace

TEST_CASE("minimal document parses with defaulted sim block") {
    const SpecDocument doc = parse_spec(kMinimal);
    REQUIRE(doc.stages.size() == 1);
    const StageEntry& e = doc.stages[0];
    CHECK(e.spec.topology == Topology::InvertingBuckBoost);
    CHECK(e.spec.source_voltage == 5.0);
    CHECK(e.spec.output_voltage == -12.0);
    CHECK(e.spec.output_current == 0.5);
    CHECK_FALSE(e.parasitics_given);
    CHECK(e.parasitics.ideal());
    CHECK(doc.sim.steps_per_period == 2000);
    CHECK(doc.sim.max_cycles == 20000);
    CHECK(doc.sim.steady_state_tol == 1e-6);
}

TEST_CASE("full document with parasitics, options and sim block") {
    const char* text = R"({
      "stages": [
        {
          "topology": "sepic",
          "vs_volts": 55, "vo_volts": 12, "io_amperes": 2, "f_hz": 100000,
          "coupling_cap_ripple_frac": 0.005, "output_ripple_frac": 0.01,
          "is_amperes": 10, "l_margin": 2.0, "duty_override": 0.18,
          "parasitics": {
            "r_l_ohms": 0.142, "r_ds_ohms": 0.1, "r_c_ohms": 0.686,
            "v_f_volts": 0.6, "r_f_ohms": 0.05, "switching_loss_watts": 0.01
          }
        }
      ],
      "sim": {"steps_per_period": 500, "max_cycles": 100, "steady_state_tol": 1e-5}
    })";
    const SpecDocument doc = parse_spec(text);
    const StageEntry& e = doc.stages[0];
    CHECK(e.spec.topology == Topology::Sepic);
    REQUIRE(e.spec.source_current.has_value());
    CHECK(*e.spec.source_current == 10.0);
    CHECK(e.design_options.continuity_margin == 2.0);
    REQUIRE(e.design_options.duty_override.has_value());
    CHECK(*e.design_options.duty_override == 0.18);
    CHECK(e.parasitics_given);
    CHECK(e.parasitics.inductor_esr == 0.142);
    CHECK(e.parasitics.constant_switching_loss == 0.01);
    CHECK(doc.sim.steps_per_period == 500);
    CHECK(doc.sim.steady_state_tol == 1e-5);
}

TEST_CASE("unknown keys are rejected by name") {
    const std::string text = R"({
      "stages": [
        {
          "topology": "sepic", "vs_volts": 55, "vo_volts": 12,
          "io_amperes": 2, "f_hz": 100000,
          "coupling_cap_ripple_frac": 0.005, "output_ripple_frac": 0.01,
          "vs_vots": 55
        }
      ]
    })";
    try {
        parse_spec(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("vs_vots") != std::string::npos);
    }

    try {
        parse_spec(R"({"stages": [], "extra": 1})");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("extra") != std::string::npos);
    }
}

TEST_CASE("malformed JSON reports a position") {
    try {
        parse_spec("{\n  \"stages\": [\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_spec(""), ParseError);
    CHECK_THROWS_AS(parse_spec("[1,2"), ParseError);
}

TEST_CASE("semantic violations surface as ValidationError") {
    // Negative source voltage.
    const char* text = R"({
      "stages": [
        {
          "topology": "inverting_buck_boost",
          "vs_volts": -5, "vo_volts": -12, "io_amperes": 0.5,
          "f_hz": 100000, "output_ripple_frac": 0.01
        }
      ]
    })";
    CHECK_THROWS_AS(parse_spec(text), ValidationError);
    // Unknown topology string.
    CHECK_THROWS_AS(parse_spec(R"({"stages":[{"topology":"boost","vs_volts":5,
        "vo_volts":-12,"io_amperes":0.5,"f_hz":100000,"output_ripple_frac":0.01}]})"),
                    ValidationError);
    // Missing required key.
    CHECK_THROWS_AS(parse_spec(R"({"stages":[{"topology":"inverting_buck_boost",
        "vs_volts":5,"vo_volts":-12,"io_amperes":0.5,"f_hz":100000}]})"),
                    ValidationError);
    // Stages must be present and non-empty.
    CHECK_THROWS_AS(parse_spec(R"({"stages": []})"), ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({})"), ValidationError);
}

TEST_CASE("load_spec_file: missing file") {
    CHECK_THROWS(load_spec_file("/nonexistent/path/spec.json"));
}

TEST_CASE("deterministic double formatting") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1e-5) == "1e-05");
    CHECK(format_double(12.0) == "12");
    CHECK(format_double(2.985074627e-05) == "2.985074627e-05");
    CHECK(format_double(-11.99) == "-11.99");
}

TEST_CASE("JSON writer: compact layout and key order") {
    std::ostringstream os;
    JsonWriter w(os, /*pretty=*/false);
    w.begin_object();
    w.key("b").value(2);
    w.key("a").value(0.5);
    w.key("list").begin_array();
    w.value(true);
    w.value("x");
    w.end_array();
    w.key("nested").begin_object().key("k").value(std::size_t{7}).end_object();
    w.end_object();
    w.finish();
    CHECK(os.str() == "{\"b\":2,\"a\":0.5,\"list\":[true,\"x\"],\"nested\":{\"k\":7}}\n");
}

TEST_CASE("JSON writer output is machine-parseable (pretty mode)") {
    std::ostringstream os;
    JsonWriter w(os);
    w.begin_object();
    w.key("v").value(-12.345);
    w.key("s").value("quote\"and\\slash");
    w.key("arr").begin_array().value(1).value(2).end_array();
    w.end_object();
    w.finish();
    // Round-trip through the strict spec parser's underlying JSON grammar is
    // covered by the CLI tests; here pin the escape handling.
    CHECK(os.str().find("\\\"") != std::string::npos);
    CHECK(os.str().find("\\\\") != std::string::npos);
}
