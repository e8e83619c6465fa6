#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cforge/losses.hpp"

using namespace cforge;
using namespace cforge::losses;

// Reference operating point: the -12 V / 0.5 A inverting stage, D = 12/17,
// with r_L = 0.142, R_DS = 0.1, r_C = 0.686, Vf = 0.6 ohm/volt values.
namespace {
constexpr double kD = 12.0 / 17.0;
constexpr double kIo = 0.5;
}  // namespace

TEST_CASE("inductor conduction loss") {
    // r_L Io^2 / (1-D)^2 = 0.142 * 0.25 * (17/5)^2
    CHECK(inductor_conduction_loss(0.142, kIo, kD) ==
          doctest::Approx(0.142 * 0.25 * 289.0 / 25.0).epsilon(1e-12));
    CHECK(inductor_conduction_loss(0.142, kIo, kD) == doctest::Approx(0.411).epsilon(2e-3));
    CHECK(inductor_conduction_loss(0.0, kIo, kD) == 0.0);
}

TEST_CASE("switch RMS current and conduction loss") {
    const double i_sw = switch_rms_current(kIo, kD);
    CHECK(i_sw == doctest::Approx(std::sqrt(kD) * kIo / (1.0 - kD)).epsilon(1e-12));
    CHECK(i_sw == doctest::Approx(1.4283).epsilon(1e-4));
    CHECK(mosfet_conduction_loss(0.1, kIo, kD) ==
          doctest::Approx(0.1 * i_sw * i_sw).epsilon(1e-12));
    CHECK(mosfet_conduction_loss(0.1, kIo, kD) == doctest::Approx(0.204).epsilon(1e-4));
}

TEST_CASE("capacitor RMS current and loss") {
    const double i_c = capacitor_rms_current(kIo, kD);
    CHECK(i_c == doctest::Approx(0.5 * std::sqrt(2.4)).epsilon(1e-12));
    CHECK(i_c == doctest::Approx(0.7746).epsilon(1e-4));
    CHECK(capacitor_loss(0.686, kIo, kD) == doctest::Approx(0.4116).epsilon(1e-4));
    CHECK(capacitor_loss(0.686, kIo, kD) == doctest::Approx(0.412).epsilon(2e-3));
    CHECK_THROWS_AS(capacitor_loss(-0.1, kIo, kD), ValidationError);
}

TEST_CASE("diode RMS current and loss") {
    CHECK(diode_rms_current(kIo, kD) ==
          doctest::Approx(kIo / std::sqrt(1.0 - kD)).epsilon(1e-12));
    CHECK(diode_rms_current(kIo, kD) == doctest::Approx(0.922).epsilon(1e-3));
    // Average diode current is exactly Io, so with Rf = 0 the loss is Vf*Io.
    CHECK(diode_loss(0.6, 0.0, kIo, kD) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(diode_loss(0.6, 0.2, kIo, kD) ==
          doctest::Approx(0.3 + 0.2 * 0.25 * 17.0 / 5.0).epsilon(1e-12));
}

TEST_CASE("figures sometimes quoted for this stage that the formulas reject") {
    // 0.285 W switch loss, 1.68 A switch RMS and 1.7 A diode RMS do not
    // follow from the closed forms at D = 12/17, Io = 0.5; pin the distance.
    CHECK(std::abs(mosfet_conduction_loss(0.1, kIo, kD) - 0.285) / 0.285 > 0.2);
    CHECK(std::abs(switch_rms_current(kIo, kD) - 1.68) / 1.68 > 0.1);
    CHECK(std::abs(diode_rms_current(kIo, kD) - 1.7) / 1.7 > 0.4);
}

TEST_CASE("RMS identities over a duty/current grid") {
    for (double d = 0.05; d < 0.96; d += 0.05) {
        for (double io : {0.1, 0.5, 1.0, 2.0, 7.5}) {
            const double isw = switch_rms_current(io, d);
            const double id = diode_rms_current(io, d);
            const double ic = capacitor_rms_current(io, d);
            // I_sw^2 (1-D)^2 = D Io^2 ; I_D^2 (1-D) = Io^2 ; I_C^2 = I_sw^2 (1-D)
            CHECK(isw * isw * (1 - d) * (1 - d) == doctest::Approx(d * io * io));
            CHECK(id * id * (1 - d) == doctest::Approx(io * io));
            CHECK(ic * ic == doctest::Approx(isw * isw * (1 - d)));
            // Losses equal resistance times squared RMS current.
            CHECK(mosfet_conduction_loss(0.3, io, d) == doctest::Approx(0.3 * isw * isw));
            CHECK(capacitor_loss(0.3, io, d) == doctest::Approx(0.3 * ic * ic));
        }
    }
}

TEST_CASE("loss operations reject out-of-range duty and current") {
    CHECK_THROWS_AS(switch_rms_current(0.5, 0.0), ValidationError);
    CHECK_THROWS_AS(switch_rms_current(0.5, 1.0), ValidationError);
    CHECK_THROWS_AS(diode_rms_current(-0.5, 0.5), ValidationError);
}

TEST_CASE("efficiency from a breakdown") {
    LossBreakdown b;
    b.inductor_loss = 0.411;
    b.switch_conduction_loss = 0.204;
    b.capacitor_loss = 0.412;
    b.diode_loss = 0.3;
    CHECK(b.total() == doctest::Approx(1.327));
    CHECK(efficiency(24.0, b) == doctest::Approx(24.0 / 25.327).epsilon(1e-12));
    CHECK(efficiency(24.0, b) == doctest::Approx(0.9476).epsilon(1e-4));

    // Strictly decreasing in total losses.
    LossBreakdown worse = b;
    worse.other_losses = 0.1;
    CHECK(efficiency(24.0, worse) < efficiency(24.0, b));
    CHECK(efficiency(24.0, LossBreakdown{}) == doctest::Approx(1.0));
}

TEST_CASE("stage breakdown: inverting stage uses one L and one C") {
    ParasiticSet p;
    p.inductor_esr = 0.142;
    p.switch_on_resistance = 0.1;
    p.capacitor_esr = 0.686;
    p.diode_forward_voltage = 0.6;
    const LossBreakdown b =
        stage_loss_breakdown(p, Topology::InvertingBuckBoost, kIo, kD);
    CHECK(b.inductor_loss == doctest::Approx(inductor_conduction_loss(0.142, kIo, kD)));
    CHECK(b.switch_conduction_loss == doctest::Approx(mosfet_conduction_loss(0.1, kIo, kD)));
    CHECK(b.capacitor_loss == doctest::Approx(capacitor_loss(0.686, kIo, kD)));
    CHECK(b.diode_loss == doctest::Approx(0.3));
    CHECK(b.other_losses == 0.0);
}

TEST_CASE("stage breakdown: SEPIC counts both inductors and both capacitors") {
    ParasiticSet p;
    p.inductor_esr = 0.05;
    p.capacitor_esr = 0.1;
    const double d = 12.0 / 67.0, io = 2.0;
    const LossBreakdown b = stage_loss_breakdown(p, Topology::Sepic, io, d);
    // L1 carries Io*D/(1-D), L2 carries Io.
    const double i_l1 = io * d / (1 - d);
    CHECK(b.inductor_loss == doctest::Approx(0.05 * (i_l1 * i_l1 + io * io)).epsilon(1e-9));
    CHECK(b.capacitor_loss == doctest::Approx(2.0 * capacitor_loss(0.1, io, d)));
}

TEST_CASE("ideal parasitics give a zero breakdown and unit efficiency") {
    const LossBreakdown b = stage_loss_breakdown(ParasiticSet{}, Topology::Sepic, 2.0, 0.3);
    CHECK(b.total() == 0.0);
    CHECK(efficiency(24.0, b) == doctest::Approx(1.0));
}

TEST_CASE("chain power ratios: reference chain and reduced-power scenario") {
    const auto chain = chain_power_ratios({{550, 24}, {24, 5}, {5, 24}});
    REQUIRE(chain.size() == 3);
    CHECK(chain[0].ratio == doctest::Approx(24.0 / 550.0).epsilon(1e-12));
    CHECK(chain[0].ratio == doctest::Approx(0.0436).epsilon(1e-3));
    CHECK(chain[0].feasible);
    CHECK(chain[1].ratio == doctest::Approx(5.0 / 24.0).epsilon(1e-12));
    CHECK(chain[1].feasible);
    // A stage "delivering" more power than it draws is reported raw and
    // flagged, never clamped to 1.
    CHECK(chain[2].ratio == doctest::Approx(4.8).epsilon(1e-12));
    CHECK_FALSE(chain[2].feasible);

    const auto scenario = chain_power_ratios({{35, 11}, {11, 6}});
    CHECK(scenario[0].ratio == doctest::Approx(0.314).epsilon(1e-2));
    CHECK(scenario[1].ratio == doctest::Approx(0.545).epsilon(1e-2));
    CHECK(scenario[0].feasible);
    CHECK(scenario[1].feasible);

    CHECK_THROWS_AS(chain_power_ratios({{0.0, 5.0}}), ValidationError);
}

TEST_CASE("reduced-input-power stage parameters") {
    const ScenarioParameters s1 = scenario_stage_parameters(35, 55, 12);
    CHECK(s1.i_s == doctest::Approx(35.0 / 55.0).epsilon(1e-12));
    CHECK(s1.r == doctest::Approx(144.0 / 35.0).epsilon(1e-12));

    const ScenarioParameters s3 = scenario_stage_parameters(6, 5, -12);
    CHECK(s3.i_s == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(s3.r == doctest::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("ESR back-calculations") {
    CHECK(esr_from_ripple(0.686, 1.0) == doctest::Approx(0.686));
    CHECK(esr_from_ripple(-0.686, 1.0) == doctest::Approx(0.686));
    CHECK_THROWS_AS(esr_from_ripple(0.686, 0.0), ValidationError);
    // 1% of (Vs - Vo) dropped across the inductor at its average current.
    CHECK(inductor_esr_from_drop(5.0, -12.0, 1.7) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(inductor_esr_from_drop(55.0, 12.0, 2.0, 0.02) ==
          doctest::Approx(0.43).epsilon(1e-12));
}
