#include <doctest.h>

#include "ccosim/stage_model.hpp"

using namespace ccosim;
using stage::StageCaps;
using stage::StageTopology;

TEST_CASE("load capacitance per topology") {
    StageCaps caps{1e-15, 1e-15};  // cgd = cgs = c
    const double c = 1e-15;
    CHECK(stage::load_capacitance(StageTopology::Conventional8T, caps) ==
          doctest::Approx(12.0 * c));
    CHECK(stage::load_capacitance(StageTopology::ProposedBothStartup, caps) ==
          doctest::Approx(9.0 * c));
    CHECK(stage::load_capacitance(StageTopology::Proposed4T, caps) == doctest::Approx(8.0 * c));
}

TEST_CASE("capacitance ratio 0.75 when cgs = 2 cgd") {
    StageCaps caps{0.5e-15, 1.0e-15};
    const double ratio = stage::load_capacitance(StageTopology::ProposedBothStartup, caps) /
                         stage::load_capacitance(StageTopology::Conventional8T, caps);
    CHECK(ratio == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("single-startup variants carry the extra cgd on one node") {
    StageCaps caps{0.5e-15, 1.0e-15};
    // startup device loads outn for the pmos variant, outp for the nmos one
    CHECK(stage::node_capacitance(StageTopology::ProposedPmosStartup, caps, 1) ==
          doctest::Approx(6 * caps.cgd + 3 * caps.cgs));
    CHECK(stage::node_capacitance(StageTopology::ProposedPmosStartup, caps, 0) ==
          doctest::Approx(5 * caps.cgd + 3 * caps.cgs));
    CHECK(stage::node_capacitance(StageTopology::ProposedNmosStartup, caps, 0) ==
          doctest::Approx(6 * caps.cgd + 3 * caps.cgs));
    // the scalar load is the node-pair average
    CHECK(stage::load_capacitance(StageTopology::ProposedPmosStartup, caps) ==
          doctest::Approx(5.5 * caps.cgd + 3 * caps.cgs));
}

TEST_CASE("phase ledger composition") {
    const auto conv = stage::phase_currents(StageTopology::Conventional8T);
    const auto prop = stage::phase_currents(StageTopology::ProposedBothStartup);
    // phase C conventional: 0.07 + 0.02 - 0 = 0.09
    CHECK(conv.composed[2] == doctest::Approx(0.09));
    // phase A proposed: 0.02 - 0.01
    CHECK(prop.composed[0] == doctest::Approx(0.01));
    // phase D proposed: latch pull-down off
    CHECK(prop.composed[3] == doctest::Approx(0.02));
    for (int i = 0; i < 4; ++i) {
        CHECK(conv.composed[i] > 0.0);
        CHECK(prop.composed[i] > 0.0);
    }
}

TEST_CASE("delay ratio proposed over conventional") {
    StageCaps caps{0.5e-15, 1.0e-15};
    stage::Rails rails;
    const double iscale = 1e-5;
    const double tp = stage::stage_delay(StageTopology::ProposedBothStartup, caps, rails, iscale);
    const double tc = stage::stage_delay(StageTopology::Conventional8T, caps, rails, iscale);
    // 0.75 * (5 + 25/6 + 25/7 + 2.5) / (5 + 25/6 + 25/9 + 1.25)
    CHECK(tp / tc == doctest::Approx(0.8662).epsilon(5e-4));
    // the frequency ratio this implies
    CHECK(tc / tp == doctest::Approx(1.156).epsilon(0.01 / 1.156));
}

TEST_CASE("delay homogeneity") {
    StageCaps caps{0.5e-15, 1.0e-15};
    stage::Rails rails;
    const double t0 = stage::stage_delay(StageTopology::ProposedBothStartup, caps, rails, 1e-5);
    CHECK(stage::stage_delay(StageTopology::ProposedBothStartup, caps, rails, 2e-5) ==
          doctest::Approx(t0 / 2.0).epsilon(1e-12));
    StageCaps doubled{caps.cgd * 2, caps.cgs * 2};
    CHECK(stage::stage_delay(StageTopology::ProposedBothStartup, doubled, rails, 1e-5) ==
          doctest::Approx(2.0 * t0).epsilon(1e-12));
}

TEST_CASE("rails validation") {
    stage::Rails rails;
    CHECK_NOTHROW(rails.validate());
    rails.dv[0] = 0.06;  // sum no longer matches the swing
    CHECK_THROWS(rails.validate());
    rails = stage::Rails{};
    rails.vcm = 1.0;
    CHECK_THROWS(rails.validate());
    rails = stage::Rails{};
    rails.dv[2] = -0.25;
    CHECK_THROWS(rails.validate());
}

TEST_CASE("degenerate inputs rejected") {
    StageCaps caps{0.5e-15, 1.0e-15};
    stage::Rails rails;
    CHECK_THROWS(stage::stage_delay(StageTopology::ProposedBothStartup, caps, rails, 0.0));
    CHECK_THROWS(stage::load_capacitance(StageTopology::Conventional8T, StageCaps{0.0, 1e-15}));
}

TEST_CASE("topology names round trip") {
    for (auto t : {StageTopology::Conventional8T, StageTopology::Proposed4T,
                   StageTopology::ProposedPmosStartup, StageTopology::ProposedNmosStartup,
                   StageTopology::ProposedBothStartup})
        CHECK(stage::topology_from_name(stage::topology_name(t)) == t);
    CHECK_THROWS(stage::topology_from_name("ring_of_power"));
}
