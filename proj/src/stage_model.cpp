#include "ccosim/stage_model.hpp"

#include <cmath>
#include <string>

namespace ccosim::stage {

std::string_view topology_name(StageTopology t) {
    switch (t) {
        case StageTopology::Conventional8T: return "conventional_8t";
        case StageTopology::Proposed4T: return "proposed_4t";
        case StageTopology::ProposedPmosStartup: return "proposed_pmos_startup";
        case StageTopology::ProposedNmosStartup: return "proposed_nmos_startup";
        case StageTopology::ProposedBothStartup: return "proposed_both_startup";
    }
    return "unknown";
}

StageTopology topology_from_name(std::string_view name) {
    if (name == "conventional_8t") return StageTopology::Conventional8T;
    if (name == "proposed_4t") return StageTopology::Proposed4T;
    if (name == "proposed_pmos_startup") return StageTopology::ProposedPmosStartup;
    if (name == "proposed_nmos_startup") return StageTopology::ProposedNmosStartup;
    if (name == "proposed_both_startup") return StageTopology::ProposedBothStartup;
    throw std::invalid_argument("unknown stage topology: " + std::string(name));
}

void StageCaps::validate() const {
    if (!(cgd > 0.0) || !(cgs > 0.0))
        throw std::invalid_argument("StageCaps: cgd and cgs must be > 0");
}

void Rails::validate() const {
    if (!(vmin < vcm && vcm < vmax))
        throw std::invalid_argument("Rails: need vmin < vcm < vmax");
    double sum = 0.0;
    for (double d : dv) {
        if (!(d > 0.0)) throw std::invalid_argument("Rails: all dv must be > 0");
        sum += d;
    }
    if (std::abs(sum - swing()) > 1e-12 * std::max(1.0, swing()))
        throw std::invalid_argument("Rails: dv must sum to vmax - vmin");
}

double node_capacitance(StageTopology topo, const StageCaps& caps, int node) {
    caps.validate();
    if (node != 0 && node != 1) throw std::invalid_argument("node_capacitance: node must be 0 or 1");
    switch (topo) {
        case StageTopology::Conventional8T:
            return 8.0 * caps.cgd + 4.0 * caps.cgs;
        case StageTopology::ProposedBothStartup:
            return 6.0 * caps.cgd + 3.0 * caps.cgs;
        case StageTopology::Proposed4T:
            return 5.0 * caps.cgd + 3.0 * caps.cgs;
        case StageTopology::ProposedPmosStartup:
            // startup PMOS loads outn only
            return (node == 1 ? 6.0 : 5.0) * caps.cgd + 3.0 * caps.cgs;
        case StageTopology::ProposedNmosStartup:
            // startup NMOS loads outp only
            return (node == 0 ? 6.0 : 5.0) * caps.cgd + 3.0 * caps.cgs;
    }
    throw std::invalid_argument("node_capacitance: bad topology");
}

double load_capacitance(StageTopology topo, const StageCaps& caps) {
    return 0.5 * (node_capacitance(topo, caps, 0) + node_capacitance(topo, caps, 1));
}

PhaseLedger phase_currents(StageTopology topo) {
    PhaseLedger led;
    led.mp1 = {0.02, 0.07, 0.07, 0.02};
    led.mp3 = {0.0, 0.0, 0.02, 0.02};
    led.mn3 = {0.01, 0.01, 0.0, 0.0};
    const bool conventional = (topo == StageTopology::Conventional8T);
    for (int i = 0; i < 4; ++i) {
        led.composed[i] = conventional ? led.mp1[i] + led.mp3[i] - led.mn3[i]
                                       : led.mp1[i] - led.mn3[i];
    }
    return led;
}

double stage_delay(StageTopology topo, const StageCaps& caps, const Rails& rails, double i_scale) {
    caps.validate();
    rails.validate();
    if (!(i_scale > 0.0)) throw std::invalid_argument("stage_delay: i_scale must be > 0");
    const double cl = load_capacitance(topo, caps);
    const PhaseLedger led = phase_currents(topo);
    double td = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (!(led.composed[i] > 0.0))
            throw std::domain_error("stage_delay: non-positive composed phase current");
        td += cl * rails.dv[i] / (led.composed[i] * i_scale);
    }
    return td;
}

}  // namespace ccosim::stage
