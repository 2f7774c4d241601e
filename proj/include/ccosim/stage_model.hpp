#pragma once

#include <array>
#include <stdexcept>
#include <string_view>

namespace ccosim::stage {

/// Delay-stage variants. The bare 4T cell admits a deadlock state; the
/// startup-equipped variants do not (verified exhaustively by the ring-level
/// lock-state analysis).
enum class StageTopology {
    Conventional8T,
    Proposed4T,
    ProposedPmosStartup,
    ProposedNmosStartup,
    ProposedBothStartup,
};

std::string_view topology_name(StageTopology t);
StageTopology topology_from_name(std::string_view name);

/// Lumped per-device capacitances. C_g = C_gd + C_gs.
struct StageCaps {
    double cgd = 0.5e-15;  ///< gate-drain capacitance per device, F
    double cgs = 1.0e-15;  ///< gate-source capacitance per device, F

    double cg() const { return cgd + cgs; }
    void validate() const;
};

/// Soft-rail voltages and the four phase increments of the charging
/// transition. dv[0..3] must sum to vmax - vmin.
struct Rails {
    double vmax = 0.9;
    double vmin = 0.3;
    double vcm = 0.6;
    std::array<double, 4> dv{0.05, 0.25, 0.25, 0.05};

    double swing() const { return vmax - vmin; }
    void validate() const;
};

/// Per-phase average current of each contributing device during the charging
/// transition, in multiples of beta, and the topology composition:
/// conventional I_i = MP1 + MP3 - MN3, proposed I_i = MP1 - MN3.
struct PhaseLedger {
    std::array<double, 4> mp1;       ///< phases A..D
    std::array<double, 4> mp3;
    std::array<double, 4> mn3;
    std::array<double, 4> composed;  ///< net charging current per phase
};

/// Single-stage load capacitance per output node.
/// Conventional8T: 8 C_gd + 4 C_gs. ProposedBothStartup: 6 C_gd + 3 C_gs.
/// Proposed4T: 5 C_gd + 3 C_gs. Single-startup variants carry the startup
/// C_gd on one output only; this returns the node-pair average
/// (5.5 C_gd + 3 C_gs). See node_capacitance for the asymmetric values.
double load_capacitance(StageTopology topo, const StageCaps& caps);

/// Per-node load for the transient integrator; node 0 = outp, node 1 = outn.
/// Differs from load_capacitance only for the single-startup variants.
double node_capacitance(StageTopology topo, const StageCaps& caps, int node);

PhaseLedger phase_currents(StageTopology topo);

/// Four-phase delay: t_d = sum_i C_L dv[i] / (composed[i] * i_scale), where
/// i_scale converts the ledger's beta-unit multiples to amperes. Throws
/// std::domain_error if any composed phase current is non-positive.
double stage_delay(StageTopology topo, const StageCaps& caps, const Rails& rails, double i_scale);

}  // namespace ccosim::stage
