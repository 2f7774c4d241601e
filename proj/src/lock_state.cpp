#include <algorithm>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "ccosim/ring_sim.hpp"

namespace ccosim::ring {

namespace {

// Switch-level device: on_high is the gate level that turns the switch on.
// Drive strength 2 for I/O and startup devices, 1 for the latch devices; the
// stage's charging analysis composes I/O and latch currents with the I/O side
// dominating (the net charging current stays positive), which is what lets a
// stage hold both outputs high with the latch pull-down conducting.
struct SwitchDev {
    bool pull_up;
    int gate;  // 0=inp, 1=inn, 2=outp, 3=outn
    bool on_high;
    int node;  // 0=outp, 1=outn
    int strength;
};

std::vector<SwitchDev> switch_devices(stage::StageTopology t) {
    using T = stage::StageTopology;
    std::vector<SwitchDev> d;
    auto P = [&](int node, int gate, int s) { d.push_back({true, gate, false, node, s}); };
    auto N = [&](int node, int gate, int s) { d.push_back({false, gate, true, node, s}); };
    if (t == T::Conventional8T) {
        P(0, 0, 2); N(0, 0, 2);  // input inverter -> outp
        P(1, 1, 2); N(1, 1, 2);  // input inverter -> outn
        P(0, 3, 1); N(0, 3, 1);  // latch inverter, input outn
        P(1, 2, 1); N(1, 2, 1);  // latch inverter, input outp
    } else {
        P(0, 0, 2);  // MP1
        N(1, 1, 2);  // MN2
        N(0, 3, 1);  // MN3 latch
        P(1, 2, 1);  // MP4 latch
        if (t == T::ProposedPmosStartup || t == T::ProposedBothStartup) P(1, 1, 2);
        if (t == T::ProposedNmosStartup || t == T::ProposedBothStartup) N(0, 0, 2);
    }
    return d;
}

class BooleanRing {
public:
    BooleanRing(stage::StageTopology topo, int n) : n_(n), devs_(switch_devices(topo)) {}

    int bits() const { return 2 * n_; }

    uint32_t next(uint32_t st) const {
        uint32_t out = st;
        for (int s = 0; s < n_; ++s) {
            const int prev = (s + n_ - 1) % n_;
            const bool twist = (s == 0) && (n_ % 2 == 0);
            const bool inp = bit(st, twist ? 2 * prev + 1 : 2 * prev);
            const bool inn = bit(st, twist ? 2 * prev : 2 * prev + 1);
            const bool sig[4] = {inp, inn, bit(st, 2 * s), bit(st, 2 * s + 1)};
            for (int node = 0; node < 2; ++node) {
                int up = 0, dn = 0;
                for (const SwitchDev& d : devs_) {
                    if (d.node != node || sig[d.gate] != d.on_high) continue;
                    (d.pull_up ? up : dn) = std::max(d.pull_up ? up : dn, d.strength);
                }
                const int b = 2 * s + node;
                if (up > dn)
                    out |= (1u << b);
                else if (dn > up)
                    out &= ~(1u << b);
                // tie or float: node keeps its prior value
            }
        }
        return out;
    }

    // true when synchronous iteration from st reaches an equilibrium
    bool settles(uint32_t st) const {
        std::unordered_set<uint32_t> seen;
        while (true) {
            const uint32_t nx = next(st);
            if (nx == st) return true;
            if (!seen.insert(st).second) return false;  // limit cycle
            st = nx;
        }
    }

private:
    static bool bit(uint32_t st, int b) { return (st >> b) & 1u; }
    int n_;
    std::vector<SwitchDev> devs_;
};

}  // namespace

std::vector<BooleanRingState> boolean_equilibria(stage::StageTopology topo, int n_stages) {
    if (n_stages < 3 || n_stages > 8)
        throw std::invalid_argument("boolean_equilibria: n_stages must be in [3, 8]");
    BooleanRing ring(topo, n_stages);
    std::vector<BooleanRingState> eq;
    const uint32_t nstates = 1u << ring.bits();
    for (uint32_t s = 0; s < nstates; ++s)
        if (ring.next(s) == s) eq.push_back({s, n_stages});
    return eq;
}

std::vector<BooleanRingState> lock_state_analysis(stage::StageTopology topo, int n_stages) {
    BooleanRing ring(topo, n_stages);
    std::vector<BooleanRingState> locks;
    for (const BooleanRingState& e : boolean_equilibria(topo, n_stages)) {
        bool stable = true;
        for (int b = 0; b < ring.bits() && stable; ++b)
            stable = ring.settles(e.bits ^ (1u << b));
        if (stable) locks.push_back(e);
    }
    return locks;
}

}  // namespace ccosim::ring
