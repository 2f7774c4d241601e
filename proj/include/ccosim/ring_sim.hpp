#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ccosim/device_model.hpp"
#include "ccosim/stage_model.hpp"

namespace ccosim::ring {

/// N-stage differential ring configuration. The phase-average engine converts
/// the tail current to the ledger's beta-unit scale through beta_per_tail
/// (calibrated so the default proposed core tops out above 80 MHz at 1.5 uA).
/// The transient oracle shares the same mapping times a built-in per-topology
/// device-current fit; ode_beta_scale is a user multiplier on top of it.
struct RingConfig {
    int n_stages = 4;
    stage::StageTopology topo = stage::StageTopology::ProposedBothStartup;
    stage::StageCaps caps{};
    stage::Rails rails{};
    double i_tail = 725.94e-9;  ///< A
    double v_swing = 0.6;       ///< V, defaults to rails swing
    device::DeviceParams device{};
    double beta_per_tail = 40.0;
    double ode_beta_scale = 1.0;

    double i_scale() const { return beta_per_tail * i_tail; }
    void validate() const;
};

RingConfig default_ring_config();

/// One oscillator phase transition. phase_step indexes the 2N-per-period
/// canonical event order; for N = 4 each step is 45 degrees.
struct Edge {
    double time = 0.0;
    int stage = 0;
    int phase_step = 0;
};

/// Timestamped phase transitions, the interchange format between the ring
/// simulator, the TDC and the neuron pipeline.
struct EdgeStream {
    int n_stages = 4;
    double duration = 0.0;
    std::vector<Edge> edges;

    double phase_step_deg() const { return 360.0 / (2.0 * n_stages); }
    /// Strictly increasing timestamps, consecutive steps advancing by one.
    void validate() const;
    /// Jitter-free stream: 2N equally spaced events per period of f.
    static EdgeStream uniform(double f, double duration, int n_stages = 4);
    /// Stream with per-period Gaussian jitter; events within a period stay even.
    static EdgeStream with_period_jitter(std::span<const double> periods, int n_stages = 4);
    /// CSV: time_s,stage,phase_deg
    void to_csv(std::ostream& os) const;
};

/// Oscillation frequency from the phase-average delay engine, f = 1/(2 N t_d).
double frequency(const RingConfig& cfg);

/// Lumped closed form f = I_ss / (2 N C_L V_sw).
double frequency_lumped(const RingConfig& cfg);

/// I-F transfer curve; currents must be positive and sorted.
std::vector<std::pair<double, double>> if_curve(const RingConfig& cfg,
                                                std::span<const double> currents);

enum class TransientOutcome { Oscillating, LockedUp };

enum class InitialState {
    Staggered,  ///< deterministic per-node offsets seeding the travelling mode
    AllEqual,   ///< every node at vmin (cold start)
};

struct TransientOptions {
    InitialState init = InitialState::Staggered;
    int steps_per_period = 400;  ///< RK4 steps per estimated period
};

struct TransientResult {
    TransientOutcome outcome = TransientOutcome::LockedUp;
    EdgeStream edges;
    double frequency = 0.0;  ///< extracted from trailing edge intervals, 0 if locked
};

/// Continuous-time oracle: RK4 integration of the 2N node voltages with
/// alpha-power device currents; edges emitted at differential zero crossings.
/// Non-oscillation is reported as a LockedUp outcome, not an error.
TransientResult transient_oracle(const RingConfig& cfg, double duration,
                                 const TransientOptions& opt = {});

/// Boolean switch-level ring state: 2 bits per stage (outp, outn).
struct BooleanRingState {
    uint32_t bits = 0;
    int n_stages = 4;

    bool outp(int s) const { return (bits >> (2 * s)) & 1u; }
    bool outn(int s) const { return (bits >> (2 * s + 1)) & 1u; }
};

/// Exhaustive lock-state analysis over all 2^(2N) Boolean states (N <= 8).
/// A node resolves high iff an ON pull-up path exists and no ON pull-down path
/// of equal or greater drive; I/O and startup devices out-drive the latch
/// devices. Both-paths-at-equal-drive or no-path keeps the prior value. The
/// returned states are the non-oscillating fixed points: equilibria from which
/// every single-node perturbation settles back to an equilibrium instead of
/// entering a limit cycle.
std::vector<BooleanRingState> lock_state_analysis(stage::StageTopology topo, int n_stages);

/// All equilibria (next(S) == S), without the stability classification.
std::vector<BooleanRingState> boolean_equilibria(stage::StageTopology topo, int n_stages);

/// Empirical frequency penalties for the startup variants (the single-startup
/// contention cost has no closed form). Calibrated defaults land both-startup
/// at +11% and single-startup at -13% versus conventional.
struct StartupCalibration {
    double both_penalty = 0.0;
    double pmos_penalty = 0.0;
    double nmos_penalty = 0.0;

    static StartupCalibration zero() { return {}; }
    static StartupCalibration calibrated();
};

/// Frequency of each startup variant plus the conventional reference, with the
/// calibration penalties applied.
std::map<stage::StageTopology, double> startup_variant_comparison(
    const RingConfig& cfg, const StartupCalibration& calib = StartupCalibration::calibrated());

}  // namespace ccosim::ring
