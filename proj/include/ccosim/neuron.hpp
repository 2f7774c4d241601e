#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccosim/ring_sim.hpp"
#include "ccosim/rng.hpp"
#include "ccosim/tdc.hpp"
#include "ccosim/variation.hpp"

namespace ccosim::neuron {

/// Two-region slope activation with mismatch distributions and jitter noise.
/// Activation(x) = ReLU(u) + u * n with u = m1 x [x < B] + m2 x [x >= B],
/// m1 ~ N(mu1, sigma1^2) and m2 ~ N(mu2, sigma2^2) frozen per neuron instance,
/// n ~ N(0, jitter_sigma^2) fresh per evaluation. The formula is kept verbatim
/// (it can go negative for n < -1); clamp_negative optionally clips at zero.
struct ActivationModel {
    double mean_slope = 1.0;  ///< m-tilde, the training activation slope
    double boundary = 0.5;    ///< B, region boundary in pre-activation units
    double mu1 = 1.0;
    double sigma1 = 0.0;
    double mu2 = 1.0;
    double sigma2 = 0.0;
    double jitter_sigma = 0.0;  ///< relative noise spread
    bool clamp_negative = false;

    void validate() const;
    static ActivationModel identity() { return {}; }
    std::string to_json() const;
    static ActivationModel from_json(const std::string& text);
};

/// Desk-scale benchmark model: the measured-curve compression above the knee
/// (second-region slope 0.75), the instance spread of the curve fits and the
/// windowed-count jitter scale.
neuron::ActivationModel bench_activation_model();

/// End-to-end rate neuron: input current -> ring edges -> TDC total step
/// count over the window. Zero input gives zero count.
long rate_response(double i_in, double window, const ring::RingConfig& cfg,
                   const tdc::TdcConfig& tcfg = {});

/// Mean of the per-curve through-origin least-squares slopes. Curves need at
/// least two distinct points.
double fit_mean_slope(std::span<const variation::Curve> curves);

struct TwoRegionFit {
    double boundary = 0.0;
    double mu1 = 0.0, sigma1 = 0.0;
    double mu2 = 0.0, sigma2 = 0.0;
    double mse = 0.0;
};

/// Two-region through-origin fit. The boundary minimizing the total squared
/// error over all curves is chosen from the candidate grid (ties break to the
/// smallest boundary); both regions must keep at least 3 points. Slope
/// statistics are population moments over the curves.
TwoRegionFit fit_two_region(std::span<const variation::Curve> curves,
                            std::span<const double> candidates);

/// Assemble an ActivationModel from measured curves. Inputs are normalized so
/// the largest swept current maps to x = 1 and the mean slope to 1; the jitter
/// spread is passed through as a relative value.
ActivationModel extract_activation(std::span<const variation::Curve> curves,
                                   double jitter_sigma_rel);

struct NeuronSlopes {
    double m1 = 1.0;
    double m2 = 1.0;
};

/// Freeze per-neuron slopes (static mismatch). Zero sigmas return the means
/// without consuming the stream.
NeuronSlopes draw_slopes(const ActivationModel& model, RngStream& rng);

/// Forward evaluation with an explicit noise draw (pass 0 for noiseless).
double custom_activation(double x, const ActivationModel& model, const NeuronSlopes& slopes,
                         double noise);

/// Derivative of the noiseless piecewise-linear part with respect to x; the
/// noise term is treated as a non-differentiated perturbation.
double custom_activation_grad(double x, const ActivationModel& model, const NeuronSlopes& slopes);

/// Spiking-mode configuration. The oscillator is modelled as a charge budget:
/// advancing one full cycle consumes q_cycle = 2 N C_L V_sw; a spike is
/// emitted each time the phase passes the designated spike phase.
struct SpikingConfig {
    double i_leak = 1e-9;        ///< A
    double c_mirror = 100e-15;   ///< F (mirror integration capacitance)
    double pulse_charge = 0.0;   ///< C per input event; 0 = derive q_cycle / 4
    int spike_phase = 0;         ///< one of the 2N phases

    void validate() const;
};

/// Piecewise-constant input segment starting at t_start.
struct CurrentSegment {
    double t_start = 0.0;
    double i = 0.0;
};

/// Spike times for a piecewise-constant input current. Effective drive is
/// max(0, i - i_leak); the phase only advances while the drive is positive.
std::vector<double> spiking_response(std::span<const CurrentSegment> waveform, double duration,
                                     const SpikingConfig& scfg, const ring::RingConfig& cfg);

/// Spike times for charge-packet inputs (synaptic pulses). Each pulse deposits
/// pulse_charge on the mirror; a spike fires whenever the accumulated charge
/// carries the phase past the spike phase.
std::vector<double> spiking_response_pulses(std::span<const double> pulse_times, double duration,
                                            const SpikingConfig& scfg,
                                            const ring::RingConfig& cfg);

/// Charge consumed per oscillation cycle, 2 N C_L V_sw.
double cycle_charge(const ring::RingConfig& cfg);

}  // namespace ccosim::neuron
