#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ccosim/ring_sim.hpp"
#include "ccosim/rng.hpp"

namespace ccosim::variation {

using Curve = std::vector<std::pair<double, double>>;  ///< (current_a, freq_hz)

/// Instance-to-instance mismatch of the I-F curve, modelled as multiplicative
/// slope scaling drawn per region (below/above the knee current). The relative
/// means default to 1 so the Monte-Carlo ensemble stays centred on the nominal
/// curve; the spreads default to the measured coefficient of variation.
struct MismatchModel {
    double mean_f_ref = 39.7e6;   ///< Hz at the reference current
    double sigma_f_ref = 1.8e6;   ///< Hz
    double cv = 1.8e6 / 39.7e6;   ///< sigma_f_ref / mean_f_ref (validated)
    double i_ref = 725.94e-9;     ///< A, calibration input (not stated in the data)
    double knee = 1.0e-6;         ///< A, region boundary for the slope draws
    double mu1_rel = 1.0;
    double sigma1_rel = 1.8e6 / 39.7e6;
    double mu2_rel = 1.0;
    double sigma2_rel = 1.8e6 / 39.7e6;

    void validate() const;
};

struct SlopeScale {
    double m1 = 1.0;
    double m2 = 1.0;
};

/// Draw per-instance region slope scales; negative draws are rejected and
/// resampled. Zero sigma returns the means without consuming the stream.
SlopeScale sample_slope_scale(const MismatchModel& model, RngStream& rng);
SlopeScale sample_slope_scale(const MismatchModel& model, uint64_t seed);

/// n_runs scaled I-F curves over the given currents. Run k is drawn from an
/// independent child stream, so runs are reproducible regardless of order.
std::vector<Curve> mc_if_curves(const ring::RingConfig& cfg, const MismatchModel& model,
                                int n_runs, std::span<const double> currents, uint64_t seed);

/// CSV: run_id,current_a,freq_hz
void mc_curves_to_csv(std::ostream& os, std::span<const Curve> curves);

/// Supply-voltage sensitivity spread applied multiplicatively to neuron
/// outputs at inference. Temperature sensitivity is near-negligible for the
/// differential core, so its term defaults to zero and only contributes when
/// configured.
struct SupplyPerturbation {
    double mean_pct = -0.78;
    double std_pct = 1.74;
    double vdd_min = 1.0;
    double vdd_max = 1.2;
    double temp_mean_pct = 0.0;
    double temp_std_pct = 0.0;

    void validate() const;
};

/// Gaussian draw in percent, clamped to +-3 sigma.
double sample_supply_perturbation(const SupplyPerturbation& p, RngStream& rng);
double sample_supply_perturbation(const SupplyPerturbation& p, uint64_t seed);

}  // namespace ccosim::variation
