#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ccosim/jitter_model.hpp"
#include "ccosim/neuron.hpp"
#include "ccosim/nn/network.hpp"
#include "ccosim/power_model.hpp"
#include "ccosim/ring_sim.hpp"
#include "ccosim/tdc.hpp"
#include "ccosim/variation.hpp"

namespace ccosim::config {

/// Configuration error carrying the JSON path of the offending key.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct JitterSection {
    double vdd = 1.2;
    double gamma_n = 2.0 / 3.0;
    double gamma_p = 2.0 / 3.0;
    double window = 50e-6;
    int trials = 1000;
    bool measured_calibration = false;  ///< substitute the solved measurement-scale gammas
};

struct SweepSection {
    double i_min = 50e-9;
    double i_max = 1.5e-6;
    int points = 30;
};

struct SpikingSection {
    neuron::SpikingConfig scfg{};
    double step_i = 1e-6;
    double step_start = 10e-6;
    double step_stop = 60e-6;
    double duration = 100e-6;
};

struct NnSection {
    nn::TrainConfig tcfg{};
    std::string mode = "hw_train_inference";
    std::string dataset = "bundled";  ///< "bundled" or "idx"
    int bundled_per_class = 260;
};

struct FomSection {
    double power = 72e-6;
    double bandwidth = 500e3;
    double target_fom = 79e-15;  ///< used to back-solve ENOB when enob < 0
    double enob = -1.0;
};

/// Root document binding every module's parameters plus the seed. Unknown
/// keys are rejected with their path; schema_version must match.
struct RunConfig {
    static constexpr int kSchemaVersion = 1;

    uint64_t seed = 1;
    ring::RingConfig ring = ring::default_ring_config();
    JitterSection jitter{};
    tdc::TdcConfig tdc{};
    double tdc_window = 50e-6;
    variation::MismatchModel mismatch{};
    variation::SupplyPerturbation supply{};
    neuron::ActivationModel activation = neuron::bench_activation_model();
    NnSection nn{};
    SpikingSection spiking{};
    SweepSection sweep{};
    int mc_runs = 2000;
    FomSection fom{};
    double vi_vdac = 0.5;
    bool vi_isel_high = false;

    void validate() const;

    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_json_file(const std::string& path);
    /// Fully resolved document (every field explicit); reparses to an
    /// identical configuration.
    std::string to_json_text() const;
};

}  // namespace ccosim::config
