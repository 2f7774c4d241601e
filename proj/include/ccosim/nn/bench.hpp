#pragma once

#include <cstdint>

#include "ccosim/nn/network.hpp"

namespace ccosim::nn {

struct TrialResult {
    double accuracy = 0.0;
    bool diverged = false;
};

struct BenchResult {
    std::vector<TrialResult> trials;
    double mean_accuracy = 0.0;  ///< over non-diverged trials
    double std_accuracy = 0.0;
    int diverged_count = 0;
};

/// Train and evaluate tcfg.trials independent replicas (trial k uses seed
/// seed + k for weights, shuffling and hardware draws). Diverged runs are
/// excluded from the statistics and flagged.
BenchResult train_and_eval(const Dataset& data, const TrainConfig& tcfg,
                           const neuron::ActivationModel& act, ActivationMode mode, uint64_t seed);

/// Accuracy drop (clean minus perturbed) of a trained network under the
/// supply-sensitivity distribution.
double supply_perturbation_eval(const Mlp& model, const Dataset& data,
                                const variation::SupplyPerturbation& p, uint64_t seed);

/// Max relative error between the analytic activation gradient and central
/// finite differences on a noiseless model, excluding points within eps of
/// the kinks (0 and the boundary).
double gradient_check(const neuron::ActivationModel& act, int n_points = 1000,
                      uint64_t seed = 99, double eps = 1e-3);

}  // namespace ccosim::nn
