#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccosim/neuron.hpp"
#include "ccosim/nn/dataset.hpp"
#include "ccosim/variation.hpp"

namespace ccosim::nn {

/// Software trains and evaluates with plain ReLU. HardwareInference trains
/// with ReLU(m-tilde x) and evaluates with the custom activation.
/// HardwareTrainInference uses the custom activation in both phases.
enum class ActivationMode { Software, HardwareInference, HardwareTrainInference };

ActivationMode mode_from_name(std::string_view name);
std::string_view mode_name(ActivationMode m);

struct TrainConfig {
    std::vector<int> hidden{64, 32};
    int epochs = 30;
    int batch_size = 32;
    double lr = 1.5e-3;
    int trials = 3;

    void validate() const;
};

/// Dense network with categorical cross-entropy loss and adaptive-moment
/// gradient descent. Per-neuron activation slopes are frozen at construction
/// (static mismatch); jitter noise is redrawn on every forward evaluation.
/// Training is single-threaded and bitwise deterministic for a fixed seed.
class Mlp {
public:
    Mlp(std::vector<int> layers, neuron::ActivationModel act, ActivationMode mode, uint64_t seed);

    /// One full training run; returns false when the loss diverged (NaN).
    bool train(const std::vector<std::vector<double>>& xs, const std::vector<int>& ys,
               const TrainConfig& tcfg);

    double evaluate(const std::vector<std::vector<double>>& xs, const std::vector<int>& ys) const;

    /// Evaluation with per-neuron multiplicative supply perturbation applied
    /// to every hidden activation.
    double evaluate_with_supply(const std::vector<std::vector<double>>& xs,
                                const std::vector<int>& ys,
                                const variation::SupplyPerturbation& p, uint64_t seed) const;

    /// Redraw the per-neuron mismatch slopes (a new hardware instance).
    void resample_slopes(uint64_t seed);

    const std::vector<int>& layers() const { return layers_; }

private:
    struct Layer {
        int in = 0, out = 0;
        std::vector<double> w, b;       // w is out x in, row-major
        std::vector<double> mw, vw, mb, vb;  // moment estimates
        std::vector<neuron::NeuronSlopes> slopes;
    };

    void forward(std::span<const double> x, std::vector<std::vector<double>>& z,
                 std::vector<std::vector<double>>& a, bool training, RngStream* noise,
                 const std::vector<std::vector<double>>* hidden_scale = nullptr) const;
    double hidden_act(double u, const neuron::NeuronSlopes& s, bool training,
                      RngStream* noise) const;
    double hidden_grad(double u, const neuron::NeuronSlopes& s, bool training) const;

    std::vector<int> layers_;
    neuron::ActivationModel act_;
    ActivationMode mode_;
    uint64_t seed_;
    std::vector<Layer> net_;
    long adam_t_ = 0;
};

}  // namespace ccosim::nn
