#include "ccosim/nn/bench.hpp"

#include <cmath>
#include <stdexcept>

namespace ccosim::nn {

BenchResult train_and_eval(const Dataset& data, const TrainConfig& tcfg,
                           const neuron::ActivationModel& act, ActivationMode mode,
                           uint64_t seed) {
    data.validate();
    tcfg.validate();
    std::vector<int> layers;
    layers.push_back(data.input_dim);
    for (int h : tcfg.hidden) layers.push_back(h);
    layers.push_back(data.n_classes);

    BenchResult res;
    for (int trial = 0; trial < tcfg.trials; ++trial) {
        Mlp net(layers, act, mode, seed + static_cast<uint64_t>(trial));
        TrialResult tr;
        if (!net.train(data.train_x, data.train_y, tcfg)) {
            tr.diverged = true;
            ++res.diverged_count;
        } else {
            tr.accuracy = net.evaluate(data.test_x, data.test_y);
        }
        res.trials.push_back(tr);
    }
    double sum = 0.0;
    int n = 0;
    for (const TrialResult& t : res.trials)
        if (!t.diverged) {
            sum += t.accuracy;
            ++n;
        }
    if (n > 0) {
        res.mean_accuracy = sum / n;
        double ss = 0.0;
        for (const TrialResult& t : res.trials)
            if (!t.diverged) ss += (t.accuracy - res.mean_accuracy) * (t.accuracy - res.mean_accuracy);
        res.std_accuracy = std::sqrt(ss / n);
    }
    return res;
}

double supply_perturbation_eval(const Mlp& model, const Dataset& data,
                                const variation::SupplyPerturbation& p, uint64_t seed) {
    const double clean = model.evaluate(data.test_x, data.test_y);
    const double perturbed = model.evaluate_with_supply(data.test_x, data.test_y, p, seed);
    return clean - perturbed;
}

double gradient_check(const neuron::ActivationModel& act, int n_points, uint64_t seed,
                      double eps) {
    if (act.jitter_sigma != 0.0)
        throw std::invalid_argument("gradient_check: requires a noiseless model");
    RngStream rng(seed, "nn.gradcheck");
    neuron::NeuronSlopes slopes{act.mu1, act.mu2};
    const double h = 1e-6;
    double max_rel = 0.0;
    for (int k = 0; k < n_points; ++k) {
        const double x = rng.uniform(-2.0, 2.0);
        if (std::abs(x) < eps || std::abs(x - act.boundary) < eps) continue;
        const double fp = neuron::custom_activation(x + h, act, slopes, 0.0);
        const double fm = neuron::custom_activation(x - h, act, slopes, 0.0);
        const double fd = (fp - fm) / (2.0 * h);
        const double an = neuron::custom_activation_grad(x, act, slopes);
        const double denom = std::max({std::abs(fd), std::abs(an), 1e-12});
        max_rel = std::max(max_rel, std::abs(fd - an) / denom);
    }
    return max_rel;
}

}  // namespace ccosim::nn
