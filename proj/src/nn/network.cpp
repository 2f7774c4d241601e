#include "ccosim/nn/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ccosim::nn {

ActivationMode mode_from_name(std::string_view name) {
    if (name == "software") return ActivationMode::Software;
    if (name == "hw_inference") return ActivationMode::HardwareInference;
    if (name == "hw_train_inference") return ActivationMode::HardwareTrainInference;
    throw std::invalid_argument("unknown activation mode: " + std::string(name));
}

std::string_view mode_name(ActivationMode m) {
    switch (m) {
        case ActivationMode::Software: return "software";
        case ActivationMode::HardwareInference: return "hw_inference";
        case ActivationMode::HardwareTrainInference: return "hw_train_inference";
    }
    return "unknown";
}

void TrainConfig::validate() const {
    if (hidden.empty()) throw std::invalid_argument("TrainConfig: need hidden layers");
    if (epochs < 1 || batch_size < 1 || trials < 1 || !(lr > 0.0))
        throw std::invalid_argument("TrainConfig: bad training parameters");
}

Mlp::Mlp(std::vector<int> layers, neuron::ActivationModel act, ActivationMode mode, uint64_t seed)
    : layers_(std::move(layers)), act_(act), mode_(mode), seed_(seed) {
    if (layers_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output");
    act_.validate();
    RngStream init(seed_, "nn.init");
    net_.resize(layers_.size() - 1);
    for (size_t l = 0; l < net_.size(); ++l) {
        Layer& L = net_[l];
        L.in = layers_[l];
        L.out = layers_[l + 1];
        L.w.resize(size_t(L.out) * L.in);
        L.b.assign(L.out, 0.0);
        const double scale = std::sqrt(2.0 / L.in);
        for (double& w : L.w) w = init.normal(0.0, scale);
        L.mw.assign(L.w.size(), 0.0);
        L.vw.assign(L.w.size(), 0.0);
        L.mb.assign(L.b.size(), 0.0);
        L.vb.assign(L.b.size(), 0.0);
    }
    resample_slopes(seed_);
}

void Mlp::resample_slopes(uint64_t seed) {
    RngStream rng(seed, "nn.slopes");
    for (Layer& L : net_) {
        L.slopes.assign(L.out, neuron::NeuronSlopes{});
        if (mode_ == ActivationMode::Software) continue;
        for (auto& s : L.slopes) s = neuron::draw_slopes(act_, rng);
    }
}

double Mlp::hidden_act(double u, const neuron::NeuronSlopes& s, bool training,
                       RngStream* noise) const {
    switch (mode_) {
        case ActivationMode::Software:
            return std::max(u, 0.0);
        case ActivationMode::HardwareInference:
            if (training) return std::max(act_.mean_slope * u, 0.0);
            break;
        case ActivationMode::HardwareTrainInference:
            break;
    }
    double n = 0.0;
    if (act_.jitter_sigma > 0.0 && noise != nullptr) n = noise->normal(0.0, act_.jitter_sigma);
    return neuron::custom_activation(u, act_, s, n);
}

double Mlp::hidden_grad(double u, const neuron::NeuronSlopes& s, bool training) const {
    switch (mode_) {
        case ActivationMode::Software:
            return u > 0.0 ? 1.0 : 0.0;
        case ActivationMode::HardwareInference:
            if (training) return act_.mean_slope * u > 0.0 ? act_.mean_slope : 0.0;
            break;
        case ActivationMode::HardwareTrainInference:
            break;
    }
    return neuron::custom_activation_grad(u, act_, s);
}

void Mlp::forward(std::span<const double> x, std::vector<std::vector<double>>& z,
                  std::vector<std::vector<double>>& a, bool training, RngStream* noise,
                  const std::vector<std::vector<double>>* hidden_scale) const {
    const size_t depth = net_.size();
    z.resize(depth);
    a.resize(depth + 1);
    a[0].assign(x.begin(), x.end());
    for (size_t l = 0; l < depth; ++l) {
        const Layer& L = net_[l];
        z[l].assign(L.out, 0.0);
        for (int o = 0; o < L.out; ++o) {
            const double* wr = &L.w[size_t(o) * L.in];
            double acc = L.b[o];
            for (int i = 0; i < L.in; ++i) acc += wr[i] * a[l][i];
            z[l][o] = acc;
        }
        a[l + 1].resize(L.out);
        if (l + 1 < depth) {
            for (int o = 0; o < L.out; ++o) {
                double h = hidden_act(z[l][o], L.slopes[o], training, noise);
                if (hidden_scale != nullptr) h *= (*hidden_scale)[l][o];
                a[l + 1][o] = h;
            }
        } else {
            // softmax output
            const double zmax = *std::max_element(z[l].begin(), z[l].end());
            double sum = 0.0;
            for (int o = 0; o < L.out; ++o) {
                a[l + 1][o] = std::exp(z[l][o] - zmax);
                sum += a[l + 1][o];
            }
            for (int o = 0; o < L.out; ++o) a[l + 1][o] /= sum;
        }
    }
}

bool Mlp::train(const std::vector<std::vector<double>>& xs, const std::vector<int>& ys,
                const TrainConfig& tcfg) {
    tcfg.validate();
    if (xs.empty() || xs.size() != ys.size()) throw std::invalid_argument("train: bad data");
    RngStream shuffle(seed_, "nn.shuffle");
    RngStream noise(seed_, "nn.noise");
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    std::vector<size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<std::vector<double>> z, a, delta(net_.size());
    for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
        // Fisher-Yates with the dedicated stream
        for (size_t i = order.size() - 1; i > 0; --i) {
            const size_t j = shuffle.next_u64() % (i + 1);
            std::swap(order[i], order[j]);
        }
        for (size_t start = 0; start < order.size(); start += tcfg.batch_size) {
            const size_t stop = std::min(order.size(), start + tcfg.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            // zero-init gradient accumulators reusing the moment buffers' shape
            std::vector<std::vector<double>> gw(net_.size()), gb(net_.size());
            for (size_t l = 0; l < net_.size(); ++l) {
                gw[l].assign(net_[l].w.size(), 0.0);
                gb[l].assign(net_[l].b.size(), 0.0);
            }
            for (size_t k = start; k < stop; ++k) {
                const size_t idx = order[k];
                forward(xs[idx], z, a, true, &noise);
                const size_t last = net_.size() - 1;
                delta[last].assign(net_[last].out, 0.0);
                for (int o = 0; o < net_[last].out; ++o)
                    delta[last][o] = a[last + 1][o] - (o == ys[idx] ? 1.0 : 0.0);
                for (size_t l = net_.size(); l-- > 0;) {
                    const Layer& L = net_[l];
                    for (int o = 0; o < L.out; ++o) {
                        const double d = delta[l][o];
                        gb[l][o] += d;
                        double* gwr = &gw[l][size_t(o) * L.in];
                        for (int i = 0; i < L.in; ++i) gwr[i] += d * a[l][i];
                    }
                    if (l == 0) break;
                    const Layer& P = net_[l - 1];
                    delta[l - 1].assign(P.out, 0.0);
                    for (int i = 0; i < L.in; ++i) {
                        double acc = 0.0;
                        for (int o = 0; o < L.out; ++o) acc += L.w[size_t(o) * L.in + i] * delta[l][o];
                        delta[l - 1][i] = acc * hidden_grad(z[l - 1][i], P.slopes[i], true);
                    }
                }
            }
            ++adam_t_;
            const double corr1 = 1.0 - std::pow(b1, static_cast<double>(adam_t_));
            const double corr2 = 1.0 - std::pow(b2, static_cast<double>(adam_t_));
            for (size_t l = 0; l < net_.size(); ++l) {
                Layer& L = net_[l];
                for (size_t i = 0; i < L.w.size(); ++i) {
                    const double g = gw[l][i] * inv_batch;
                    L.mw[i] = b1 * L.mw[i] + (1.0 - b1) * g;
                    L.vw[i] = b2 * L.vw[i] + (1.0 - b2) * g * g;
                    L.w[i] -= tcfg.lr * (L.mw[i] / corr1) / (std::sqrt(L.vw[i] / corr2) + eps);
                }
                for (size_t i = 0; i < L.b.size(); ++i) {
                    const double g = gb[l][i] * inv_batch;
                    L.mb[i] = b1 * L.mb[i] + (1.0 - b1) * g;
                    L.vb[i] = b2 * L.vb[i] + (1.0 - b2) * g * g;
                    L.b[i] -= tcfg.lr * (L.mb[i] / corr1) / (std::sqrt(L.vb[i] / corr2) + eps);
                }
            }
        }
        // divergence probe: non-finite cross-entropy on a handful of samples
        for (size_t k = 0; k < std::min<size_t>(8, order.size()); ++k) {
            forward(xs[order[k]], z, a, true, &noise);
            const double loss = -std::log(a.back()[static_cast<size_t>(ys[order[k]])]);
            if (!std::isfinite(loss)) return false;
        }
    }
    return true;
}

double Mlp::evaluate(const std::vector<std::vector<double>>& xs, const std::vector<int>& ys) const {
    RngStream noise(seed_, "nn.eval_noise");
    std::vector<std::vector<double>> z, a;
    size_t correct = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        forward(xs[k], z, a, false, &noise);
        const auto& out = a.back();
        const auto arg = std::max_element(out.begin(), out.end()) - out.begin();
        if (arg == ys[k]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(xs.size());
}

double Mlp::evaluate_with_supply(const std::vector<std::vector<double>>& xs,
                                 const std::vector<int>& ys,
                                 const variation::SupplyPerturbation& p, uint64_t seed) const {
    // per-neuron multiplicative output factors, fixed for the evaluation
    RngStream pert(seed, "nn.supply");
    std::vector<std::vector<double>> factors(net_.size());
    for (size_t l = 0; l + 1 < net_.size(); ++l) {
        factors[l].resize(net_[l].out);
        for (double& f : factors[l])
            f = 1.0 + variation::sample_supply_perturbation(p, pert) / 100.0;
    }
    RngStream noise(seed_, "nn.eval_noise");
    std::vector<std::vector<double>> z, a;
    size_t correct = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        forward(xs[k], z, a, false, &noise, &factors);
        const auto& out = a.back();
        const auto arg = std::max_element(out.begin(), out.end()) - out.begin();
        if (arg == ys[k]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(xs.size());
}

}  // namespace ccosim::nn
