#include "ccosim/neuron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace ccosim::neuron {

void ActivationModel::validate() const {
    if (!(mu1 > 0.0) || !(mu2 > 0.0))
        throw std::invalid_argument("ActivationModel: region slopes must be positive");
    if (sigma1 < 0.0 || sigma2 < 0.0 || jitter_sigma < 0.0)
        throw std::invalid_argument("ActivationModel: spreads must be >= 0");
}

std::string ActivationModel::to_json() const {
    nlohmann::json j{
        {"mean_slope", mean_slope}, {"boundary", boundary}, {"mu1", mu1},
        {"sigma1", sigma1},         {"mu2", mu2},           {"sigma2", sigma2},
        {"jitter_sigma", jitter_sigma},
    };
    return j.dump(2);
}

ActivationModel bench_activation_model() {
    ActivationModel m;
    m.mean_slope = 1.0;
    m.boundary = 0.45;
    m.mu1 = 1.0;
    m.sigma1 = 0.04;
    m.mu2 = 0.75;
    m.sigma2 = 0.04;
    m.jitter_sigma = 0.002;
    return m;
}

ActivationModel ActivationModel::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ActivationModel m;
    m.mean_slope = j.at("mean_slope").get<double>();
    m.boundary = j.at("boundary").get<double>();
    m.mu1 = j.at("mu1").get<double>();
    m.sigma1 = j.at("sigma1").get<double>();
    m.mu2 = j.at("mu2").get<double>();
    m.sigma2 = j.at("sigma2").get<double>();
    m.jitter_sigma = j.at("jitter_sigma").get<double>();
    m.validate();
    return m;
}

long rate_response(double i_in, double window, const ring::RingConfig& cfg,
                   const tdc::TdcConfig& tcfg) {
    if (i_in < 0.0) throw std::invalid_argument("rate_response: negative input current");
    if (i_in == 0.0) return 0;
    ring::RingConfig c = cfg;
    c.i_tail = i_in;
    const double f = ring::frequency(c);
    const ring::EdgeStream edges = ring::EdgeStream::uniform(f, window, cfg.n_stages);
    if (edges.edges.empty()) return 0;
    return tdc::convert(edges, window, tcfg).total_steps();
}

namespace {

double through_origin_slope(const variation::Curve& pts, size_t begin, size_t end) {
    double sxy = 0.0, sxx = 0.0;
    for (size_t k = begin; k < end; ++k) {
        sxy += pts[k].first * pts[k].second;
        sxx += pts[k].first * pts[k].first;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit: degenerate currents");
    return sxy / sxx;
}

double region_sse(const variation::Curve& pts, size_t begin, size_t end, double slope) {
    double sse = 0.0;
    for (size_t k = begin; k < end; ++k) {
        const double r = pts[k].second - slope * pts[k].first;
        sse += r * r;
    }
    return sse;
}

}  // namespace

double fit_mean_slope(std::span<const variation::Curve> curves) {
    if (curves.empty()) throw std::invalid_argument("fit_mean_slope: need at least one curve");
    double sum = 0.0;
    for (const variation::Curve& c : curves) {
        if (c.size() < 2) throw std::invalid_argument("fit_mean_slope: curve needs >= 2 points");
        sum += through_origin_slope(c, 0, c.size());
    }
    return sum / static_cast<double>(curves.size());
}

TwoRegionFit fit_two_region(std::span<const variation::Curve> curves,
                            std::span<const double> candidates) {
    if (curves.empty()) throw std::invalid_argument("fit_two_region: need curves");
    if (candidates.empty()) throw std::invalid_argument("fit_two_region: need candidate boundaries");
    for (const variation::Curve& c : curves)
        if (c.size() != curves.front().size())
            throw std::invalid_argument("fit_two_region: curves must share the current grid");

    const size_t npts = curves.front().size();
    double best_mse = std::numeric_limits<double>::infinity();
    double best_b = 0.0;
    size_t best_split = 0;
    bool found = false;

    for (double b : candidates) {
        // region 1: i < b, region 2: i >= b
        size_t split = 0;
        while (split < npts && curves.front()[split].first < b) ++split;
        if (split < 3 || npts - split < 3) continue;
        double sse = 0.0;
        for (const variation::Curve& c : curves) {
            sse += region_sse(c, 0, split, through_origin_slope(c, 0, split));
            sse += region_sse(c, split, npts, through_origin_slope(c, split, npts));
        }
        // strict improvement keeps the smallest boundary on ties
        if (!found || sse < best_mse - 1e-12 * std::max(1.0, best_mse)) {
            best_mse = sse;
            best_b = b;
            best_split = split;
            found = true;
        }
    }
    if (!found)
        throw std::invalid_argument(
            "fit_two_region: no candidate leaves >= 3 points in both regions");

    TwoRegionFit fit;
    fit.boundary = best_b;
    fit.mse = best_mse;
    std::vector<double> s1, s2;
    s1.reserve(curves.size());
    s2.reserve(curves.size());
    for (const variation::Curve& c : curves) {
        s1.push_back(through_origin_slope(c, 0, best_split));
        s2.push_back(through_origin_slope(c, best_split, npts));
    }
    auto moments = [](const std::vector<double>& v, double& mu, double& sigma) {
        double sum = 0.0;
        for (double x : v) sum += x;
        mu = sum / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mu) * (x - mu);
        sigma = std::sqrt(ss / static_cast<double>(v.size()));
    };
    moments(s1, fit.mu1, fit.sigma1);
    moments(s2, fit.mu2, fit.sigma2);
    return fit;
}

ActivationModel extract_activation(std::span<const variation::Curve> curves,
                                   double jitter_sigma_rel) {
    const double m_tilde = fit_mean_slope(curves);
    std::vector<double> candidates;
    for (const auto& [i, f] : curves.front()) candidates.push_back(i);
    const TwoRegionFit fit = fit_two_region(curves, candidates);

    const double i_max = curves.front().back().first;
    ActivationModel m;
    m.mean_slope = m_tilde;                  // raw units, Hz/A
    m.boundary = fit.boundary / i_max;       // normalized input units
    m.mu1 = fit.mu1 / m_tilde;
    m.sigma1 = fit.sigma1 / m_tilde;
    m.mu2 = fit.mu2 / m_tilde;
    m.sigma2 = fit.sigma2 / m_tilde;
    m.jitter_sigma = jitter_sigma_rel;
    m.validate();
    return m;
}

NeuronSlopes draw_slopes(const ActivationModel& model, RngStream& rng) {
    model.validate();
    auto draw = [&rng](double mu, double sigma) {
        if (sigma == 0.0) return mu;
        double v;
        do {
            v = rng.normal(mu, sigma);
        } while (v <= 0.0);
        return v;
    };
    return {draw(model.mu1, model.sigma1), draw(model.mu2, model.sigma2)};
}

double custom_activation(double x, const ActivationModel& model, const NeuronSlopes& slopes,
                         double noise) {
    const double u = (x < model.boundary ? slopes.m1 : slopes.m2) * x;
    double out = std::max(u, 0.0);
    if (noise != 0.0) out += u * noise;
    if (model.clamp_negative && out < 0.0) out = 0.0;
    return out;
}

double custom_activation_grad(double x, const ActivationModel& model,
                              const NeuronSlopes& slopes) {
    const double m = x < model.boundary ? slopes.m1 : slopes.m2;
    return m * x > 0.0 ? m : 0.0;
}

void SpikingConfig::validate() const {
    if (i_leak < 0.0) throw std::invalid_argument("SpikingConfig: i_leak must be >= 0");
    if (!(c_mirror > 0.0)) throw std::invalid_argument("SpikingConfig: c_mirror must be > 0");
    if (spike_phase < 0) throw std::invalid_argument("SpikingConfig: bad spike phase");
}

double cycle_charge(const ring::RingConfig& cfg) {
    return 2.0 * cfg.n_stages * stage::load_capacitance(cfg.topo, cfg.caps) * cfg.v_swing;
}

namespace {

// Emits spike times as phi advances from phi0 to phi1 (phi in cycles; spike
// threshold at integer + offset). Advance is linear in time over [t0, t1].
void emit_spikes(double phi0, double phi1, double t0, double t1, double offset,
                 std::vector<double>& out) {
    if (!(phi1 > phi0)) return;
    double k = std::floor(phi0 - offset) + 1.0;
    for (; k + offset <= phi1; k += 1.0) {
        const double frac = (k + offset - phi0) / (phi1 - phi0);
        out.push_back(t0 + frac * (t1 - t0));
    }
}

}  // namespace

std::vector<double> spiking_response(std::span<const CurrentSegment> waveform, double duration,
                                     const SpikingConfig& scfg, const ring::RingConfig& cfg) {
    scfg.validate();
    if (!(duration > 0.0)) throw std::invalid_argument("spiking_response: bad duration");
    const double q_cycle = cycle_charge(cfg);
    const double offset = static_cast<double>(scfg.spike_phase) / (2.0 * cfg.n_stages);

    std::vector<double> spikes;
    double phi = 0.0;
    for (size_t k = 0; k < waveform.size(); ++k) {
        const double t0 = waveform[k].t_start;
        const double t1 = k + 1 < waveform.size() ? waveform[k + 1].t_start : duration;
        if (!(t1 > t0)) continue;
        const double drive = std::max(0.0, waveform[k].i - scfg.i_leak);
        if (drive <= 0.0) continue;
        const double phi1 = phi + drive / q_cycle * (t1 - t0);
        emit_spikes(phi, phi1, t0, t1, offset, spikes);
        phi = phi1;
    }
    return spikes;
}

std::vector<double> spiking_response_pulses(std::span<const double> pulse_times, double duration,
                                            const SpikingConfig& scfg,
                                            const ring::RingConfig& cfg) {
    scfg.validate();
    const double q_cycle = cycle_charge(cfg);
    const double q_pulse = scfg.pulse_charge > 0.0 ? scfg.pulse_charge : q_cycle / 4.0;
    const double offset = static_cast<double>(scfg.spike_phase) / (2.0 * cfg.n_stages);

    std::vector<double> spikes;
    double phi = 0.0;
    for (double t : pulse_times) {
        if (t > duration) break;
        const double phi1 = phi + q_pulse / q_cycle;
        // the packet advances the phase at the pulse instant
        double k = std::floor(phi - offset) + 1.0;
        for (; k + offset <= phi1; k += 1.0) spikes.push_back(t);
        phi = phi1;
    }
    return spikes;
}

}  // namespace ccosim::neuron
