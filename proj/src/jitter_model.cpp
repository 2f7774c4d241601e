#include "ccosim/jitter_model.hpp"

#include <cmath>
#include <stdexcept>

#include "ccosim/rng.hpp"

namespace ccosim::jitter {

void JitterParams::validate() const {
    if (!(k_boltzmann > 0.0) || !(temperature > 0.0) || !(i_avg > 0.0) || !(f0 > 0.0) ||
        !(vdd > 0.0) || !(vt > 0.0) || !(c_load > 0.0) || n_stages < 1)
        throw std::invalid_argument("JitterParams: all parameters must be positive");
    // zero noise factors are allowed: they cleanly eliminate the device term
    if (gamma_n < 0.0 || gamma_p < 0.0)
        throw std::invalid_argument("JitterParams: noise factors must be >= 0");
    if (!(vdd > vt)) throw std::invalid_argument("JitterParams: vdd must exceed vt");
}

double period_jitter_variance(const JitterParams& p) {
    p.validate();
    const double bracket = 2.0 / (p.vdd - p.vt) * (p.gamma_n + p.gamma_p) + 2.0 / p.vdd;
    return p.k_boltzmann * p.temperature / (p.i_avg * p.f0) * bracket;
}

double f0_estimate(double i, double c, int n, double vdd) {
    if (!(i > 0.0) || !(c > 0.0) || n < 1 || !(vdd > 0.0))
        throw std::invalid_argument("f0_estimate: all inputs must be positive");
    return (i / c) / (n * vdd);
}

double jitter_ratio_prediction(double c_ratio, double i_ratio) {
    if (!(c_ratio > 0.0) || !(i_ratio > 0.0))
        throw std::invalid_argument("jitter_ratio_prediction: ratios must be > 0");
    return c_ratio / (i_ratio * i_ratio);
}

JitterParams make_jitter_params(const ring::RingConfig& cfg, double vdd, double gamma_n,
                                double gamma_p) {
    JitterParams p;
    p.i_avg = cfg.i_tail;
    p.c_load = stage::load_capacitance(cfg.topo, cfg.caps);
    p.vdd = vdd;
    p.vt = cfg.device.vt;
    p.gamma_n = gamma_n;
    p.gamma_p = gamma_p;
    p.n_stages = cfg.n_stages;
    p.f0 = f0_estimate(p.i_avg, p.c_load, p.n_stages, p.vdd);
    return p;
}

double measured_calibration_gamma() {
    // Invert the count-jitter chain at the low tuning point: target 0.22%
    // spread of a 50 us window count. sigma_count ~= sqrt(Nbar) sigma_T / Tbar,
    // so sigma_T = pct * Tbar * sqrt(Nbar); then Eq-form variance gives the
    // bracket and the shared gamma.
    ring::RingConfig cfg = ring::default_ring_config();
    cfg.i_tail = 0.4e-6;
    const double window = 50e-6;
    const double target_pct = 0.22e-2;
    const double f = ring::frequency(cfg);
    const double nbar = f * window;
    const double sigma_t = target_pct * std::sqrt(nbar) / f;
    JitterParams p = make_jitter_params(cfg);
    const double prefix = p.k_boltzmann * p.temperature / (p.i_avg * p.f0);
    const double bracket = sigma_t * sigma_t / prefix;
    return (bracket - 2.0 / p.vdd) / (2.0 / (p.vdd - p.vt)) / 2.0;
}

std::vector<double> sample_periods(const ring::RingConfig& cfg, const JitterParams& p, int count,
                                   uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample_periods: count must be >= 1");
    const double mean = 1.0 / ring::frequency(cfg);
    const double sigma = std::sqrt(period_jitter_variance(p));
    RngStream rng(seed, "jitter.periods");
    std::vector<double> out(count);
    for (double& t : out) t = sigma == 0.0 ? mean : rng.normal(mean, sigma);
    return out;
}

WindowCountStats window_count_jitter(const ring::RingConfig& cfg, const JitterParams& p,
                                     double window, int trials, uint64_t seed) {
    const double mean_period = 1.0 / ring::frequency(cfg);
    if (!(window > 10.0 * mean_period))
        throw std::invalid_argument("window_count_jitter: window must span many periods");
    if (trials < 2) throw std::invalid_argument("window_count_jitter: trials must be >= 2");
    const double sigma = std::sqrt(period_jitter_variance(p));

    WindowCountStats stats;
    stats.counts.reserve(trials);
    RngStream root(seed, "jitter.window");
    for (int tr = 0; tr < trials; ++tr) {
        RngStream rng = root.fork("trial", static_cast<uint64_t>(tr));
        double t = 0.0;
        long count = 0;
        while (true) {
            const double period = sigma == 0.0 ? mean_period : rng.normal(mean_period, sigma);
            if (t + period > window) break;
            t += period;
            ++count;
        }
        stats.counts.push_back(count);
    }
    double sum = 0.0;
    for (long c : stats.counts) sum += static_cast<double>(c);
    stats.mean = sum / trials;
    double ss = 0.0;
    for (long c : stats.counts) {
        const double d = c - stats.mean;
        ss += d * d;
    }
    stats.stddev = std::sqrt(ss / trials);
    stats.percent = stats.mean > 0.0 ? 100.0 * stats.stddev / stats.mean : 0.0;
    return stats;
}

}  // namespace ccosim::jitter
