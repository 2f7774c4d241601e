#include "ccosim/variation.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ccosim::variation {

void MismatchModel::validate() const {
    if (!(mean_f_ref > 0.0) || !(sigma_f_ref >= 0.0))
        throw std::invalid_argument("MismatchModel: bad reference statistics");
    if (std::abs(cv - sigma_f_ref / mean_f_ref) > 1e-6)
        throw std::invalid_argument("MismatchModel: cv must equal sigma_f_ref / mean_f_ref");
    if (!(i_ref > 0.0) || !(knee > 0.0))
        throw std::invalid_argument("MismatchModel: currents must be positive");
    if (sigma1_rel < 0.0 || sigma2_rel < 0.0)
        throw std::invalid_argument("MismatchModel: sigmas must be >= 0");
}

SlopeScale sample_slope_scale(const MismatchModel& model, RngStream& rng) {
    model.validate();
    auto draw = [&rng](double mu, double sigma) {
        if (sigma == 0.0) return mu;
        double v;
        do {
            v = rng.normal(mu, sigma);
        } while (v <= 0.0);
        return v;
    };
    return {draw(model.mu1_rel, model.sigma1_rel), draw(model.mu2_rel, model.sigma2_rel)};
}

SlopeScale sample_slope_scale(const MismatchModel& model, uint64_t seed) {
    RngStream rng(seed, "variation.slope");
    return sample_slope_scale(model, rng);
}

std::vector<Curve> mc_if_curves(const ring::RingConfig& cfg, const MismatchModel& model,
                                int n_runs, std::span<const double> currents, uint64_t seed) {
    if (n_runs < 1) throw std::invalid_argument("mc_if_curves: n_runs must be >= 1");
    const Curve nominal = ring::if_curve(cfg, currents);
    RngStream root(seed, "variation.mc");
    std::vector<Curve> out;
    out.reserve(n_runs);
    for (int run = 0; run < n_runs; ++run) {
        RngStream rng = root.fork("run", static_cast<uint64_t>(run));
        const SlopeScale s = sample_slope_scale(model, rng);
        Curve c = nominal;
        for (auto& [i, f] : c) f *= (i < model.knee ? s.m1 : s.m2);
        out.push_back(std::move(c));
    }
    return out;
}

void mc_curves_to_csv(std::ostream& os, std::span<const Curve> curves) {
    os << "run_id,current_a,freq_hz\n";
    char buf[96];
    for (size_t run = 0; run < curves.size(); ++run) {
        for (const auto& [i, f] : curves[run]) {
            std::snprintf(buf, sizeof(buf), "%zu,%.8e,%.8e\n", run, i, f);
            os << buf;
        }
    }
}

void SupplyPerturbation::validate() const {
    if (!(std_pct >= 0.0) || !(temp_std_pct >= 0.0))
        throw std::invalid_argument("SupplyPerturbation: spreads must be >= 0");
    if (!(vdd_min < vdd_max))
        throw std::invalid_argument("SupplyPerturbation: need vdd_min < vdd_max");
}

double sample_supply_perturbation(const SupplyPerturbation& p, RngStream& rng) {
    p.validate();
    double out = p.mean_pct;
    if (p.std_pct > 0.0) {
        const double v = rng.normal(p.mean_pct, p.std_pct);
        out = std::min(std::max(v, p.mean_pct - 3.0 * p.std_pct), p.mean_pct + 3.0 * p.std_pct);
    }
    if (p.temp_std_pct > 0.0) {
        const double t = rng.normal(p.temp_mean_pct, p.temp_std_pct);
        out += std::min(std::max(t, p.temp_mean_pct - 3.0 * p.temp_std_pct),
                        p.temp_mean_pct + 3.0 * p.temp_std_pct);
    } else {
        out += p.temp_mean_pct;
    }
    return out;
}

double sample_supply_perturbation(const SupplyPerturbation& p, uint64_t seed) {
    RngStream rng(seed, "variation.supply");
    return sample_supply_perturbation(p, rng);
}

}  // namespace ccosim::variation
