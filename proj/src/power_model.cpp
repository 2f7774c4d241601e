#include "ccosim/power_model.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ccosim::power {

void FomInputs::validate() const {
    if (!(power > 0.0) || !(bandwidth > 0.0) || enob < 0.0)
        throw std::invalid_argument("FomInputs: power and bandwidth must be positive");
}

double fom(const FomInputs& in) {
    in.validate();
    return in.power / (std::exp2(in.enob) * 2.0 * in.bandwidth);
}

double fom_enob(double power, double target_fom, double bandwidth) {
    if (!(power > 0.0) || !(target_fom > 0.0) || !(bandwidth > 0.0))
        throw std::invalid_argument("fom_enob: inputs must be positive");
    return std::log2(power / (target_fom * 2.0 * bandwidth));
}

namespace {

double tail_current_for(double f, const ring::RingConfig& cfg) {
    ring::RingConfig unit = cfg;
    unit.i_tail = 1.0;
    return f / ring::frequency(unit);  // frequency is linear in the tail current
}

}  // namespace

PowerModel PowerModel::calibrated(const ring::RingConfig& cfg) {
    // anchors: e = 0.38 pJ/cycle at i = 10 nA, e = 0.11 pJ/cycle at f = 80 MHz
    PowerModel pm;
    ring::RingConfig lo_cfg = cfg;
    lo_cfg.i_tail = 10e-9;
    const double f_lo = ring::frequency(lo_cfg);
    const double f_hi = 80e6;
    const double p_lo = 0.38e-12 * f_lo;
    const double p_hi = 0.11e-12 * f_hi;
    const double i_lo = 10e-9;
    const double i_hi = tail_current_for(f_hi, cfg);
    pm.k_mirror = (p_hi - p_lo) / (pm.vdd * (i_hi - i_lo));
    pm.p_fixed = p_lo - pm.vdd * i_lo * pm.k_mirror;
    return pm;
}

double supply_power(double f, const ring::RingConfig& cfg, const PowerModel& pm) {
    if (!(f > 0.0)) throw std::invalid_argument("supply_power: frequency must be > 0");
    return pm.vdd * tail_current_for(f, cfg) * pm.k_mirror + pm.p_fixed;
}

std::vector<EnergyRow> energy_per_cycle_report(const ring::RingConfig& cfg,
                                               std::span<const double> currents,
                                               const PowerModel& pm) {
    std::vector<EnergyRow> rows;
    rows.reserve(currents.size());
    for (double i : currents) {
        ring::RingConfig c = cfg;
        c.i_tail = i;
        const double f = ring::frequency(c);
        if (!(f > 0.0)) continue;  // division guard
        EnergyRow row;
        row.i_tail = i;
        row.freq = f;
        row.power = supply_power(f, cfg, pm);
        row.energy_per_cycle = row.power / f;
        rows.push_back(row);
    }
    return rows;
}

void energy_report_to_csv(std::ostream& os, std::span<const EnergyRow> rows) {
    os << "i_tail_a,freq_hz,power_w,energy_per_cycle_j\n";
    char buf[128];
    for (const EnergyRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.8e,%.8e,%.8e,%.8e\n", r.i_tail, r.freq, r.power,
                      r.energy_per_cycle);
        os << buf;
    }
}

double isel_resistance(bool isel_high) { return isel_high ? 1e6 : 10e6; }

double vi_map(double vdac, bool isel_high) {
    if (!(vdac >= 0.0)) throw std::invalid_argument("vi_map: negative VDAC");
    return vdac / isel_resistance(isel_high);
}

}  // namespace ccosim::power
