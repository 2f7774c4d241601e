#pragma once

#include <iosfwd>
#include <vector>

#include "ccosim/ring_sim.hpp"

namespace ccosim::power {

struct FomInputs {
    double power = 72e-6;      ///< W
    double enob = 9.8322;      ///< bits (back-solved; see fom_enob)
    double bandwidth = 500e3;  ///< Hz

    void validate() const;
};

/// FOM = P / (2^ENOB * 2 * BW), J per conversion step.
double fom(const FomInputs& in);

/// ENOB back-solved from a target FOM: log2(P / (FOM * 2 * BW)).
double fom_enob(double power, double target_fom, double bandwidth);

/// Total power versus frequency: supply current scaled by the mirror/buffer
/// factor plus a fixed overhead. The two calibration anchors are the ends of
/// the measured tuning band (0.38 pJ/cycle at the 10 nA point, 0.11 pJ/cycle
/// at 80 MHz).
struct PowerModel {
    double vdd = 0.7;
    double k_mirror = 0.0;
    double p_fixed = 0.0;

    static PowerModel calibrated(const ring::RingConfig& cfg);
};

/// Power drawn at frequency f for the topology in cfg (the tail current
/// required for f comes from the phase-average engine).
double supply_power(double f, const ring::RingConfig& cfg, const PowerModel& pm);

struct EnergyRow {
    double i_tail = 0.0;
    double freq = 0.0;
    double power = 0.0;
    double energy_per_cycle = 0.0;
};

/// P/f across the tuning currents; zero-frequency rows are excluded.
std::vector<EnergyRow> energy_per_cycle_report(const ring::RingConfig& cfg,
                                               std::span<const double> currents,
                                               const PowerModel& pm);

void energy_report_to_csv(std::ostream& os, std::span<const EnergyRow> rows);

/// V-I converter mapping I = VDAC / R_tot. ISEL low selects the 10 Mohm path
/// (10-100 nA for VDAC in 0.1-1 V), high the 1 Mohm path (100-1000 nA).
double vi_map(double vdac, bool isel_high);
double isel_resistance(bool isel_high);

}  // namespace ccosim::power
