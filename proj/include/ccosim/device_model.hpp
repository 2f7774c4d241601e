#pragma once

#include <stdexcept>

namespace ccosim::device {

/// Alpha-power-law transistor parameters. PMOS devices reuse the same record
/// with source-referred magnitudes (v_sg, v_sd in place of v_gs, v_ds).
struct DeviceParams {
    double beta = 1.0;       ///< transconductance coefficient, A/V^alpha
    double vt = 0.3;         ///< threshold voltage, V
    double alpha = 1.3;      ///< velocity-saturation exponent, in [1.0, 2.0]
    double gamma = 2.0 / 3.0;///< thermal-noise factor

    void validate() const;
};

enum class OperatingRegion { CutOff = 0, Linear = 1, Saturation = 2 };

/// CutOff iff v_gs <= vt; Linear iff v_ds < v_gs - vt; Saturation otherwise.
/// Total over all real v_ds: a reverse-biased drain (v_ds < 0) of a conducting
/// device classifies as Linear, which gives the reverse current the transient
/// integrator relies on.
OperatingRegion classify_region(double v_gs, double v_ds, const DeviceParams& p);

/// Drain current for an explicit region. Throws std::domain_error when a
/// sub-threshold bias (v_gs < vt) is paired with a conducting region.
///
/// The two-regime model steps at the Linear/Saturation boundary (the linear
/// branch reaches twice the saturation value there when alpha = 2, more for
/// smaller alpha). The step is kept as-is: the phase-average engine only ever
/// evaluates one regime per phase.
double drain_current(OperatingRegion region, double v_gs, double v_ds, const DeviceParams& p);

/// classify_region + drain_current in one call.
double drain_current(double v_gs, double v_ds, const DeviceParams& p);

}  // namespace ccosim::device
