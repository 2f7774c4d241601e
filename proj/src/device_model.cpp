#include "ccosim/device_model.hpp"

#include <cmath>

namespace ccosim::device {

void DeviceParams::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("DeviceParams: beta must be > 0");
    if (!(vt > 0.0)) throw std::invalid_argument("DeviceParams: vt must be > 0");
    if (!(alpha >= 1.0 && alpha <= 2.0))
        throw std::invalid_argument("DeviceParams: alpha must be in [1.0, 2.0]");
    if (!(gamma > 0.0)) throw std::invalid_argument("DeviceParams: gamma must be > 0");
}

OperatingRegion classify_region(double v_gs, double v_ds, const DeviceParams& p) {
    if (v_gs <= p.vt) return OperatingRegion::CutOff;
    if (v_ds < v_gs - p.vt) return OperatingRegion::Linear;
    return OperatingRegion::Saturation;
}

double drain_current(OperatingRegion region, double v_gs, double v_ds, const DeviceParams& p) {
    if (region == OperatingRegion::CutOff) return 0.0;
    const double overdrive = v_gs - p.vt;
    if (overdrive < 0.0)
        throw std::domain_error("drain_current: v_gs < vt with a conducting region");
    switch (region) {
        case OperatingRegion::Saturation:
            return 0.5 * p.beta * std::pow(overdrive, p.alpha);
        case OperatingRegion::Linear:
            return p.beta * std::pow(overdrive, 0.5 * p.alpha) * v_ds;
        default:
            return 0.0;
    }
}

double drain_current(double v_gs, double v_ds, const DeviceParams& p) {
    return drain_current(classify_region(v_gs, v_ds, p), v_gs, v_ds, p);
}

}  // namespace ccosim::device
