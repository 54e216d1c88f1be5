#include "smartlet/optical_link.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smartlet::photonics {

double link_irradiance(const OpticalLinkParams& link, const Emitter& e, const Receiver& r) {
    if (!e.on) return 0.0;
    const Vec3 sep = r.position - e.position;
    const double dist = norm(sep);
    double cosE = 1.0, cosR = 1.0;  // coincident: treat as aligned contact
    if (dist > 0) {
        const Vec3 u = sep / dist;
        cosE = dot(normalized(e.normal), u);
        cosR = dot(normalized(r.normal), -u);
    }
    if (cosE <= 0 || cosR <= 0) return 0.0;
    const double dCm = std::max(dist, link.contactDistance) * 100.0;
    return link.i0 * std::pow(cosE, link.m) * cosR / (dCm * dCm);
}

double opd_voltage(const OpticalLinkParams& link, double irradiance) {
    if (irradiance <= 0) return 0.0;
    return link.vSat * irradiance / (irradiance + link.eHalf);
}

OpdReading opd_receive(const OpticalLinkParams& link, const Emitter& e, const Receiver& r) {
    const double v = opd_voltage(link, link_irradiance(link, e, r));
    return {v, v >= link.threshold};
}

double OpdFilter::step(double voltage, double dt) {
    const double alpha = 1.0 - std::exp(-2.0 * std::numbers::pi * link_.bandwidthHz * dt);
    v_ += alpha * (voltage - v_);
    return v_;
}

}  // namespace smartlet::photonics
