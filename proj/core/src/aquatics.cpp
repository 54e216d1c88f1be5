#include "smartlet/aquatics.hpp"

#include <algorithm>
#include <cmath>

#include "smartlet/error.hpp"

namespace smartlet::aquatics {

void WaterParams::check() const {
    const double positives[] = {density, kBulk, kSurface, drag, capillaryLength, capillaryF0, bondForcePerUnit, maxSpeed};
    for (double v : positives)
        if (!(v > 0)) throw ConfigError("water parameters must be positive");
    if (!(kSurface > kBulk)) throw ConfigError("surface dissolution must exceed bulk dissolution");
    if (brownianSigma < 0 || captureFraction <= 0 || capillaryCutoff <= 0)
        throw ConfigError("invalid brownian/capture/cutoff parameter");
}

double excess_weight(const BodyParams& b, const WaterParams& w) {
    return kGravity * (b.dryMass - w.density * b.solidVolume);
}

double critical_volume(const BodyParams& b, const WaterParams& w) { return b.dryMass / w.density - b.solidVolume; }

double gas_rate(double current) {
    if (current < 0) throw DomainError("gas_rate: negative current");
    return 3.0 * current * kMolarVolume / (4.0 * kFaraday);
}

double buoyancy_force(const SmartletBody& body, const WaterParams& w) {
    // written as ρg(V − V_crit) so the sign flips exactly at V_crit
    return w.density * kGravity * (body.gasVolume - critical_volume(body.params, w));
}

double bge_current(double harvestedPower, double stringVoltage) {
    if (stringVoltage < kElectrolysisMinVoltage || harvestedPower <= 0) return 0.0;
    return std::min(harvestedPower / kBgeVoltage, kBgeMaxCurrent);
}

double gas_step(double volume, double rate, double k, double dt) {
    const double steady = rate / k;
    const double v = steady + (volume - steady) * std::exp(-k * dt);
    return std::max(0.0, v);
}

double capillary_force(double d, double dContact, const WaterParams& w) {
    const double gap = std::max(0.0, d - dContact);
    if (gap > w.capillaryCutoff) return 0.0;
    return w.capillaryF0 * std::exp(-gap / w.capillaryLength);
}

double floor_z(const BodyParams& b) { return b.edge / 2; }
double surface_z(const BodyParams& b, const Tank& t) { return t.waterDepth - b.edge / 2; }

SmartletBody step_motion(const SmartletBody& in, const MotionInput& mi, const WaterParams& w, const Tank& tank,
                         double dt) {
    SmartletBody b = in;
    const double k = in.atSurface ? w.kSurface : w.kBulk;
    b.gasVolume = gas_step(in.gasVolume, mi.gasRate, k, dt);
    if (mi.pinned) {
        b.velocity = {};
        return b;
    }

    Vec3 v = mi.force / w.drag;
    // the floor and the interface carry any force pushing into them
    if (in.onFloor && v.z < 0) v.z = 0;
    if (in.atSurface && v.z > 0) v.z = 0;
    const double speed = norm(v);
    if (speed > w.maxSpeed) v = v * (w.maxSpeed / speed);

    Vec3 p = in.position + v * dt;
    const bool inColumn = !in.onFloor && !in.atSurface;
    if (inColumn && w.brownianSigma > 0) {
        const double s = w.brownianSigma * std::sqrt(dt);
        p.x += s * mi.kick.x;
        p.y += s * mi.kick.y;
    }

    const double half = in.params.edge / 2;
    p.x = std::clamp(p.x, half, tank.sizeX - half);
    p.y = std::clamp(p.y, half, tank.sizeY - half);
    const double zf = floor_z(in.params), zs = surface_z(in.params, tank);
    b.onFloor = p.z <= zf;
    b.atSurface = p.z >= zs;
    p.z = std::clamp(p.z, zf, zs);
    b.position = p;
    b.velocity = (p - in.position) / dt;
    return b;
}

}  // namespace smartlet::aquatics
