#pragma once

#include "smartlet/vec3.hpp"

namespace smartlet::photonics {

struct OpticalLinkParams {
    double m = 1.0;                 // Lambertian order
    double i0 = 2.835e-7;           // W/sr on axis
    double vSat = 1.2;              // V
    double eHalf = 1e-6;            // W/cm² at half saturation
    double threshold = 0.7;         // V
    double bandwidthHz = 5000.0;
    double contactDistance = 1e-4;  // m
};

struct Emitter {
    Vec3 position;  // m
    Vec3 normal{1, 0, 0};
    bool on = true;
};

struct Receiver {
    Vec3 position;  // m
    Vec3 normal{-1, 0, 0};
};

struct OpdReading {
    double voltage = 0;
    bool digital = false;
};

double link_irradiance(const OpticalLinkParams& link, const Emitter& e, const Receiver& r);  // W/cm²
double opd_voltage(const OpticalLinkParams& link, double irradiance);
OpdReading opd_receive(const OpticalLinkParams& link, const Emitter& e, const Receiver& r);

// First-order low-pass on the μOPD voltage, thresholded on read.
class OpdFilter {
public:
    explicit OpdFilter(const OpticalLinkParams& link = {}) : link_(link) {}
    double step(double voltage, double dt);
    bool digital() const { return v_ >= link_.threshold; }
    double voltage() const { return v_; }

private:
    OpticalLinkParams link_;
    double v_ = 0;
};

}  // namespace smartlet::photonics
