#pragma once

#include "smartlet/vec3.hpp"

namespace smartlet::aquatics {

inline constexpr double kGravity = 9.81;           // m/s²
inline constexpr double kFaraday = 96485.33212;     // C/mol
inline constexpr double kMolarVolume = 8.314462618 * 298.15 / 101325.0;  // m³/mol, ideal gas at 25 °C, 1 atm
inline constexpr double kBgeMaxCurrent = 7e-6;      // A
inline constexpr double kBgeVoltage = 2.1;          // V
inline constexpr double kElectrolysisMinVoltage = 1.8;

struct WaterParams {
    double density = 1000.0;
    double kBulk = 0.005;      // 1/s
    double kSurface = 0.02;    // 1/s, methylene-blue bath
    double drag = 2e-5;        // N·s/m
    double capillaryLength = 2.7e-3;
    double capillaryF0 = 1e-6;
    double capillaryCutoff = 27e-3;  // beyond contact
    double bondForcePerUnit = 1e-8;  // N per dock-score unit
    double maxSpeed = 0.02;          // m/s
    double brownianSigma = 5e-5;     // m/√s, lateral, water column only
    double captureFraction = 0.2;    // face gap / edge
    int minDockScore = 6;

    void check() const;  // throws ConfigError
};

struct Tank {
    double sizeX = 0.04, sizeY = 0.04;
    double waterDepth = 0.02;  // interface height above the floor
};

struct BodyParams {
    double edge = 1e-3;
    double dryMass = 9.5e-8;
    double solidVolume = 7.0e-11;
};

struct SmartletBody {
    Vec3 position;
    Vec3 velocity;
    BodyParams params;
    double gasVolume = 0;  // m³
    bool atSurface = false;
    bool onFloor = true;
};

double excess_weight(const BodyParams& b, const WaterParams& w);     // ΔW, N
double critical_volume(const BodyParams& b, const WaterParams& w);   // m³
double gas_rate(double current);                                     // m³/s; DomainError if negative
double buoyancy_force(const SmartletBody& body, const WaterParams& w);  // N, +up
double bge_current(double harvestedPower, double stringVoltage);     // A
// Exact exponential update of dV/dt = rate − kV over dt.
double gas_step(double volume, double rate, double k, double dt);
double capillary_force(double d, double dContact, const WaterParams& w);  // N, attractive magnitude

struct MotionInput {
    Vec3 force;             // net external force, N
    double gasRate = 0;     // m³/s
    Vec3 kick;              // standard-normal lateral draw (x, y used)
    bool pinned = false;
};

// Overdamped step; clamps at floor and interface, updates gas.
SmartletBody step_motion(const SmartletBody& body, const MotionInput& in, const WaterParams& w, const Tank& tank,
                         double dt);

double floor_z(const BodyParams& b);
double surface_z(const BodyParams& b, const Tank& t);

}  // namespace smartlet::aquatics
