#pragma once

#include <vector>

#include "smartlet/vec3.hpp"

namespace smartlet::photonics {

inline constexpr double kOneSun = 0.1;  // W/cm²
inline constexpr double kDomeLedIrradiance = 50e-6;  // W/cm² at the dome centre

// Calibration points: single tubular cell 11.5 %, 8-cell string 1.5 % at ~17 µW.
inline constexpr double kSingleCellPce = 11.5;
inline constexpr double kStringPce = 1.5;
inline constexpr double kStringCurrent = 7e-6;
inline constexpr double kStringVoltage = 2.1;
inline constexpr double kStringPower = 17e-6;
// Footprints solved from the PCE definition so the points above hold exactly.
inline constexpr double kSingleCellArea = (0.5 * 50e-6 * 0.65) / (kOneSun * kSingleCellPce / 100.0);
inline constexpr double kStringArea = kStringPower / (kOneSun * kStringPce / 100.0);

enum class CellKind { Planar, Tubular };

struct SolarCellSpec {
    double iSc = 50e-6;
    double vOc = 0.65;
    double fillFactor = 0.5;
    double footprintArea = kSingleCellArea;
    CellKind kind = CellKind::Tubular;
    Vec3 normal{0, 0, 1};   // Planar
    Vec3 tubeAxis{1, 0, 0};  // Tubular
    Vec3 mount{0, 0, 0};     // outward edge bisector; zero = unshadowed
    double endCapFloor = 0.2;
};

// String-level response parameters (see README for the derivation).
struct StringModel {
    double currentScale = 1.0;    // κ
    double voltageScale = 1.0;    // ν
    double fillFactor = 0.5;      // FF_string
    double shadowWidth = 0.4;     // soft visibility ramp
    double currentGate = 0.7;     // cells below gate·max do not limit current
    double saturation = 0.95;     // cell voltage saturates at this illumination factor
};

struct SeriesString {
    std::vector<SolarCellSpec> cells;
    bool bypassDiodes = false;
    StringModel model;
};

enum class SourceKind { Sun, DomeLed, PeerLed };

struct LightSource {
    SourceKind kind = SourceKind::Sun;
    Vec3 direction{0, 0, 1};  // unit vector pointing toward the source
    double irradiance = kOneSun;  // W/cm²
};

struct LightEnvironment {
    std::vector<LightSource> sources;
};

struct StringOutput {
    double power = 0, vOut = 0, iOut = 0;
};

// 100·pMax/(pIn·area); throws DomainError for non-positive pIn or area.
double pce(double pMax, double pIn, double area);

double angular_factor(const SolarCellSpec& cell, const Vec3& incidence);
double visibility(const SolarCellSpec& cell, const Vec3& incidence, const StringModel& model);

StringOutput string_power(const SeriesString& s, const LightEnvironment& env, const Rotation& pose = {});

// Eight tubes on four antipodal edge pairs, calibrated at 1 sun from above.
SeriesString folded_cube_string();
// Eight flat cells facing +z before self-folding.
SeriesString prefolded_string();
// Fit κ and ν so `env` produces exactly (current, voltage); FF_string from power.
void calibrate(SeriesString& s, const LightEnvironment& env, double current, double voltage, double power);

// ---- light dome ---------------------------------------------------------------

inline constexpr int kDomeAzimuths = 16;
inline constexpr int kDomeAltitudes = 21;
inline constexpr double kDomeAzimuthStep = 22.5;
inline constexpr double kDomeAltitudeStep = 4.5;

enum class DomeMode { Prefolded, Folded };

struct DomeCell {
    double azimuthDeg = 0, altitudeDeg = 0;
    double relative = 0;  // normalized to grid maximum
    StringOutput out;
};

Vec3 dome_direction(double azimuthDeg, double altitudeDeg);

// One power evaluation per dome LED; `enabled` (336 entries, az-major) masks LEDs.
std::vector<DomeCell> dome_sweep(const SeriesString& s, const std::vector<bool>& enabled = {});
std::vector<DomeCell> dome_sweep(DomeMode mode);

struct GridStats {
    double mean = 0, stddev = 0, cv = 0, min = 0, max = 0, minNonZero = 0;
};
GridStats grid_stats(const std::vector<DomeCell>& grid);

}  // namespace smartlet::photonics
