#include "smartlet/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smartlet/error.hpp"

namespace smartlet::photonics {

double pce(double pMax, double pIn, double area) {
    if (!(pIn > 0)) throw DomainError("pce: incident power density must be positive");
    if (!(area > 0)) throw DomainError("pce: area must be positive");
    return 100.0 * pMax / (pIn * area);
}

double angular_factor(const SolarCellSpec& cell, const Vec3& d) {
    if (cell.kind == CellKind::Planar) return std::max(0.0, dot(cell.normal, d));
    const double c = dot(cell.tubeAxis, d);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    return std::max(cell.endCapFloor, s);
}

double visibility(const SolarCellSpec& cell, const Vec3& d, const StringModel& model) {
    if (cell.mount == Vec3{}) return 1.0;
    return std::clamp(0.5 + dot(cell.mount, d) / model.shadowWidth, 0.0, 1.0);
}

namespace {

SolarCellSpec rotated(const SolarCellSpec& c, const Rotation& pose) {
    SolarCellSpec r = c;
    r.normal = pose.apply(c.normal);
    r.tubeAxis = pose.apply(c.tubeAxis);
    r.mount = pose.apply(c.mount);
    return r;
}

// Per-cell illumination in suns (g) and irradiance-weighted geometric factor (f).
struct Illum {
    std::vector<double> g, f;
};

Illum illuminate(const SeriesString& s, const LightEnvironment& env, const Rotation& pose) {
    Illum il{std::vector<double>(s.cells.size(), 0.0), std::vector<double>(s.cells.size(), 0.0)};
    double suns = 0;
    for (const auto& src : env.sources) suns += std::max(0.0, src.irradiance) / kOneSun;
    if (suns <= 0) return il;
    for (std::size_t i = 0; i < s.cells.size(); ++i) {
        const SolarCellSpec c = rotated(s.cells[i], pose);
        double g = 0;
        for (const auto& src : env.sources) {
            if (src.irradiance <= 0) continue;
            const Vec3 d = normalized(src.direction);
            g += (src.irradiance / kOneSun) * angular_factor(c, d) * visibility(c, d, s.model);
        }
        il.g[i] = g;
        il.f[i] = g / suns;
    }
    return il;
}

}  // namespace

StringOutput string_power(const SeriesString& s, const LightEnvironment& env, const Rotation& pose) {
    StringOutput out;
    if (s.cells.empty()) return out;
    const Illum il = illuminate(s, env, pose);
    const double gMax = *std::max_element(il.g.begin(), il.g.end());
    if (gMax <= 0) return out;

    const StringModel& m = s.model;
    const double gate = m.currentGate * gMax;
    double current = s.bypassDiodes ? 0.0 : INFINITY;
    double voltage = 0;
    for (std::size_t i = 0; i < s.cells.size(); ++i) {
        const auto& c = s.cells[i];
        const bool limits = il.g[i] >= gate;
        if (limits) {
            const double ic = c.iSc * il.g[i];
            current = s.bypassDiodes ? std::max(current, ic) : std::min(current, ic);
        }
        // with bypass diodes the sub-threshold cells are shorted out
        if (il.g[i] > 0 && (!s.bypassDiodes || limits))
            voltage += c.vOc * std::min(1.0, il.f[i] / m.saturation);
    }
    out.iOut = m.currentScale * current;
    out.vOut = m.voltageScale * voltage;
    out.power = m.fillFactor * out.iOut * out.vOut;
    return out;
}

void calibrate(SeriesString& s, const LightEnvironment& env, double current, double voltage, double power) {
    s.model.currentScale = 1.0;
    s.model.voltageScale = 1.0;
    s.model.fillFactor = 1.0;
    const StringOutput raw = string_power(s, env);
    if (raw.iOut <= 0 || raw.vOut <= 0) throw ConfigError("calibration environment does not illuminate the string");
    s.model.currentScale = current / raw.iOut;
    s.model.voltageScale = voltage / raw.vOut;
    s.model.fillFactor = power / (current * voltage);
}

SeriesString folded_cube_string() {
    const double h = std::numbers::sqrt2 / 2;
    struct Mount {
        Vec3 bisector, axis;
    };
    const Mount mounts[] = {
        {{h, h, 0}, {0, 0, 1}},  {{-h, -h, 0}, {0, 0, 1}},  // vertical pair
        {{h, -h, 0}, {0, 0, 1}}, {{-h, h, 0}, {0, 0, 1}},   // vertical pair
        {{0, h, h}, {1, 0, 0}},  {{0, -h, -h}, {1, 0, 0}},  // x-axis pair
        {{h, 0, h}, {0, 1, 0}},  {{-h, 0, -h}, {0, 1, 0}},  // y-axis pair
    };
    SeriesString s;
    for (const auto& mt : mounts) {
        SolarCellSpec c;
        c.kind = CellKind::Tubular;
        c.tubeAxis = mt.axis;
        c.mount = mt.bisector;
        s.cells.push_back(c);
    }
    const LightEnvironment top{{{SourceKind::Sun, {0, 0, 1}, kOneSun}}};
    calibrate(s, top, kStringCurrent, kStringVoltage, kStringPower);
    return s;
}

SeriesString prefolded_string() {
    SeriesString s;
    for (int i = 0; i < 8; ++i) {
        SolarCellSpec c;
        c.kind = CellKind::Planar;
        c.normal = {0, 0, 1};
        s.cells.push_back(c);
    }
    s.model.fillFactor = s.cells.front().fillFactor;
    return s;
}

Vec3 dome_direction(double azimuthDeg, double altitudeDeg) {
    const double az = azimuthDeg * std::numbers::pi / 180.0;
    const double al = altitudeDeg * std::numbers::pi / 180.0;
    return {std::cos(al) * std::cos(az), std::cos(al) * std::sin(az), std::sin(al)};
}

std::vector<DomeCell> dome_sweep(const SeriesString& s, const std::vector<bool>& enabled) {
    constexpr int n = kDomeAzimuths * kDomeAltitudes;
    if (!enabled.empty() && enabled.size() != n) throw ConfigError("dome mask must have 336 entries");
    std::vector<DomeCell> grid(n);
    double maxP = 0;
    for (int a = 0; a < kDomeAzimuths; ++a) {
        for (int h = 0; h < kDomeAltitudes; ++h) {
            const int idx = a * kDomeAltitudes + h;
            DomeCell& c = grid[idx];
            c.azimuthDeg = a * kDomeAzimuthStep;
            c.altitudeDeg = h * kDomeAltitudeStep;
            if (!enabled.empty() && !enabled[idx]) continue;
            const LightEnvironment env{
                {{SourceKind::DomeLed, dome_direction(c.azimuthDeg, c.altitudeDeg), kDomeLedIrradiance}}};
            c.out = string_power(s, env);
            maxP = std::max(maxP, c.out.power);
        }
    }
    if (maxP > 0)
        for (auto& c : grid) c.relative = c.out.power / maxP;
    return grid;
}

std::vector<DomeCell> dome_sweep(DomeMode mode) {
    return dome_sweep(mode == DomeMode::Folded ? folded_cube_string() : prefolded_string());
}

GridStats grid_stats(const std::vector<DomeCell>& grid) {
    GridStats st;
    if (grid.empty()) return st;
    st.min = INFINITY;
    st.minNonZero = INFINITY;
    double sum = 0;
    for (const auto& c : grid) {
        sum += c.relative;
        st.min = std::min(st.min, c.relative);
        st.max = std::max(st.max, c.relative);
        if (c.relative > 0) st.minNonZero = std::min(st.minNonZero, c.relative);
    }
    st.mean = sum / static_cast<double>(grid.size());
    double var = 0;
    for (const auto& c : grid) var += (c.relative - st.mean) * (c.relative - st.mean);
    st.stddev = std::sqrt(var / static_cast<double>(grid.size()));
    st.cv = st.mean > 0 ? st.stddev / st.mean : 0.0;
    if (!std::isfinite(st.minNonZero)) st.minNonZero = 0;
    return st;
}

}  // namespace smartlet::photonics
