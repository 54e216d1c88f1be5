#include "smartlet/docking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smartlet/error.hpp"

namespace smartlet::aquatics {

const char* to_string(Offset o) {
    switch (o) {
        case Offset::Full: return "Full";
        case Offset::HalfX: return "HalfX";
        case Offset::HalfY: return "HalfY";
    }
    return "?";
}

FacePattern FacePattern::parse(const std::vector<std::string>& rows, bool registration) {
    if (rows.size() != 4) throw ConfigError("face pattern needs 4 rows");
    FacePattern p;
    p.registration = registration;
    for (int r = 0; r < 4; ++r) {
        if (rows[r].size() != 4) throw ConfigError("face pattern rows need 4 cells");
        for (int c = 0; c < 4; ++c) {
            const char ch = rows[r][c];
            if (ch == 'H')
                p.grid[r][c] = Wetting::Hydrophobic;
            else if (ch == '.')
                p.grid[r][c] = Wetting::Hydrophilic;
            else
                throw ConfigError("face pattern cells are 'H' or '.'");
        }
    }
    return p;
}

std::vector<std::string> FacePattern::rows() const {
    std::vector<std::string> out(4, std::string(4, '.'));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (grid[r][c] == Wetting::Hydrophobic) out[r][c] = 'H';
    return out;
}

namespace {

using Grid = std::array<std::array<Wetting, 4>, 4>;

// Face-to-face contact: B's local X runs opposite to A's.
Grid mirrored(const Grid& g) {
    Grid m{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m[r][c] = g[r][3 - c];
    return m;
}

// Quarter turns counter-clockwise (col right, row up).
Grid rotated(const Grid& g, int quarters) {
    Grid out = g;
    for (int q = 0; q < quarters; ++q) {
        Grid t{};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) t[c][3 - r] = out[r][c];
        out = t;
    }
    return out;
}

int pair_value(Wetting a, Wetting b) {
    if (a == Wetting::Hydrophobic && b == Wetting::Hydrophobic) return 1;
    return a != b ? -1 : 0;
}

// Overlap sum with B's cell (r, c) over A's cell (r + dr, c + dc).
int overlap(const Grid& a, const Grid& b, int dc, int dr) {
    int s = 0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const int ra = r + dr, ca = c + dc;
            if (ra < 0 || ra > 3 || ca < 0 || ca > 3) continue;
            s += pair_value(a[ra][ca], b[r][c]);
        }
    }
    return s;
}

}  // namespace

int dock_score(const FacePattern& a, const FacePattern& b, Offset offset) {
    const bool registered = a.registration && b.registration;
    if (offset != Offset::Full && !registered)
        throw DomainError("half-offset contacts need registration rectangles on both faces");
    const Grid mb = mirrored(b.grid);
    int best = std::numeric_limits<int>::min();
    auto consider = [&](int quarters, int dc, int dr) {
        best = std::max(best, overlap(a.grid, rotated(mb, quarters), dc, dr));
    };
    switch (offset) {
        case Offset::Full:
            for (int q = 0; q < (registered ? 4 : 1); ++q) consider(q, 0, 0);
            break;
        case Offset::HalfX:
            // a quarter turn would turn HalfX into HalfY, so only 0°/180°
            for (int q : {0, 2})
                for (int s : {-2, 2}) consider(q, s, 0);
            break;
        case Offset::HalfY:
            for (int q : {0, 2})
                for (int s : {-2, 2}) consider(q, 0, s);
            break;
    }
    return best;
}

std::optional<Contact> detect_contact(const Vec3& a, const Vec3& b, double edge) {
    const Vec3 d = b - a;
    int axis = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(d[i]) > std::abs(d[axis])) axis = i;
    const double along = d[axis];
    const double gap = std::abs(along) - edge;
    // face-local X/Y axes: ±x faces (y, z), ±y faces (x, z), ±z faces (x, y)
    static constexpr int kLocal[3][2] = {{1, 2}, {0, 2}, {0, 1}};
    const double ox = std::abs(d[kLocal[axis][0]]) / edge;
    const double oy = std::abs(d[kLocal[axis][1]]) / edge;
    Offset off;
    if (ox < 0.25 && oy < 0.25)
        off = Offset::Full;
    else if (ox < 0.75 && oy < 0.25)
        off = Offset::HalfX;
    else if (oy < 0.75 && ox < 0.25)
        off = Offset::HalfY;
    else
        return std::nullopt;
    const int base = axis * 2;
    const Face fa = static_cast<Face>(along >= 0 ? base : base + 1);
    const Face fb = static_cast<Face>(along >= 0 ? base + 1 : base);
    return Contact{fa, fb, off, gap};
}

}  // namespace smartlet::aquatics
