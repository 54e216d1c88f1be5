#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "smartlet/vec3.hpp"

namespace smartlet::aquatics {

enum class Wetting : std::uint8_t { Hydrophilic = 0, Hydrophobic = 1 };
enum class Offset : std::uint8_t { Full, HalfX, HalfY };

const char* to_string(Offset o);

// Cells as seen from outside the face: grid[row][col], col along local X.
struct FacePattern {
    std::array<std::array<Wetting, 4>, 4> grid{};
    bool registration = false;

    // Rows of 'H' (hydrophobic) and '.' (hydrophilic); throws ConfigError.
    static FacePattern parse(const std::vector<std::string>& rows, bool registration);
    std::vector<std::string> rows() const;
    bool operator==(const FacePattern&) const = default;
};

// Throws DomainError for half offsets without registration rectangles on both faces.
int dock_score(const FacePattern& a, const FacePattern& b, Offset offset);

struct Contact {
    Face faceA, faceB;
    Offset offset;
    double gap;  // m, face to face
};

// Axis-aligned cubes of edge `edge` at centres a and b.
std::optional<Contact> detect_contact(const Vec3& a, const Vec3& b, double edge);

}  // namespace smartlet::aquatics
