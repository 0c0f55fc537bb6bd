#pragma once

#include <map>
#include <string>
#include <vector>

#include "circpack/vec2.hpp"

namespace circpack {

// A finite packing of equal disks in a circular container centered at the origin.
// All lengths share one unit; constructions in this library use disk diameter = 1.
struct Packing {
    double container_radius = 0.0;
    double disk_radius = 0.0;
    std::vector<Vec2> centers;
    std::map<std::string, std::string> metadata;

    int size() const { return static_cast<int>(centers.size()); }
    double diameter() const { return 2.0 * disk_radius; }
    // container diameter / disk diameter
    double ratio() const { return container_radius / disk_radius; }
};

enum class ViolationKind { parameter, overlap, wall };

struct Violation {
    ViolationKind kind = ViolationKind::parameter;
    int a = -1;               // disk index (or -1 for parameter problems)
    int b = -1;               // second disk for overlaps, -1 otherwise
    double gap = 0.0;         // signed clearance in diameters (negative = violation)
    std::string detail;

    std::string describe() const;
};

// All constraint violations at tolerance `tol` (in disk diameters):
// pairwise center distance >= (1 - tol) * d, wall clearance >= -tol * d,
// and positive radii with container_radius >= disk_radius.
std::vector<Violation> validate(const Packing& p, double tol = 1e-9);

bool is_valid(const Packing& p, double tol = 1e-9);

struct Measurement {
    double density = 0.0;  // n * (disk_radius / container_radius)^2
    double ratio = 0.0;    // container_radius / disk_radius
};

// Density and diameter ratio. Throws std::invalid_argument on nonsensical
// parameters (non-positive radii, disk larger than container, no disks).
Measurement measure(const Packing& p);

// JSON interchange. Numbers are written with 17 significant digits so a
// write/read cycle reproduces every double bit-for-bit.
std::string packing_to_json(const Packing& p);
Packing packing_from_json(const std::string& text);
void write_packing(const Packing& p, const std::string& path);
Packing read_packing(const std::string& path);

}  // namespace circpack
