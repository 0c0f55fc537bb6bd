#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circpack/packing.hpp"
#include "circpack/vec2.hpp"

namespace circpack {

// Congruence fingerprint of a packing: invariant under disk reindexing,
// rotation about the container center, and reflection.  Two fingerprints
// taken at the same quantum compare equal iff the packings are congruent
// to within a few quanta (all lengths in disk diameters).
struct Fingerprint {
    double quantum = 1e-8;
    std::vector<std::int64_t> radial;  // sorted quantized center distances
    std::vector<Vec2> pts;             // centers in diameter units, original pose

    bool operator==(const Fingerprint& o) const;
    bool operator!=(const Fingerprint& o) const { return !(*this == o); }

    // hash of the quantized radial profile; equal packings get equal digests,
    // distinct packings may collide (use == to confirm)
    std::string digest() const;
};

Fingerprint fingerprint(const Packing& p, double quantum = 1e-8);

// True if some rotation (optionally composed with a reflection) about the
// origin maps point set a onto point set b, each point matching to within
// tol.  Intended for packing centers (pairwise distances >= ~1); not a
// general point-set matcher.
bool congruent_points(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double tol);

// Congruence of whole packings, tol in disk diameters; requires equal disk
// counts and equal container/disk ratio to within tol.
bool congruent(const Packing& a, const Packing& b, double tol);

}  // namespace circpack
