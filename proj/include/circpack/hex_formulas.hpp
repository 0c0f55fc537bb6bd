#pragma once

#include <cstdint>

namespace circpack {

// Number of disks in a k-layer curved hexagonal packing: 3k(k+1) + 1.
std::int64_t hex_number(int k);

// Number of congruence classes of curved hexagonal packings with k layers:
// max((k-1)!/2, 1).  Rejects k > 21 (would overflow 64 bits).
std::uint64_t variant_count(int k);

// Turn angle between consecutive path segments: pi / (3k).
double curved_hex_alpha(int k);

// Distance from the container center to the centers of the outermost layer,
// in disk diameters: 1 / (2 sin(pi/6k)).
double path_radius(int k);

// Ratio of container diameter to disk diameter: 1 + 1/sin(pi/6k).
double curved_hex_ratio(int k);

// Fraction of the container area covered: hex_number(k) / ratio^2.
double curved_hex_density(int k);

// Limit of curved_hex_density as k -> infinity: pi^2 / 12.
double curved_hex_density_limit();

}  // namespace circpack
