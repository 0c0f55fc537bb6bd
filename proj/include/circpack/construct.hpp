#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "circpack/fingerprint.hpp"
#include "circpack/packing.hpp"
#include "circpack/vec2.hpp"

namespace circpack {

enum class Chirality { clockwise, counterclockwise };

// Identifies one curved hexagonal packing of hex_number(k) disks by the
// order in which the path from the center to the rim spends its k-1
// distinct nonzero turn multiples of alpha = pi/(3k).
struct PathSpec {
    int k = 1;
    std::vector<int> order;  // permutation of 1..k-1; empty for k=1
    Chirality chirality = Chirality::clockwise;
};

// A subset of layers 2..k-1 of the basic pattern whose sense of rotation is
// flipped; generates exactly the regular packings.
struct FlipSpec {
    int k = 1;
    std::vector<int> flipped_layers;
};

// Outward-in construction choices: for layers i = k-2 down to 1, the notch
// of layer i+1 that receives the first disk of layer i; choice in {0..i}.
struct AttachmentSpec {
    int k = 1;
    std::vector<int> first_disk_choices;
};

struct GeometryError : std::runtime_error {
    int layer;
    int index;
    GeometryError(const std::string& msg, int layer_, int index_)
        : std::runtime_error(msg), layer(layer_), index(index_) {}
};

void check_spec(const PathSpec& s);        // throws std::invalid_argument
void check_spec(const FlipSpec& s);
void check_spec(const AttachmentSpec& s);

// reflection partner: order entry i -> k - i (same chirality)
PathSpec reflected(const PathSpec& s);
// clockwise chirality, lexicographically smaller of (order, reflected order)
PathSpec canonical(const PathSpec& s);

std::string to_string(const PathSpec& s);   // "k=4;order=1,3,2"
std::string to_string(const FlipSpec& s);   // "k=13;flips=6,7,8,9"

// Path disk centers 0..k in diameter units: center 0 at the origin, unit
// segments, first along +x, segment j >= 2 at angle order[j-2]*alpha
// (negated for clockwise chirality).
std::vector<Vec2> build_path(const PathSpec& s);

// 6k centers on the circle of radius path_radius(k), adjacent centers one
// diameter apart, listed clockwise from angle 0.
std::vector<Vec2> build_outer_layer(int k);

// Greedy tangent chain: fill layer i (6i disks) against completed layer i+1
// (listed clockwise).  The first disk sits in the notch between
// outer[first_choice] and its clockwise successor; each next disk is placed
// clockwise, tangent to its predecessor and to the outer layer.
std::vector<Vec2> fill_layer_inward(const std::vector<Vec2>& outer, int inner_layer_index,
                                    int first_choice);

Packing build_packing_from_path(const PathSpec& s);
Packing build_packing_outward_in(const AttachmentSpec& s);
Packing build_packing_from_flips(const FlipSpec& s);

// Flip sets generate the regular subfamily: position j of the order takes
// the largest not-yet-used multiple when layer j+1 is flipped, else the
// smallest.  permutation_to_flips inverts this where possible.
PathSpec flip_to_permutation(const FlipSpec& f);
std::optional<FlipSpec> permutation_to_flips(const PathSpec& s);

// layer of a disk index in a constructed packing (0 = central disk)
int layer_of_index(int k, int index);
// index range [first, last) of layer i
std::pair<int, int> layer_index_range(int k, int layer);

struct HexClass {
    PathSpec spec;        // canonical representative
    Packing packing;      // built from spec
    Fingerprint fp;
    int member_count = 0;  // orders that landed in this class
};

// All congruence classes for 1 <= k <= 8, by building every permutation and
// deduplicating through congruence fingerprints.  Throws std::logic_error if
// the class count or the order/reflection pairing disagrees with
// variant_count(k).
std::vector<HexClass> enumerate_all(int k);

// Every outward-in choice vector, built; for cross-validation against the
// permutation method.
std::vector<Packing> enumerate_outward_in(int k);

}  // namespace circpack
