#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circpack/construct.hpp"
#include "circpack/packing.hpp"

namespace circpack {

struct DiskBond {
    int a = -1, b = -1;
    double gap = 0.0;  // center distance minus one diameter, in diameters
};

struct WallBond {
    int a = -1;
    double gap = 0.0;  // wall clearance in diameters
};

// Bonds are gaps below `threshold`.  Gaps in [threshold, 1e-5) are counted as
// ambiguous: too wide to bond, too narrow to be a confident non-contact.
struct ContactGraph {
    int n = 0;
    double threshold = 1e-9;
    std::vector<DiskBond> disk_bonds;
    std::vector<WallBond> wall_bonds;
    std::vector<std::vector<int>> adj;  // bonded neighbors per disk
    std::vector<char> wall;             // per disk: has a wall bond
    double min_nonbond_gap = 0.0;       // smallest gap at or above threshold
    int ambiguous = 0;

    bool bonded(int a, int b) const;
};

ContactGraph contact_graph(const Packing& p, double threshold = 1e-9);

// Disks that cannot be locally blocked: fewer than 3 contacts (wall counts
// as one) or all contact normals in an open half-plane; iterated to a fixed
// point.
std::vector<int> find_rattlers(const Packing& p, const ContactGraph& g);

struct RigidityResult {
    bool rigid = false;
    int flex_dimension = 0;  // independent first-order motions beyond the global rotation
};

// First-order rigidity of the packing restricted to disks not in `exclude`
// (pass the rattler set).  One row per bond; singular-value rank at 1e-8.
RigidityResult rigidity_test(const Packing& p, const ContactGraph& g,
                             const std::vector<int>& exclude = {});

struct RegularityResult {
    bool regular = false;
    std::vector<int> witness;  // center-to-rim disk ids when regular
};

// A packing is regular when the bond graph contains a path of k bonds from
// the central disk to a rim disk, each bond being the side of at least one
// bond triangle.  Returns irregular when the layer structure does not
// resolve to a k-layer pattern.
RegularityResult classify_regular(const Packing& p, const ContactGraph& g);

// Identify which curved-hex congruence class (k <= 8) the packing belongs
// to, within 1e-6 diameters; nullopt when none matches.
std::optional<PathSpec> match_curved_hex(const Packing& p);

// (ratio(center) - ratio(minus)) / (ratio(plus) - ratio(center)) for disk
// counts h(k)-1, h(k), h(k)+1; nullopt when the denominator is not positive.
std::optional<double> tightness_ratio(const Packing& minus, const Packing& center,
                                      const Packing& plus);

struct AnalysisReport {
    double density = 0.0;
    double ratio = 0.0;
    double threshold = 0.0;
    int bond_count = 0;
    int wall_bond_count = 0;
    int ambiguous = 0;
    double min_nonbond_gap = 0.0;
    std::vector<int> rattlers;
    std::vector<int> jammed;
    bool rigid = false;
    int flex_dimension = 0;
    bool regular = false;
    std::vector<int> witness;
    std::optional<PathSpec> matched;
    std::string fingerprint_digest;
};

AnalysisReport analyze(const Packing& p, double threshold = 1e-9, bool try_match = true);
std::string report_to_json(const AnalysisReport& r);

}  // namespace circpack
