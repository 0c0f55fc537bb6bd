#pragma once

#include <string>
#include <vector>

#include "circpack/packing.hpp"

namespace circpack {

struct RenderOptions {
    int size_px = 800;          // width and height of the square canvas
    bool draw_bonds = false;    // chords between bonded disk centers
    bool draw_labels = false;   // disk indices at the centers
    double bond_threshold = 1e-9;
    std::vector<int> rattlers;  // drawn unshaded
};

// Deterministic standalone SVG: same packing and options, same bytes.
std::string render_svg(const Packing& p, const RenderOptions& opt = {});
void write_svg(const Packing& p, const std::string& path, const RenderOptions& opt = {});

}  // namespace circpack
