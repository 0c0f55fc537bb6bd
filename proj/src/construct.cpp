#include "circpack/construct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "circpack/hex_formulas.hpp"

namespace circpack {

void check_spec(const PathSpec& s) {
    if (s.k < 1) throw std::invalid_argument("PathSpec: k must be >= 1");
    if (static_cast<int>(s.order.size()) != s.k - 1)
        throw std::invalid_argument("PathSpec: order must have k-1 entries");
    std::vector<char> seen(s.k, 0);
    for (int v : s.order) {
        if (v < 1 || v > s.k - 1 || seen[v])
            throw std::invalid_argument("PathSpec: order must be a permutation of 1..k-1");
        seen[v] = 1;
    }
}

void check_spec(const FlipSpec& s) {
    if (s.k < 1) throw std::invalid_argument("FlipSpec: k must be >= 1");
    std::vector<char> seen(s.k + 1, 0);
    for (int t : s.flipped_layers) {
        if (t < 2 || t > s.k - 1 || seen[t])
            throw std::invalid_argument("FlipSpec: flipped layers must be distinct values in 2..k-1");
        seen[t] = 1;
    }
}

void check_spec(const AttachmentSpec& s) {
    if (s.k < 1) throw std::invalid_argument("AttachmentSpec: k must be >= 1");
    if (static_cast<int>(s.first_disk_choices.size()) != std::max(s.k - 2, 0))
        throw std::invalid_argument("AttachmentSpec: need one choice per layer k-2 down to 1");
    for (int j = 0; j < static_cast<int>(s.first_disk_choices.size()); ++j) {
        int i = s.k - 2 - j;  // the layer this choice applies to
        int c = s.first_disk_choices[j];
        if (c < 0 || c > i)
            throw std::invalid_argument("AttachmentSpec: choice for layer " + std::to_string(i) +
                                        " must be in 0.." + std::to_string(i));
    }
}

PathSpec reflected(const PathSpec& s) {
    PathSpec r = s;
    for (auto& v : r.order) v = s.k - v;
    return r;
}

PathSpec canonical(const PathSpec& s) {
    PathSpec a = s, b = reflected(s);
    a.chirality = Chirality::clockwise;
    b.chirality = Chirality::clockwise;
    return b.order < a.order ? b : a;
}

static std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::string to_string(const PathSpec& s) {
    std::string out = "k=" + std::to_string(s.k);
    if (!s.order.empty()) out += ";order=" + join_ints(s.order);
    if (s.chirality == Chirality::counterclockwise) out += ";chirality=ccw";
    return out;
}

std::string to_string(const FlipSpec& s) {
    std::string out = "k=" + std::to_string(s.k);
    out += ";flips=" + join_ints(s.flipped_layers);
    return out;
}

std::vector<Vec2> build_path(const PathSpec& s) {
    check_spec(s);
    double alpha = curved_hex_alpha(s.k);
    double sign = s.chirality == Chirality::counterclockwise ? 1.0 : -1.0;
    std::vector<Vec2> pts;
    pts.reserve(s.k + 1);
    pts.push_back({0.0, 0.0});
    pts.push_back({1.0, 0.0});
    for (int j = 2; j <= s.k; ++j) {
        double th = sign * s.order[j - 2] * alpha;
        pts.push_back(pts.back() + Vec2{std::cos(th), std::sin(th)});
    }
    return pts;
}

std::vector<Vec2> build_outer_layer(int k) {
    double P = path_radius(k);  // validates k
    int m = 6 * k;
    std::vector<Vec2> pts;
    pts.reserve(m);
    for (int t = 0; t < m; ++t)
        pts.push_back(from_polar(P, -2.0 * std::numbers::pi * t / m));
    return pts;
}

namespace {

// Greedy tangent chain for one layer.  `outer` is the completed layer
// outside it, listed in the direction the chain advances; dir = +1 when that
// direction is counterclockwise, -1 when clockwise.  Starting from `first`,
// each next disk is the first non-overlapping point tangent to the previous
// disk and to an outer disk, scanning outer disks onward from the last
// support.
std::vector<Vec2> chain_fill(const std::vector<Vec2>& outer, int count, const Vec2& first,
                             int dir, int layer) {
    constexpr double accept = 1e-12;   // min allowed gap, diameters
    constexpr double closure = 1e-9;
    const double min_d2 = (1.0 - accept) * (1.0 - accept);
    const int m = static_cast<int>(outer.size());

    std::vector<Vec2> chain;
    chain.reserve(count);
    chain.push_back(first);

    auto overlaps = [&](const Vec2& q) {
        for (const auto& o : outer)
            if (dist2(q, o) < min_d2) return true;
        for (const auto& c : chain)
            if (dist2(q, c) < min_d2) return true;
        return false;
    };

    // initial support: the outer disk `first` rests against
    int s = 0;
    {
        double best = 1e300;
        for (int t = 0; t < m; ++t) {
            double e = std::fabs(dist(first, outer[t]) - 1.0);
            if (e < best) { best = e; s = t; }
        }
        if (best > 1e-7)
            throw GeometryError("chain start does not touch the outer layer", layer, 0);
        // nestled between two outer disks: resume from the more advanced one
        if (std::fabs(dist(first, outer[(s + 1) % m]) - 1.0) < 1e-7) s = (s + 1) % m;
    }

    for (int idx = 1; idx < count; ++idx) {
        const Vec2 c = chain.back();
        bool placed = false;
        for (int step = 0; step < m; ++step) {
            const Vec2& o = outer[(s + step) % m];
            double L2 = dist2(c, o);
            if (L2 > 4.0 || L2 < 0.25) continue;  // no shared tangent position
            Vec2 mid = (c + o) * 0.5;
            double h = std::sqrt(std::max(0.0, 1.0 - 0.25 * L2));
            Vec2 u = (o - c) / std::sqrt(L2);
            Vec2 q = mid + (dir * h) * u.perp();  // the point on the advancing side
            if (overlaps(q)) continue;
            chain.push_back(q);
            s = (s + step) % m;
            placed = true;
            break;
        }
        if (!placed)
            throw GeometryError("no feasible tangent position in layer " + std::to_string(layer) +
                                    " at chain index " + std::to_string(idx),
                                layer, idx);
    }

    if (std::fabs(dist(chain.front(), chain.back()) - 1.0) > closure)
        throw GeometryError("layer " + std::to_string(layer) + " chain does not close", layer,
                            count - 1);
    return chain;
}

}  // namespace

std::vector<Vec2> fill_layer_inward(const std::vector<Vec2>& outer, int inner_layer_index,
                                    int first_choice) {
    const int i = inner_layer_index;
    if (i < 1) throw std::invalid_argument("fill_layer_inward: layer index must be >= 1");
    const int m = static_cast<int>(outer.size());
    if (m != 6 * (i + 1))
        throw std::invalid_argument("fill_layer_inward: outer layer must hold 6*(i+1) centers");
    int c = ((first_choice % m) + m) % m;

    // first disk: the inner point tangent to both disks of the chosen notch
    const Vec2& a = outer[c];
    const Vec2& b = outer[(c + 1) % m];
    double L2 = dist2(a, b);
    if (L2 > 4.0) throw GeometryError("notch disks too far apart", i, 0);
    Vec2 mid = (a + b) * 0.5;
    double h = std::sqrt(std::max(0.0, 1.0 - 0.25 * L2));
    Vec2 u = (b - a) / std::sqrt(L2);
    Vec2 q1 = mid + h * u.perp();
    Vec2 q2 = mid - h * u.perp();
    Vec2 first = q1.norm2() < q2.norm2() ? q1 : q2;

    constexpr double accept = 1e-12;
    const double min_d2 = (1.0 - accept) * (1.0 - accept);
    for (const auto& o : outer)
        if (dist2(first, o) < min_d2)
            throw GeometryError("first disk overlaps the outer layer", i, 0);

    return chain_fill(outer, 6 * i, first, /*dir=*/-1, i);
}

static Packing assemble(int k, std::vector<std::vector<Vec2>>& rings) {
    Packing p;
    p.disk_radius = 0.5;
    p.container_radius = 0.5 * curved_hex_ratio(k);
    p.centers.reserve(hex_number(k));
    p.centers.push_back({0.0, 0.0});
    for (int i = 1; i <= k; ++i)
        p.centers.insert(p.centers.end(), rings[i].begin(), rings[i].end());
    p.metadata["k"] = std::to_string(k);
    return p;
}

Packing build_packing_from_path(const PathSpec& s) {
    check_spec(s);
    const int k = s.k;
    const int dir = s.chirality == Chirality::counterclockwise ? 1 : -1;
    auto path = build_path(s);

    std::vector<std::vector<Vec2>> rings(k + 1);
    {
        double P = path_radius(k);
        double th = path[k].angle();
        int m = 6 * k;
        rings[k].reserve(m);
        rings[k].push_back(path[k]);
        for (int t = 1; t < m; ++t)
            rings[k].push_back(from_polar(P, th + dir * 2.0 * std::numbers::pi * t / m));
    }
    for (int i = k - 1; i >= 1; --i)
        rings[i] = chain_fill(rings[i + 1], 6 * i, path[i], dir, i);

    Packing p = assemble(k, rings);
    p.metadata["generator"] = "path";
    p.metadata["spec"] = to_string(s);
    return p;
}

Packing build_packing_outward_in(const AttachmentSpec& s) {
    check_spec(s);
    const int k = s.k;
    std::vector<std::vector<Vec2>> rings(k + 1);
    rings[k] = build_outer_layer(k);
    if (k >= 2) rings[k - 1] = fill_layer_inward(rings[k], k - 1, 0);
    for (int j = 0; j < static_cast<int>(s.first_disk_choices.size()); ++j) {
        int i = k - 2 - j;
        rings[i] = fill_layer_inward(rings[i + 1], i, s.first_disk_choices[j]);
    }
    Packing p = assemble(k, rings);
    p.metadata["generator"] = "outward_in";
    p.metadata["choices"] = join_ints(s.first_disk_choices);
    return p;
}

PathSpec flip_to_permutation(const FlipSpec& f) {
    check_spec(f);
    std::vector<char> fl(f.k + 2, 0);
    for (int t : f.flipped_layers) fl[t] = 1;
    std::vector<int> rem;
    for (int v = 1; v < f.k; ++v) rem.push_back(v);
    PathSpec s;
    s.k = f.k;
    s.chirality = Chirality::clockwise;
    for (int j = 1; j <= f.k - 1; ++j) {
        int v;
        if (fl[j + 1]) {  // layer j+1 flipped: spend the largest remaining turn
            v = rem.back();
            rem.pop_back();
        } else {
            v = rem.front();
            rem.erase(rem.begin());
        }
        s.order.push_back(v);
    }
    return s;
}

std::optional<FlipSpec> permutation_to_flips(const PathSpec& s) {
    check_spec(s);
    std::vector<int> rem;
    for (int v = 1; v < s.k; ++v) rem.push_back(v);
    FlipSpec f;
    f.k = s.k;
    for (int j = 1; j <= s.k - 1; ++j) {
        int v = s.order[j - 1];
        if (v == rem.front()) {
            rem.erase(rem.begin());
        } else if (v == rem.back()) {
            rem.pop_back();
            f.flipped_layers.push_back(j + 1);
        } else {
            return std::nullopt;
        }
    }
    return f;
}

Packing build_packing_from_flips(const FlipSpec& f) {
    Packing p = build_packing_from_path(flip_to_permutation(f));
    p.metadata["flips"] = to_string(f);
    return p;
}

std::pair<int, int> layer_index_range(int k, int layer) {
    if (layer < 0 || layer > k) throw std::invalid_argument("layer_index_range: bad layer");
    if (layer == 0) return {0, 1};
    int first = 1 + 3 * layer * (layer - 1);
    return {first, first + 6 * layer};
}

int layer_of_index(int k, int index) {
    if (index == 0) return 0;
    for (int i = 1; i <= k; ++i) {
        auto [a, b] = layer_index_range(k, i);
        if (index >= a && index < b) return i;
    }
    throw std::invalid_argument("layer_of_index: index out of range");
}

std::vector<HexClass> enumerate_all(int k) {
    if (k < 1 || k > 8) throw std::invalid_argument("enumerate_all: k must be in 1..8 (cost guard)");

    std::vector<std::vector<int>> orders;
    {
        std::vector<int> order;
        for (int v = 1; v < k; ++v) order.push_back(v);
        do {
            orders.push_back(order);
        } while (std::next_permutation(order.begin(), order.end()));
    }

    const int total = static_cast<int>(orders.size());
    std::vector<Packing> built(total);
    std::vector<Fingerprint> fps(total);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < total; ++i) {
        built[i] = build_packing_from_path({k, orders[i], Chirality::clockwise});
        fps[i] = fingerprint(built[i]);
    }

    // sequential dedup in lexicographic order, so the first member of every
    // class is its canonical representative
    std::vector<HexClass> classes;
    for (int i = 0; i < total; ++i) {
        PathSpec s{k, orders[i], Chirality::clockwise};
        bool found = false;
        for (auto& c : classes) {
            if (c.fp == fps[i]) {
                ++c.member_count;
                if (canonical(s).order != c.spec.order)
                    throw std::logic_error(
                        "enumerate_all: congruence disagrees with reflection pairing at " +
                        to_string(s));
                found = true;
                break;
            }
        }
        if (!found) {
            if (canonical(s).order != s.order)
                throw std::logic_error("enumerate_all: non-canonical class representative " +
                                       to_string(s));
            classes.push_back({s, std::move(built[i]), std::move(fps[i]), 1});
        }
    }

    if (classes.size() != variant_count(k))
        throw std::logic_error("enumerate_all: expected " + std::to_string(variant_count(k)) +
                               " classes for k=" + std::to_string(k) + ", got " +
                               std::to_string(classes.size()));
    for (const auto& c : classes) {
        int expect = k >= 3 ? 2 : 1;
        if (c.member_count != expect)
            throw std::logic_error("enumerate_all: class " + to_string(c.spec) + " has " +
                                   std::to_string(c.member_count) + " members");
    }
    return classes;
}

std::vector<Packing> enumerate_outward_in(int k) {
    if (k < 1 || k > 8)
        throw std::invalid_argument("enumerate_outward_in: k must be in 1..8 (cost guard)");
    std::vector<int> choices(std::max(k - 2, 0), 0);
    std::vector<Packing> out;
    for (;;) {
        out.push_back(build_packing_outward_in({k, choices}));
        int j = static_cast<int>(choices.size()) - 1;
        while (j >= 0) {
            if (choices[j] < k - 2 - j) {  // choice for layer i=k-2-j ranges 0..i
                ++choices[j];
                break;
            }
            choices[j] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return out;
}

}  // namespace circpack
