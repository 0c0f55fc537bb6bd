#include "circpack/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "circpack/fingerprint.hpp"
#include "circpack/hex_formulas.hpp"

namespace circpack {

namespace {

constexpr double kAmbiguousBand = 1e-5;

void note_gap(double gap, double threshold, double& min_nonbond, int& ambiguous) {
    if (gap < threshold) return;
    min_nonbond = std::min(min_nonbond, gap);
    if (gap < kAmbiguousBand) ++ambiguous;
}

}  // namespace

bool ContactGraph::bonded(int a, int b) const {
    const auto& row = adj[a];
    return std::binary_search(row.begin(), row.end(), b);
}

ContactGraph contact_graph(const Packing& p, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("contact_graph: threshold must be positive");
    const int n = p.size();
    const double d = p.diameter();
    if (!(d > 0.0)) throw std::invalid_argument("contact_graph: disk diameter must be positive");

    ContactGraph g;
    g.n = n;
    g.threshold = threshold;
    g.adj.assign(n, {});
    g.wall.assign(n, 0);
    g.min_nonbond_gap = std::numeric_limits<double>::infinity();

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double gap = (dist(p.centers[i], p.centers[j]) - d) / d;
            if (gap < threshold) {
                g.disk_bonds.push_back({i, j, gap});
                g.adj[i].push_back(j);
                g.adj[j].push_back(i);
            }
            note_gap(gap, threshold, g.min_nonbond_gap, g.ambiguous);
        }
        const double wall_gap =
            ((p.container_radius - p.disk_radius) - p.centers[i].norm()) / d;
        if (wall_gap < threshold) {
            g.wall_bonds.push_back({i, wall_gap});
            g.wall[i] = 1;
        }
        note_gap(wall_gap, threshold, g.min_nonbond_gap, g.ambiguous);
    }
    for (auto& row : g.adj) std::sort(row.begin(), row.end());
    return g;
}

namespace {

// True when every contact normal fits in an open half-plane, i.e. some
// direction is strictly separated from all of them.
bool normals_in_open_half_plane(const std::vector<double>& angles) {
    if (angles.empty()) return true;
    std::vector<double> a = angles;
    std::sort(a.begin(), a.end());
    double max_gap = 2.0 * std::numbers::pi - (a.back() - a.front());
    for (size_t i = 1; i < a.size(); ++i) max_gap = std::max(max_gap, a[i] - a[i - 1]);
    return max_gap > std::numbers::pi + 1e-12;
}

}  // namespace

std::vector<int> find_rattlers(const Packing& p, const ContactGraph& g) {
    const int n = p.size();
    std::vector<char> active(n, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> drop;
        for (int i = 0; i < n; ++i) {
            if (!active[i]) continue;
            int contacts = 0;
            std::vector<double> angles;
            for (int j : g.adj[i]) {
                if (!active[j]) continue;
                ++contacts;
                angles.push_back((p.centers[j] - p.centers[i]).angle());
            }
            if (g.wall[i]) {
                ++contacts;
                if (p.centers[i].norm() > 0.0) angles.push_back(p.centers[i].angle());
            }
            if (contacts < 3 || normals_in_open_half_plane(angles)) drop.push_back(i);
        }
        for (int i : drop) {
            active[i] = 0;
            changed = true;
        }
    }
    std::vector<int> rattlers;
    for (int i = 0; i < n; ++i)
        if (!active[i]) rattlers.push_back(i);
    return rattlers;
}

RigidityResult rigidity_test(const Packing& p, const ContactGraph& g,
                             const std::vector<int>& exclude) {
    const int n = p.size();
    std::vector<char> out(n, 0);
    for (int i : exclude) {
        if (i < 0 || i >= n) throw std::invalid_argument("rigidity_test: excluded id out of range");
        out[i] = 1;
    }
    std::vector<int> col(n, -1);
    int na = 0;
    for (int i = 0; i < n; ++i)
        if (!out[i]) col[i] = 2 * na++;
    if (na == 0) return {false, 0};

    std::vector<const DiskBond*> bonds;
    for (const auto& b : g.disk_bonds)
        if (!out[b.a] && !out[b.b]) bonds.push_back(&b);
    std::vector<const WallBond*> walls;
    for (const auto& w : g.wall_bonds)
        if (!out[w.a]) walls.push_back(&w);

    const int m = static_cast<int>(bonds.size() + walls.size());
    if (m == 0) return {false, 2 * na - 1};

    // One row per bond: the first-order rate of change of the bond length.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, 2 * na);
    int r = 0;
    for (const auto* b : bonds) {
        const Vec2 nrm = (p.centers[b->b] - p.centers[b->a]).normalized();
        A(r, col[b->a]) = -nrm.x;
        A(r, col[b->a] + 1) = -nrm.y;
        A(r, col[b->b]) = nrm.x;
        A(r, col[b->b] + 1) = nrm.y;
        ++r;
    }
    for (const auto* w : walls) {
        const Vec2 u = p.centers[w->a].normalized();
        A(r, col[w->a]) = u.x;
        A(r, col[w->a] + 1) = u.y;
        ++r;
    }

    Eigen::VectorXd sv;
    if (m >= 2 * na) {
        // Reduce tall systems with an orthogonal factorization first; the
        // triangular factor has the same singular values.
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
        Eigen::MatrixXd R =
            qr.matrixQR().topRows(2 * na).triangularView<Eigen::Upper>();
        sv = Eigen::BDCSVD<Eigen::MatrixXd>(R).singularValues();
    } else {
        sv = Eigen::BDCSVD<Eigen::MatrixXd>(A).singularValues();
    }
    const double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * smax) ++rank;
    const int nullity = 2 * na - rank;

    // The uniform rotation about the container center is always a null
    // vector, so a jammed packing has nullity exactly one.
    RigidityResult res;
    res.rigid = (nullity == 1);
    res.flex_dimension = std::max(nullity - 1, 0);
    return res;
}

namespace {

// Layer labels from bond-hop distance to the wall-bonded rim; empty when the
// packing is not consistent with a k-layer hexagonal shell structure.
std::vector<int> bond_layers(const ContactGraph& g, int k) {
    const int n = g.n;
    std::vector<int> dist(n, -1);
    std::vector<int> queue;
    for (int i = 0; i < n; ++i) {
        if (g.wall[i]) {
            dist[i] = 0;
            queue.push_back(i);
        }
    }
    for (size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        for (int v : g.adj[u]) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    std::vector<int> layer(n, -1);
    std::vector<int> count(k + 1, 0);
    for (int i = 0; i < n; ++i) {
        if (dist[i] < 0 || dist[i] > k) return {};
        layer[i] = k - dist[i];
        ++count[layer[i]];
    }
    if (count[0] != 1) return {};
    for (int i = 1; i <= k; ++i)
        if (count[i] != 6 * i) return {};
    return layer;
}

bool share_bonded_neighbor(const ContactGraph& g, int a, int b) {
    const auto& ra = g.adj[a];
    const auto& rb = g.adj[b];
    size_t i = 0, j = 0;
    while (i < ra.size() && j < rb.size()) {
        if (ra[i] == rb[j]) return true;
        if (ra[i] < rb[j])
            ++i;
        else
            ++j;
    }
    return false;
}

bool triangle_path_dfs(const ContactGraph& g, const std::vector<int>& layer, int k,
                       int u, std::vector<char>& dead, std::vector<int>& path) {
    path.push_back(u);
    if (layer[u] == k) return true;
    for (int v : g.adj[u]) {
        if (dead[v] || layer[v] != layer[u] + 1) continue;
        if (!share_bonded_neighbor(g, u, v)) continue;
        if (triangle_path_dfs(g, layer, k, v, dead, path)) return true;
    }
    path.pop_back();
    dead[u] = 1;
    return false;
}

}  // namespace

RegularityResult classify_regular(const Packing& p, const ContactGraph& g) {
    const int n = p.size();
    int k = -1;
    for (int c = 1; c <= 64; ++c) {
        if (hex_number(c) == n) {
            k = c;
            break;
        }
        if (hex_number(c) > n) break;
    }
    if (k < 0) return {};
    const std::vector<int> layer = bond_layers(g, k);
    if (layer.empty()) return {};
    int center = -1;
    for (int i = 0; i < n; ++i)
        if (layer[i] == 0) center = i;

    std::vector<char> dead(n, 0);
    std::vector<int> path;
    if (!triangle_path_dfs(g, layer, k, center, dead, path)) return {};
    RegularityResult res;
    res.regular = true;
    res.witness = std::move(path);
    return res;
}

std::optional<PathSpec> match_curved_hex(const Packing& p) {
    const int n = p.size();
    int k = -1;
    for (int c = 1; c <= 8; ++c)
        if (hex_number(c) == n) k = c;
    if (k < 0) return std::nullopt;

    static std::mutex cache_mutex;
    static std::map<int, std::vector<HexClass>> cache;
    const std::vector<HexClass>* classes = nullptr;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(k);
        if (it == cache.end()) it = cache.emplace(k, enumerate_all(k)).first;
        classes = &it->second;
    }

    constexpr double tol = 1e-6;
    const double want_ratio = curved_hex_ratio(k);
    if (std::abs(p.ratio() - want_ratio) > 1e-4) return std::nullopt;
    for (const auto& cls : *classes) {
        if (congruent(p, cls.packing, tol)) return cls.spec;
    }
    return std::nullopt;
}

std::optional<double> tightness_ratio(const Packing& minus, const Packing& center,
                                      const Packing& plus) {
    if (minus.size() + 1 != center.size() || center.size() + 1 != plus.size())
        throw std::invalid_argument("tightness_ratio: disk counts must be consecutive");
    bool hex = false;
    for (int c = 1; c <= 64; ++c)
        if (hex_number(c) == center.size()) hex = true;
    if (!hex)
        throw std::invalid_argument("tightness_ratio: center packing must have a hexagonal count");
    const double num = measure(center).ratio - measure(minus).ratio;
    const double den = measure(plus).ratio - measure(center).ratio;
    if (!(den > 0.0)) return std::nullopt;
    return num / den;
}

AnalysisReport analyze(const Packing& p, double threshold, bool try_match) {
    AnalysisReport r;
    const Measurement m = measure(p);
    r.density = m.density;
    r.ratio = m.ratio;
    r.threshold = threshold;

    const ContactGraph g = contact_graph(p, threshold);
    r.bond_count = static_cast<int>(g.disk_bonds.size());
    r.wall_bond_count = static_cast<int>(g.wall_bonds.size());
    r.ambiguous = g.ambiguous;
    r.min_nonbond_gap = g.min_nonbond_gap;

    r.rattlers = find_rattlers(p, g);
    std::vector<char> is_rattler(p.size(), 0);
    for (int i : r.rattlers) is_rattler[i] = 1;
    for (int i = 0; i < p.size(); ++i)
        if (!is_rattler[i]) r.jammed.push_back(i);

    const RigidityResult rig = rigidity_test(p, g, r.rattlers);
    r.rigid = rig.rigid;
    r.flex_dimension = rig.flex_dimension;

    const RegularityResult reg = classify_regular(p, g);
    r.regular = reg.regular;
    r.witness = reg.witness;

    if (try_match) r.matched = match_curved_hex(p);
    r.fingerprint_digest = fingerprint(p).digest();
    return r;
}

namespace {

std::string fmt_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void append_ids(std::ostringstream& os, const std::vector<int>& ids) {
    os << '[';
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i) os << ',';
        os << ids[i];
    };
    os << ']';
}

}  // namespace

std::string report_to_json(const AnalysisReport& r) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"density\": " << fmt_double(r.density) << ",\n";
    os << "  \"ratio\": " << fmt_double(r.ratio) << ",\n";
    os << "  \"threshold\": " << fmt_double(r.threshold) << ",\n";
    os << "  \"bond_count\": " << r.bond_count << ",\n";
    os << "  \"wall_bond_count\": " << r.wall_bond_count << ",\n";
    os << "  \"ambiguous_gaps\": " << r.ambiguous << ",\n";
    os << "  \"min_nonbond_gap\": " << fmt_double(r.min_nonbond_gap) << ",\n";
    os << "  \"rattlers\": ";
    append_ids(os, r.rattlers);
    os << ",\n  \"jammed\": ";
    append_ids(os, r.jammed);
    os << ",\n";
    os << "  \"rigid\": " << (r.rigid ? "true" : "false") << ",\n";
    os << "  \"flex_dimension\": " << r.flex_dimension << ",\n";
    os << "  \"regular\": " << (r.regular ? "true" : "false") << ",\n";
    os << "  \"witness\": ";
    append_ids(os, r.witness);
    os << ",\n";
    os << "  \"matched\": ";
    if (r.matched)
        os << '"' << to_string(*r.matched) << '"';
    else
        os << "null";
    os << ",\n";
    os << "  \"fingerprint\": \"" << r.fingerprint_digest << "\"\n";
    os << "}\n";
    return os.str();
}

}  // namespace circpack
