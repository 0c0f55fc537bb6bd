#include "circpack/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace circpack {

Fingerprint fingerprint(const Packing& p, double quantum) {
    if (!(quantum > 0.0)) throw std::invalid_argument("fingerprint: quantum must be positive");
    if (!(p.disk_radius > 0.0)) throw std::invalid_argument("fingerprint: disk_radius must be positive");
    Fingerprint f;
    f.quantum = quantum;
    double d = p.diameter();
    f.pts.reserve(p.centers.size());
    f.radial.reserve(p.centers.size());
    for (const auto& c : p.centers) {
        Vec2 q = c / d;
        f.pts.push_back(q);
        f.radial.push_back(static_cast<std::int64_t>(std::llround(q.norm() / quantum)));
    }
    std::sort(f.radial.begin(), f.radial.end());
    return f;
}

std::string Fingerprint::digest() const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(radial.size()));
    for (auto r : radial) mix(static_cast<std::uint64_t>(r));
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

// uniform grid over points for O(1) nearest lookup; cell size 0.5 assumes
// query tolerance well below 0.25
struct PointGrid {
    double cell = 0.5;
    std::unordered_map<std::int64_t, std::vector<int>> cells;
    const std::vector<Vec2>* pts = nullptr;

    static std::int64_t key(int ix, int iy) {
        return (static_cast<std::int64_t>(ix) << 32) ^ (static_cast<std::int64_t>(iy) & 0xffffffffll);
    }
    explicit PointGrid(const std::vector<Vec2>& points) : pts(&points) {
        for (int i = 0; i < static_cast<int>(points.size()); ++i) {
            int ix = static_cast<int>(std::floor(points[i].x / cell));
            int iy = static_cast<int>(std::floor(points[i].y / cell));
            cells[key(ix, iy)].push_back(i);
        }
    }
    // index of an unused point within tol of q, or -1
    int find(const Vec2& q, double tol, const std::vector<char>& used) const {
        int ix = static_cast<int>(std::floor(q.x / cell));
        int iy = static_cast<int>(std::floor(q.y / cell));
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                auto it = cells.find(key(ix + dx, iy + dy));
                if (it == cells.end()) continue;
                for (int j : it->second)
                    if (!used[j] && dist((*pts)[j], q) <= tol) return j;
            }
        }
        return -1;
    }
};

bool radial_close(const std::vector<double>& ra, const std::vector<double>& rb, double tol) {
    for (size_t i = 0; i < ra.size(); ++i)
        if (std::fabs(ra[i] - rb[i]) > tol) return false;
    return true;
}

}  // namespace

bool congruent_points(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double tol) {
    if (a.size() != b.size()) return false;
    const int n = static_cast<int>(a.size());
    if (n == 0) return true;

    std::vector<double> ra(n), rb(n);
    for (int i = 0; i < n; ++i) ra[i] = a[i].norm();
    for (int i = 0; i < n; ++i) rb[i] = b[i].norm();
    {
        auto sa = ra, sb = rb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (!radial_close(sa, sb, tol)) return false;
    }

    // anchor: a point of maximal radius in a
    int anchor = 0;
    for (int i = 1; i < n; ++i)
        if (ra[i] > ra[anchor]) anchor = i;
    if (ra[anchor] <= tol) return true;  // single cluster at the origin (n==1 in practice)
    const double ta = a[anchor].angle();

    PointGrid grid(b);
    std::vector<char> used(n, 0);
    // matched points can drift by the anchor mismatch plus the rotation error
    // it induces, so allow a few tol
    const double match_tol = 3.0 * tol;

    for (int j = 0; j < n; ++j) {
        if (std::fabs(rb[j] - ra[anchor]) > tol) continue;
        for (int sign = 0; sign < 2; ++sign) {
            double s = sign ? -1.0 : 1.0;
            double phi = b[j].angle() - s * ta;
            double c = std::cos(phi), sn = std::sin(phi);
            std::fill(used.begin(), used.end(), 0);
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) {
                Vec2 p{a[i].x, s * a[i].y};
                Vec2 q{c * p.x - sn * p.y, sn * p.x + c * p.y};
                int hit = grid.find(q, match_tol, used);
                if (hit < 0) ok = false;
                else used[hit] = 1;
            }
            if (ok) return true;
        }
    }
    return false;
}

bool congruent(const Packing& a, const Packing& b, double tol) {
    if (a.size() != b.size()) return false;
    if (!(a.disk_radius > 0.0) || !(b.disk_radius > 0.0)) return false;
    if (std::fabs(a.ratio() - b.ratio()) > 2.0 * tol) return false;
    double da = a.diameter(), db = b.diameter();
    std::vector<Vec2> pa(a.centers), pb(b.centers);
    for (auto& v : pa) v = v / da;
    for (auto& v : pb) v = v / db;
    return congruent_points(pa, pb, tol);
}

bool Fingerprint::operator==(const Fingerprint& o) const {
    if (quantum != o.quantum) return false;
    if (radial.size() != o.radial.size()) return false;
    double tol = 4.0 * quantum;
    for (size_t i = 0; i < radial.size(); ++i)
        if (std::fabs(static_cast<double>(radial[i] - o.radial[i])) * quantum > tol) return false;
    return congruent_points(pts, o.pts, tol);
}

}  // namespace circpack
