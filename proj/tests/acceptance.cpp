// Acceptance gate.  Each criterion prints exactly one [PASS]/[FAIL] line
// with its measured quantities and pinned tolerances; the exit code is the
// number of failed criteria.  Run with no arguments for all criteria or with
// a single number (1..8) for one of them.
//
// Criterion 2's limit-distance clause is known not to hold at k = 10^4 (the
// density deviates ~3.9e-6 from pi^2/12, first dipping under 1e-7 only near
// k ~ 4e5); it is evaluated verbatim and reported honestly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "circpack/analysis.hpp"
#include "circpack/construct.hpp"
#include "circpack/fingerprint.hpp"
#include "circpack/hex_formulas.hpp"
#include "circpack/packing.hpp"
#include "circpack/sim.hpp"

using namespace circpack;
using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

bool report(int id, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    return pass;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

bool criterion1() {
    struct Row {
        int k;
        double density, ratio;
    };
    // 14-digit table rows for k = 6, 7, 8.
    const Row rows[] = {{6, 0.81622935362082, 12.473713245670},
                        {7, 0.81710701192903, 14.381489999655},
                        {8, 0.81776562948873, 16.289788298679}};
    const auto t0 = clk::now();
    double max_rel = 0.0;
    for (const Row& r : rows) {
        max_rel = std::max(max_rel, std::abs(curved_hex_density(r.k) - r.density) / r.density);
        max_rel = std::max(max_rel, std::abs(curved_hex_ratio(r.k) - r.ratio) / r.ratio);
    }
    const double ms = seconds_since(t0) * 1e3;
    const bool pass = max_rel < 1e-12 && ms < 1.0;
    return report(1, pass,
                  fmt("formula fidelity k=6,7,8 — max relative error %.3g (tol 1e-12), "
                      "%.4f ms (budget 1 ms)",
                      max_rel, ms));
}

// ---------------------------------------------------------------- criterion 2

bool criterion2() {
    const auto t0 = clk::now();
    const double limit = curved_hex_density_limit();
    bool strict = true;
    for (int k = 1; k <= 10000; ++k)
        if (!(curved_hex_density(k) < limit)) strict = false;
    const double dev = curved_hex_density(10000) - limit;
    const double sec = seconds_since(t0);
    const bool near = std::abs(dev) < 1e-7;
    const bool pass = strict && near && sec < 1.0;
    return report(2, pass,
                  fmt("density limit — strictly below pi^2/12 for k<=1e4: %s; "
                      "density(1e4) - pi^2/12 = %.5g (tol 1e-7): %s; %.3f s (budget 1 s)",
                      strict ? "yes" : "NO", dev, near ? "yes" : "NO", sec));
}

// ---------------------------------------------------------------- criterion 3

bool criterion3() {
    const auto t0 = clk::now();
    const int want_classes[6] = {0, 1, 1, 1, 3, 12};
    const int want_regular[6] = {0, 1, 1, 1, 2, 4};
    std::string bad;
    for (int k = 1; k <= 5 && bad.empty(); ++k) {
        const auto classes = enumerate_all(k);
        int regular = 0;
        for (const HexClass& c : classes) regular += permutation_to_flips(c.spec).has_value();
        if (static_cast<int>(classes.size()) != want_classes[k])
            bad = fmt("k=%d produced %zu classes, expected %d", k, classes.size(),
                      want_classes[k]);
        else if (regular != want_regular[k])
            bad = fmt("k=%d produced %d regular classes, expected %d", k, regular,
                      want_regular[k]);
        if (!bad.empty()) break;

        // Cross-validation: the exhaustive outward-in builds land in exactly
        // the same congruence classes.
        std::set<size_t> hit;
        for (const Packing& p : enumerate_outward_in(k)) {
            const Fingerprint fp = fingerprint(p);
            bool found = false;
            for (size_t i = 0; i < classes.size(); ++i) {
                if (fp == classes[i].fp) {
                    hit.insert(i);
                    found = true;
                    break;
                }
            }
            if (!found) {
                bad = fmt("k=%d: an outward-in packing matches no permutation class", k);
                break;
            }
        }
        if (bad.empty() && hit.size() != classes.size())
            bad = fmt("k=%d: outward-in builds cover %zu of %zu classes", k, hit.size(),
                      classes.size());
    }
    const double sec = seconds_since(t0);
    const bool pass = bad.empty() && sec < 60.0;
    return report(3, pass,
                  fmt("enumeration counts k=1..5 — classes 1,1,1,3,12, regular 1,1,1,2,4, "
                      "outward-in cross-check: %s; %.2f s (budget 60 s)",
                      bad.empty() ? "all as expected" : bad.c_str(), sec));
}

// ---------------------------------------------------------------- criterion 4

// Fast rigidity certificate: assemble the bond Gram matrix A = M^T M, deflate
// the always-present rotation mode, and test positive definiteness beyond a
// scaled shift.  Rigid contact networks keep their second-smallest eigenvalue
// many orders of magnitude above the shift, flexible ones sit at roundoff, so
// a Cholesky success/failure decides the rank question at a fraction of the
// SVD cost.  Cross-checked against rigidity_test on every k <= 6 class below.
bool rigid_by_certificate(const Packing& p, const ContactGraph& g) {
    const int n = p.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    const auto add_pair = [&](int a, int b) {
        const Vec2 nv = (p.centers[b] - p.centers[a]) * (1.0 / dist(p.centers[a], p.centers[b]));
        const double r[4] = {-nv.x, -nv.y, nv.x, nv.y};
        const int idx[4] = {2 * a, 2 * a + 1, 2 * b, 2 * b + 1};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) A(idx[i], idx[j]) += r[i] * r[j];
    };
    for (const DiskBond& bond : g.disk_bonds) add_pair(bond.a, bond.b);
    for (const WallBond& w : g.wall_bonds) {
        const Vec2 u = p.centers[w.a] * (1.0 / p.centers[w.a].norm());
        const double r[2] = {u.x, u.y};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) A(2 * w.a + i, 2 * w.a + j) += r[i] * r[j];
    }

    Eigen::VectorXd rot(2 * n);
    for (int i = 0; i < n; ++i) {
        rot(2 * i) = -p.centers[i].y;
        rot(2 * i + 1) = p.centers[i].x;
    }
    rot.normalize();
    const double scale = A.trace() / (2 * n);
    A += scale * (rot * rot.transpose());
    A -= (1e-10 * scale) * Eigen::MatrixXd::Identity(2 * n, 2 * n);
    return Eigen::LLT<Eigen::MatrixXd>(A).info() == Eigen::Success;
}

bool criterion4() {
    const auto t0 = clk::now();
    std::string bad;
    int checked = 0;
    for (int k = 1; k <= 8 && bad.empty(); ++k) {
        const double want_ratio = curved_hex_ratio(k);
        const double cos60 = 0.5, sin60 = std::sqrt(3.0) / 2.0;
        for (const HexClass& c : enumerate_all(k)) {
            const Packing& p = c.packing;
            const std::string tag = to_string(c.spec);
            if (!validate(p, 1e-9).empty()) {
                bad = tag + " fails validate(1e-9)";
                break;
            }
            if (std::abs(measure(p).ratio - want_ratio) > 1e-9) {
                bad = tag + " ratio off target";
                break;
            }
            // 60-degree symmetry: the rotated center set equals the original.
            for (const Vec2& v : p.centers) {
                const Vec2 r{v.x * cos60 - v.y * sin60, v.x * sin60 + v.y * cos60};
                double best = 1e300;
                for (const Vec2& w : p.centers) best = std::min(best, dist(r, w));
                if (best > 1e-9) {
                    bad = tag + " is not 60-degree symmetric";
                    break;
                }
            }
            if (!bad.empty()) break;
            const ContactGraph g = contact_graph(p, 1e-9);
            if (!find_rattlers(p, g).empty()) {
                bad = tag + " has rattlers";
                break;
            }
            const bool cert = rigid_by_certificate(p, g);
            if (k <= 6 && rigidity_test(p, g).rigid != cert) {
                bad = tag + " rigidity certificate disagrees with the SVD test";
                break;
            }
            if (!cert) {
                bad = tag + " is not first-order rigid";
                break;
            }
            ++checked;
        }
    }
    const double sec = seconds_since(t0);
    const bool pass = bad.empty() && sec < 300.0;
    return report(4, pass,
                  fmt("construction validity — %d packings over k=1..8 valid at 1e-9, "
                      "on-ratio, 60-degree symmetric, rattler-free, rigid: %s; "
                      "%.1f s (budget 300 s)",
                      checked, bad.empty() ? "yes" : bad.c_str(), sec));
}

// ---------------------------------------------------------------- criterion 5

bool criterion5() {
    int good7 = 0;
    double worst_wall = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SimConfig cfg;
        cfg.n = 7;
        cfg.seed = seed;
        const RunResult res = run_simulation(cfg);
        worst_wall = std::max(worst_wall, res.stats.wall_clock_seconds);
        if (std::abs(res.stats.final_ratio - 3.0) < 1e-9) ++good7;
    }
    const double target = curved_hex_ratio(2);
    int good19 = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SimConfig cfg;
        cfg.n = 19;
        cfg.seed = seed;
        const RunResult res = run_simulation(cfg);
        worst_wall = std::max(worst_wall, res.stats.wall_clock_seconds);
        const auto m = match_curved_hex(res.packing);
        if (std::abs(res.stats.final_ratio - target) < 1e-9 && m && m->k == 2) ++good19;
    }
    const bool pass = good7 >= 8 && good19 >= 5 && worst_wall < 60.0;
    return report(5, pass,
                  fmt("simulator ground truth — n=7: %d/10 at D/d=3 within 1e-9 (need 8); "
                      "n=19: %d/20 at 1+1/sin(pi/12) within 1e-9 with matching fingerprint "
                      "(need 5); slowest run %.1f s (budget 60 s)",
                      good7, good19, worst_wall));
}

// ---------------------------------------------------------------- criterion 6

bool criterion6() {
    // Gentle growth anneals the n=127 system well enough that roughly one
    // run in eight jams denser than the curved hexagonal packing (at the
    // 1e-3 default none of twenty did); the 20-run batch stays inside the
    // documented desk-scale budget.
    const double target = 0.81622935362082;
    const auto t0 = clk::now();
    int better = 0;
    double best = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SimConfig cfg;
        cfg.n = 127;
        cfg.seed = seed;
        cfg.growth_to_speed_ratio = 1e-4;
        const RunResult res = run_simulation(cfg);
        const double dens = measure(res.packing).density;
        best = std::max(best, dens);
        if (dens > target) ++better;
    }
    const double sec = seconds_since(t0);
    const bool pass = better >= 1;
    return report(6, pass,
                  fmt("transition at k=6 — %d of 20 n=127 runs denser than %.14f "
                      "(best %.14f); %.0f s total (documented budget 2 h)",
                      better, target, best, sec));
}

// ---------------------------------------------------------------- criterion 7

bool criterion7() {
    double best[3] = {0, 0, 0};
    for (int j = 0; j < 3; ++j) {
        SimConfig cfg;
        cfg.n = 18 + j;
        std::vector<std::uint64_t> seeds;
        for (int i = 0; i < 30; ++i)
            seeds.push_back(1 + 1000ull * static_cast<std::uint64_t>(j) + i);
        const BatchResult b = run_batch(cfg, seeds);
        if (b.best_run < 0) return report(7, false, "tightness k=2 — a batch produced no runs");
        best[j] = b.runs[b.best_run].stats.final_ratio;
    }
    const double gap = std::abs(best[1] - best[0]);
    const double tight = (best[1] - best[0]) / (best[2] - best[1]);
    const bool pass = gap < 1e-6;
    return report(7, pass,
                  fmt("tightness k=2 — best-of-30 D/d: n=18 %.12f, n=19 %.12f, "
                      "|difference| %.3g (tol 1e-6), table ratio %.3g",
                      best[0], best[1], gap, tight));
}

// ---------------------------------------------------------------- criterion 8

bool criterion8() {
    std::string bad;

    // (a) no-overlap invariant at every committed event, paranoid trace
    try {
        SimConfig cfg;
        cfg.n = 19;
        cfg.seed = 3;
        cfg.paranoia = true;
        Simulation sim(cfg);
        for (int i = 0; i < 100000; ++i)
            if (!sim.step()) break;
        if (!validate(sim.snapshot(), 1e-12).empty()) bad = "paranoid trace final state invalid";
    } catch (const std::exception& e) {
        bad = fmt("paranoid trace: %s", e.what());
    }

    // (b) growth-free energy conservation, 1e-12 per event
    if (bad.empty()) {
        SimConfig cfg;
        cfg.n = 12;
        cfg.seed = 4;
        cfg.growth_to_speed_ratio = 0.0;
        Simulation sim(cfg);
        double prev = sim.kinetic_energy();
        for (int i = 0; i < 100000; ++i) {
            if (!sim.step()) break;
            const double e = sim.kinetic_energy();
            if (std::abs(e - prev) > 1e-12) {
                bad = fmt("energy drift %.3g at event %d", std::abs(e - prev), i);
                break;
            }
            prev = e;
        }
    }

    // (c) engine equivalence, n=5, 1e5 events, 1e-9
    if (bad.empty()) {
        SimConfig cfg;
        cfg.n = 5;
        cfg.seed = 2026;
        cfg.growth_to_speed_ratio = 2e-5;  // keeps event gaps above ulp scale
        SimConfig naive = cfg;
        naive.use_grid = false;
        Simulation sa(cfg), sb(naive);
        for (int i = 0; i < 100000; ++i) {
            sa.step();
            sb.step();
        }
        double dev = std::abs(sa.time() - sb.time());
        const Packing pa = sa.snapshot(), pb = sb.snapshot();
        for (int i = 0; i < cfg.n; ++i) dev = std::max(dev, dist(pa.centers[i], pb.centers[i]));
        if (dev > 1e-9) bad = fmt("engine deviation %.3g after 1e5 events", dev);
    }

    // (d) fingerprint invariance under randomized congruences
    if (bad.empty()) {
        PathSpec s;
        s.k = 3;
        s.order = {2, 1};
        const Packing p = build_packing_from_path(s);
        const Fingerprint fp = fingerprint(p);
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
        for (int trial = 0; trial < 25 && bad.empty(); ++trial) {
            const double a = ang(rng);
            const bool reflect = rng() & 1;
            Packing q = p;
            for (Vec2& v : q.centers) {
                Vec2 w{v.x * std::cos(a) - v.y * std::sin(a),
                       v.x * std::sin(a) + v.y * std::cos(a)};
                if (reflect) w.y = -w.y;
                v = w;
            }
            std::shuffle(q.centers.begin(), q.centers.end(), rng);
            if (fingerprint(q) != fp || fingerprint(q).digest() != fp.digest())
                bad = fmt("fingerprint changed under congruence trial %d", trial);
        }
    }

    // (e) interchange round trip, bit-exact
    if (bad.empty()) {
        SimConfig cfg;
        cfg.n = 9;
        cfg.seed = 5;
        Simulation sim(cfg);
        for (int i = 0; i < 2500; ++i) sim.step();
        for (const Packing& p : {sim.snapshot(), build_packing_from_path({4, {2, 1, 3}})}) {
            const std::string once = packing_to_json(p);
            const Packing q = packing_from_json(once);
            if (packing_to_json(q) != once) {
                bad = "packing JSON round trip is not bit-exact";
                break;
            }
            for (int i = 0; i < p.size(); ++i)
                if (std::memcmp(&p.centers[i], &q.centers[i], sizeof(Vec2)) != 0) {
                    bad = "packing JSON round trip changed a center";
                    break;
                }
        }
    }

    return report(8, bad.empty(),
                  bad.empty()
                      ? std::string("property suites — paranoid 1e5-event trace, g=0 energy "
                                    "conservation at 1e-12/event, engine equivalence at 1e-9, "
                                    "fingerprint congruence invariance, bit-exact interchange "
                                    "round trip: all hold")
                      : "property suites — " + bad);
}

}  // namespace

int main(int argc, char** argv) {
    bool (*const fns[])() = {criterion1, criterion2, criterion3, criterion4,
                             criterion5, criterion6, criterion7, criterion8};
    int fails = 0;
    if (argc > 1) {
        const int id = std::atoi(argv[1]);
        if (id < 1 || id > 8) {
            std::fprintf(stderr, "usage: %s [criterion 1..8]\n", argv[0]);
            return 64;
        }
        fails = !fns[id - 1]();
    } else {
        for (auto* fn : fns) fails += !fn();
    }
    return fails;
}
