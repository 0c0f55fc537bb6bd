#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "circpack/analysis.hpp"
#include "circpack/hex_formulas.hpp"
#include "circpack/sim.hpp"

using namespace circpack;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("pair prediction closed forms") {
    // Static pair, growth only: contact after the gap is eaten at rate 2g.
    const double s1 = predict_disk_disk({3.0, 0.0}, {0.0, 0.0}, 1.0, 0.01);
    CHECK(s1 == doctest::Approx((3.0 - 1.0) / 0.02).epsilon(1e-12));

    // Head-on at speed v each, no growth: gap closes at 2v.
    const double s2 = predict_disk_disk({4.0, 0.0}, {-2.0, 0.0}, 1.5, 0.0);
    CHECK(s2 == doctest::Approx((4.0 - 1.5) / 2.0).epsilon(1e-12));

    // Receding without growth: never.
    CHECK(predict_disk_disk({2.0, 0.0}, {1.0, 0.0}, 1.0, 0.0) == kInf);

    // Receding slower than the growth catches up.
    const double g = 0.3;
    const double s3 = predict_disk_disk({2.0, 0.0}, {0.1, 0.0}, 1.0, g);
    REQUIRE(s3 < kInf);
    CHECK(std::abs((2.0 + 0.1 * s3) - (1.0 + 2.0 * g * s3)) < 1e-10);
}

TEST_CASE("wall prediction closed form") {
    // Radial outward motion: gap (W0 - x) closes at u + g.
    const double s = predict_disk_wall({0.25, 0.0}, {0.8, 0.0}, 0.9, 0.01);
    CHECK(s == doctest::Approx((0.9 - 0.25) / 0.81).epsilon(1e-12));

    // Standing still: the wall arrives at rate g.
    const double s2 = predict_disk_wall({0.3, 0.4}, {0.0, 0.0}, 0.9, 0.02);
    CHECK(s2 == doctest::Approx((0.9 - 0.5) / 0.02).epsilon(1e-12));
}

TEST_CASE("pair prediction agrees with a marched first root") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int finite_cases = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const double sum0 = 0.3 + 0.5 * std::abs(u(rng));
        Vec2 dp{3.0 * u(rng), 3.0 * u(rng)};
        if (dp.norm() < sum0 * 1.05) dp = dp.normalized() * (1.2 * sum0);
        const Vec2 dv{2.0 * u(rng), 2.0 * u(rng)};
        double g = 0.0;
        if (trial % 3 == 1) g = 0.05 * std::abs(u(rng));
        if (trial % 3 == 2) g = 1.5 * std::abs(u(rng));  // growth can outrun dv
        const double s = predict_disk_disk(dp, dv, sum0, g);
        const auto f = [&](double t) { return (dp + dv * t).norm() - (sum0 + 2.0 * g * t); };
        if (s == kInf) {
            double worst = kInf;
            for (int q = 0; q <= 4000; ++q) worst = std::min(worst, f(q * 0.005));
            CHECK(worst > -1e-10);
        } else {
            ++finite_cases;
            REQUIRE(s >= 0.0);
            CHECK(std::abs(f(s)) < 1e-10 * (1.0 + s));
            for (int q = 0; q < 1000; ++q) {
                if (f(s * q / 1000.0) < -1e-10 * (1.0 + s)) {
                    CHECK(false);
                    break;
                }
            }
        }
    }
    CHECK(finite_cases > 120);
}

TEST_CASE("wall prediction agrees with a marched first root") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 400; ++trial) {
        const double W0 = 0.5 + std::abs(u(rng));
        Vec2 p{u(rng), u(rng)};
        if (p.norm() >= W0) p = p * (0.9 * W0 / p.norm());
        const Vec2 v{1.5 * u(rng), 1.5 * u(rng)};
        double g = 0.01 + 0.3 * std::abs(u(rng));
        if (trial % 4 == 0) g = 2.5;  // wall outruns the disk
        const double s = predict_disk_wall(p, v, W0, g);
        REQUIRE(s < kInf);
        REQUIRE(s >= 0.0);
        const auto f = [&](double t) { return (p + v * t).norm() - (W0 - g * t); };
        CHECK(std::abs(f(s)) < 1e-10 * (1.0 + s));
        for (int q = 0; q < 1000; ++q) {
            if (f(s * q / 1000.0) > 1e-10 * (1.0 + s)) {
                CHECK(false);
                break;
            }
        }
    }
}

TEST_CASE("pair resolution exchanges normal components") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2 n = from_polar(1.0, std::numbers::pi * u(rng));
        const double sum0 = 1.0;
        const Vec2 pa{u(rng), u(rng)};
        const Vec2 pb = pa + n * sum0;
        Vec2 va{2.0 * u(rng), 2.0 * u(rng)};
        Vec2 vb{2.0 * u(rng), 2.0 * u(rng)};
        const double approach = dot(vb - va, n);
        const Vec2 va0 = va, vb0 = vb;
        const double g = (trial % 2) ? 0.0 : 0.002;
        resolve_disk_disk(pa, pb, va, vb, g);
        if (approach < 0.0) {
            // normal components swapped (up to the growth push)
            CHECK(std::abs(dot(va, n) - (dot(vb0, n) - g)) < 1e-14);
            CHECK(std::abs(dot(vb, n) - (dot(va0, n) + g)) < 1e-14);
        }
        // tangential components untouched
        const Vec2 tang = n.perp();
        CHECK(std::abs(dot(va, tang) - dot(va0, tang)) < 1e-14);
        CHECK(std::abs(dot(vb, tang) - dot(vb0, tang)) < 1e-14);

        if (g == 0.0) {
            const double e0 = va0.norm2() + vb0.norm2();
            const double e1 = va.norm2() + vb.norm2();
            CHECK(std::abs(e1 - e0) <= 1e-13 * (1.0 + e0));
            CHECK(std::abs((va + vb - va0 - vb0).norm()) < 1e-14);
        } else {
            // separation faster than growth, and the pair never re-collides now
            CHECK(dot(vb - va, n) >= 2.0 * g - 1e-14);
            const double next = predict_disk_disk(pb - pa, vb - va, sum0, g);
            CHECK(next > 0.0);
        }
    }
}

TEST_CASE("wall resolution reflects the radial component") {
    std::mt19937_64 rng(866);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2 p = from_polar(0.9, std::numbers::pi * u(rng));
        Vec2 v{1.5 * u(rng), 1.5 * u(rng)};
        const Vec2 v0 = v;
        const Vec2 uhat = p.normalized();
        const double g = (trial % 2) ? 0.0 : 0.002;
        resolve_disk_wall(p, v, g);
        if (dot(v0, uhat) > 0.0) {
            CHECK(std::abs(dot(v, uhat) - (-dot(v0, uhat) - g)) < 1e-14);
            if (g == 0.0) CHECK(std::abs(v.norm() - v0.norm()) < 1e-14);
        }
        CHECK(std::abs(dot(v, uhat.perp()) - dot(v0, uhat.perp())) < 1e-14);
        if (g > 0.0) {
            const double next = predict_disk_wall(p, v, 0.9, g);
            CHECK(next > 0.0);
        }
    }
}

TEST_CASE("growth-free dynamics conserve kinetic energy at every event") {
    SimConfig cfg;
    cfg.n = 8;
    cfg.growth_to_speed_ratio = 0.0;
    cfg.seed = 42;
    Simulation sim(cfg);
    const double e0 = sim.kinetic_energy();
    for (int i = 0; i < 20000; ++i) {
        const double before = sim.kinetic_energy();
        REQUIRE(sim.step());
        const double after = sim.kinetic_energy();
        CHECK(std::abs(after - before) <= 1e-12 * (1.0 + before));
    }
    CHECK(std::abs(sim.kinetic_energy() - e0) <= 1e-9 * e0);
}

TEST_CASE("grid and all-pairs engines follow the same trajectory") {
    SimConfig cfg;
    cfg.n = 5;
    cfg.seed = 2026;
    // Slow growth keeps every inter-event gap far above the ulp scale of the
    // event clock, so the engines' event orderings are forced to agree; with
    // fast growth the run enters near-jamming chatter where independent events
    // land within a few ulps of each other and either order is numerically valid.
    cfg.growth_to_speed_ratio = 2e-5;
    SimConfig naive = cfg;
    naive.use_grid = false;
    Simulation sa(cfg), sb(naive);
    for (int i = 0; i < 100000; ++i) {
        REQUIRE(sa.step());
        REQUIRE(sb.step());
    }
    CHECK(sa.collisions() == sb.collisions());
    CHECK(std::abs(sa.time() - sb.time()) < 1e-9);
    const Packing pa = sa.snapshot();
    const Packing pb = sb.snapshot();
    CHECK(pa.disk_radius == doctest::Approx(pb.disk_radius).epsilon(1e-12));
    for (int i = 0; i < cfg.n; ++i) CHECK(dist(pa.centers[i], pb.centers[i]) < 1e-9);
}

TEST_CASE("snapshots stay valid from the initial state onward") {
    SimConfig cfg;
    cfg.n = 12;
    cfg.seed = 5;
    Simulation sim(cfg);
    CHECK(sim.collisions() == 0);
    CHECK(validate(sim.snapshot(), 1e-12).empty());
    for (int burst = 0; burst < 40; ++burst) {
        for (int i = 0; i < 2500; ++i) REQUIRE(sim.step());
        CHECK(validate(sim.snapshot(), 1e-12).empty());
    }
    CHECK(sim.collisions() == 100000);
}

TEST_CASE("paranoid auditing accepts a normal run") {
    SimConfig cfg;
    cfg.n = 9;
    cfg.seed = 11;
    cfg.paranoia = true;
    Simulation sim(cfg);
    for (int i = 0; i < 30000; ++i) REQUIRE(sim.step());
}

TEST_CASE("two disks converge to the diameter pair") {
    SimConfig cfg;
    cfg.n = 2;
    cfg.seed = 7;
    // The two-disk optimum is reached through a soft rolling mode (the pair
    // slides along the wall toward a diameter). Fast growth can squeeze the
    // free room away before that mode finishes relaxing, so grow gently; the
    // residual drift per window is ~2e-15, just over the default cutoff.
    cfg.growth_to_speed_ratio = 1e-4;
    cfg.convergence_rel_tol = 1e-14;
    cfg.max_collisions = 80000000ull;
    const RunResult res = run_simulation(cfg);
    CHECK(res.stats.converged);
    CHECK(res.packing.ratio() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(validate(res.packing, 1e-12).empty());
    CHECK(dist(res.packing.centers[0], res.packing.centers[1]) ==
          doctest::Approx(res.packing.diameter()).epsilon(1e-9));
    CHECK(measure(res.packing).density <=
          std::numbers::pi / (2.0 * std::sqrt(3.0)) + 1e-9);
}

TEST_CASE("seven disks find the hexagonal flower") {
    SimConfig cfg;
    cfg.n = 7;
    cfg.seed = 1;
    cfg.max_collisions = 200000000ull;
    const RunResult res = run_simulation(cfg);
    CHECK(res.stats.converged);
    CHECK(res.packing.ratio() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(validate(res.packing, 1e-12).empty());
    CHECK(measure(res.packing).density <=
          std::numbers::pi / (2.0 * std::sqrt(3.0)) + 1e-9);

    const auto spec = match_curved_hex(res.packing);
    REQUIRE(spec.has_value());
    CHECK(spec->k == 1);

    // Converged bonds are tight: the flower's 12 pair bonds + 6 wall bonds.
    const ContactGraph g = contact_graph(res.packing, 1e-12);
    CHECK(g.disk_bonds.size() == 12);
    CHECK(g.wall_bonds.size() == 6);
    CHECK(res.stats.cell_events > 0);  // the grid engine was actually exercised
}

TEST_CASE("runs are deterministic for a fixed seed") {
    SimConfig cfg;
    cfg.n = 13;
    cfg.seed = 99;
    cfg.max_collisions = 200000;
    const RunResult a = run_simulation(cfg);
    const RunResult b = run_simulation(cfg);
    CHECK_FALSE(a.stats.converged);
    CHECK(a.stats.collisions == b.stats.collisions);
    CHECK(a.stats.sim_time == b.stats.sim_time);
    CHECK(a.packing.disk_radius == b.packing.disk_radius);
    for (int i = 0; i < cfg.n; ++i) {
        CHECK(a.packing.centers[i].x == b.packing.centers[i].x);
        CHECK(a.packing.centers[i].y == b.packing.centers[i].y);
    }
}

TEST_CASE("batch runs aggregate by congruence class") {
    SimConfig base;
    base.n = 6;
    base.growth_to_speed_ratio = 0.004;
    base.convergence_window = 200000;
    base.max_collisions = 40000000ull;
    const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    const BatchResult r1 = run_batch(base, seeds);
    REQUIRE(r1.runs.size() == 5);
    int ok = 0;
    for (const auto& run : r1.runs) {
        if (!run.ok) continue;
        ++ok;
        CHECK(run.stats.converged);
        CHECK(measure(run.packing).density <= r1.best_density + 1e-15);
    }
    CHECK(ok == 5);
    int classed = 0;
    for (const auto& cls : r1.classes) {
        classed += cls.count;
        CHECK(cls.best_density <= r1.best_density + 1e-15);
    }
    CHECK(classed == ok);
    CHECK(r1.best_run >= 0);

    const BatchResult r2 = run_batch(base, seeds);
    CHECK(r2.best_density == r1.best_density);
    CHECK(r2.classes.size() == r1.classes.size());
    for (size_t i = 0; i < seeds.size(); ++i)
        CHECK(r2.runs[i].stats.collisions == r1.runs[i].stats.collisions);
}

TEST_CASE("configuration validation") {
    SimConfig cfg;
    cfg.n = 0;
    CHECK_THROWS_AS(Simulation{cfg}, std::invalid_argument);
    cfg.n = 3;
    cfg.container_radius = 0.0;
    CHECK_THROWS_AS(Simulation{cfg}, std::invalid_argument);
    cfg.container_radius = 1.0;
    cfg.initial_packing_fraction = 0.9;
    CHECK_THROWS_AS(Simulation{cfg}, std::invalid_argument);
    cfg.initial_packing_fraction = 0.1;
    cfg.growth_to_speed_ratio = -1.0;
    CHECK_THROWS_AS(Simulation{cfg}, std::invalid_argument);
    cfg.growth_to_speed_ratio = 0.001;
    cfg.convergence_rel_tol = 0.0;
    CHECK_THROWS_AS(Simulation{cfg}, std::invalid_argument);
}
