// Benchmark: grid-accelerated event engine vs the all-pairs reference.
//
// Both engines are run from identical initial states for a fixed number of
// collisions; the table reports event throughput and the largest center
// deviation between the two trajectories (zero while the run stays out of
// the near-jamming regime, where event-ordering ties become legitimate).
//
// usage: bench_engines [collisions] [n ...]   (defaults: 200000, n = 12 24 48 96 192)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "circpack/packing.hpp"
#include "circpack/sim.hpp"
#include "circpack/vec2.hpp"

using namespace circpack;

namespace {

double run_engine(SimConfig cfg, bool grid, std::uint64_t events, Packing& out) {
    cfg.use_grid = grid;
    Simulation sim(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < events; ++i)
        if (!sim.step()) break;
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out = sim.snapshot();
    return dt;
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t events = 200000;
    std::vector<int> sizes;
    if (argc > 1) events = std::strtoull(argv[1], nullptr, 10);
    for (int i = 2; i < argc; ++i) sizes.push_back(std::atoi(argv[i]));
    if (sizes.empty()) sizes = {12, 24, 48, 96, 192};

    std::printf("%6s %12s %14s %14s %9s %12s\n", "n", "collisions", "grid ev/s", "naive ev/s",
                "speedup", "max dev");
    for (int n : sizes) {
        SimConfig cfg;
        cfg.n = n;
        cfg.seed = 12345;
        // Slow growth keeps the comparison window inside the well-separated
        // regime where both engines follow one trajectory.
        cfg.growth_to_speed_ratio = 2e-5;
        cfg.max_collisions = ~0ull;

        Packing pg, pn;
        const double tg = run_engine(cfg, true, events, pg);
        const double tn = run_engine(cfg, false, events, pn);
        double dev = 0.0;
        for (int i = 0; i < n; ++i) dev = std::max(dev, dist(pg.centers[i], pn.centers[i]));
        std::printf("%6d %12llu %14.0f %14.0f %8.2fx %12.3e\n", n,
                    static_cast<unsigned long long>(events), events / tg, events / tn, tn / tg,
                    dev);
    }
    return 0;
}
