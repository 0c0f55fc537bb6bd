#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "circpack/packing.hpp"
#include "circpack/vec2.hpp"

namespace circpack {

// Event-driven hard-disk compression: disks fly ballistically at unit mean
// speed while their common radius grows linearly, r(t) = r0 + g*t, until the
// diameter ratio D/d stops improving.
struct SimConfig {
    int n = 7;
    double container_radius = 1.0;
    double growth_to_speed_ratio = 0.001;  // g
    std::uint64_t seed = 1;
    double initial_packing_fraction = 0.1;
    std::uint64_t convergence_window = 1000000;  // collisions per ratio check
    double convergence_rel_tol = 1e-15;          // on D/d between checks
    std::uint64_t max_collisions = 2000000000ull;
    bool use_grid = true;   // false: all-pairs reference engine
    bool paranoia = false;  // revalidate non-overlap after every collision
};

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time until |dp + dv*s| = sum_radii + 2*g*s, or +inf when the pair never
// meets; dp, dv are relative position/velocity at the current instant and
// sum_radii the current sum of the two radii.
double predict_disk_disk(const Vec2& dp, const Vec2& dv, double sum_radii, double g);
// Time until |p + v*s| = wall_radius - g*s, where wall_radius = R - r(now).
double predict_disk_wall(const Vec2& p, const Vec2& v, double wall_radius, double g);

// Exchange the normal velocity components (when actually approaching) and
// push each disk outward by g so the pair separates faster than it grows.
void resolve_disk_disk(const Vec2& pa, const Vec2& pb, Vec2& va, Vec2& vb, double g);
// Reflect the radial component (when moving outward) and add g inward.
void resolve_disk_wall(const Vec2& p, Vec2& v, double g);

struct GapBands {
    double min_gap = 0.0;  // smallest signed gap, in diameters
    int below_1e13 = 0;    // gaps < 1e-13
    int below_1e9 = 0;     // gaps in [1e-13, 1e-9)
    int below_1e5 = 0;     // gaps in [1e-9, 1e-5)
    int rest = 0;
};

struct RunStats {
    std::uint64_t collisions = 0;  // pair + wall events
    std::uint64_t pair_events = 0;
    std::uint64_t wall_events = 0;
    std::uint64_t cell_events = 0;
    double sim_time = 0.0;
    double wall_clock_seconds = 0.0;
    double final_ratio = 0.0;
    bool converged = false;
    GapBands gaps;
};

struct RunResult {
    Packing packing;
    RunStats stats;
};

class Simulation {
  public:
    explicit Simulation(const SimConfig& cfg);

    // Process events up to and including the next collision; returns false
    // once converged or at the collision cap.
    bool step();
    RunResult finish();

    Packing snapshot() const;  // current configuration; initial at collision 0
    double time() const { return time_base_ + now_; }
    double radius() const { return r0_ + g_ * now_; }
    double ratio() const { return cfg_.container_radius / radius(); }
    double kinetic_energy() const;
    std::uint64_t collisions() const { return collisions_; }
    std::uint64_t pair_events() const { return pair_events_; }
    std::uint64_t wall_events() const { return wall_events_; }
    std::uint64_t cell_events() const { return cell_events_; }
    bool converged() const { return converged_; }

  private:
    struct Event {
        double t;
        std::int32_t a, b;  // b >= 0 pair, kWall, or kCross (eb = exit side)
        std::uint32_t ea, eb;
    };
    static constexpr std::int32_t kWall = -1;
    static constexpr std::int32_t kCross = -2;

    void advance(int i, double t);
    Vec2 pos_at(int i, double t) const { return pos_[i] + vel_[i] * (t - tloc_[i]); }
    void push_event(const Event& e);
    void predict_wall(int i);
    void predict_cross(int i);
    void predict_pair(int i, int j);
    void predict_cell_pairs(int i, int cx0, int cx1, int cy0, int cy1);
    void schedule_disk(int i);
    void process_cross(const Event& e);
    void link_cell(int i, int c);
    void unlink_cell(int i);
    int cell_index_of(const Vec2& p) const;
    void rebuild_events();
    void resize_grid();
    void renormalize();
    void maintenance();
    void paranoia_check(int i);

    SimConfig cfg_;
    double g_ = 0.0;
    double r0_ = 0.0;
    double now_ = 0.0;        // clock since the last origin fold
    double time_base_ = 0.0;  // accumulated folded time
    bool converged_ = false;
    double prev_ratio_ = -1.0;
    std::uint64_t collisions_ = 0, pair_events_ = 0, wall_events_ = 0, cell_events_ = 0;
    std::uint64_t next_check_ = 0, next_renorm_ = 0, renorm_interval_ = 0;

    std::vector<Vec2> pos_, vel_;
    std::vector<double> tloc_;
    std::vector<std::uint32_t> epoch_;
    std::vector<Event> heap_;

    // uniform grid (grid engine only)
    double cell_size_ = 0.0;
    int ncell_x_ = 0;
    std::vector<int> cell_of_, cell_head_, cell_next_, cell_prev_;
};

RunResult run_simulation(const SimConfig& cfg);

struct BatchRun {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    RunStats stats;
    Packing packing;
};

struct BatchClassSummary {
    int representative = -1;  // index into runs of the first member
    int count = 0;
    int best_run = -1;
    double best_density = 0.0;
};

struct BatchResult {
    std::vector<BatchRun> runs;
    std::vector<BatchClassSummary> classes;  // grouped by congruence
    int best_run = -1;
    double best_density = 0.0;
};

// One run per seed (parallelized across runs, each run deterministic);
// failures are recorded and the batch continues.
BatchResult run_batch(const SimConfig& base, const std::vector<std::uint64_t>& seeds,
                      double class_tol = 1e-6);

}  // namespace circpack
