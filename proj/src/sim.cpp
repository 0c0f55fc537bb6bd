#include "circpack/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "circpack/fingerprint.hpp"

namespace circpack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

double predict_disk_disk(const Vec2& dp, const Vec2& dv, double sum_radii, double g) {
    const double a = dv.norm2() - 4.0 * g * g;
    const double b = dot(dp, dv) - 2.0 * g * sum_radii;  // half coefficient
    const double c = std::max(dp.norm2() - sum_radii * sum_radii, 0.0);
    if (a > 0.0) {
        if (b >= 0.0) return kInf;  // receding and growth cannot catch up
        const double disc = b * b - a * c;
        if (disc <= 0.0) return kInf;
        return c / (-b + std::sqrt(disc));  // smaller root, stable form
    }
    if (a == 0.0) {
        return b < 0.0 ? c / (-2.0 * b) : kInf;
    }
    // growth outruns the relative speed: contact is certain
    const double disc = std::max(b * b - a * c, 0.0);
    return (-b - std::sqrt(disc)) / a;
}

double predict_disk_wall(const Vec2& p, const Vec2& v, double wall_radius, double g) {
    const double a = v.norm2() - g * g;
    const double b = dot(p, v) + wall_radius * g;
    const double c = p.norm2() - wall_radius * wall_radius;  // <= 0 inside
    if (a > 0.0) {
        const double disc = std::max(b * b - a * c, 0.0);
        const double sq = std::sqrt(disc);
        const double s = (b <= 0.0) ? (-b + sq) / a : c / (-b - sq);
        return std::max(s, 0.0);
    }
    if (a == 0.0) {
        return b > 0.0 ? std::max(-c / (2.0 * b), 0.0) : kInf;
    }
    const double disc = std::max(b * b - a * c, 0.0);
    return std::max((-b + std::sqrt(disc)) / a, 0.0);  // first crossing
}

void resolve_disk_disk(const Vec2& pa, const Vec2& pb, Vec2& va, Vec2& vb, double g) {
    const Vec2 n = (pb - pa).normalized();
    const double s = dot(vb - va, n);  // separation speed along the normal
    if (s < 0.0) {                     // approaching: exchange normal parts
        va = va + n * s;
        vb = vb - n * s;
    }
    if (g != 0.0) {  // growth compensation: g outward for each participant
        va = va - n * g;
        vb = vb + n * g;
    }
}

void resolve_disk_wall(const Vec2& p, Vec2& v, double g) {
    const Vec2 u = p.normalized();
    const double w = dot(v, u);
    if (w > 0.0) v = v - u * (2.0 * w);
    if (g != 0.0) v = v - u * g;
}

Simulation::Simulation(const SimConfig& cfg) : cfg_(cfg) {
    if (cfg.n < 1) throw std::invalid_argument("sim: n must be at least 1");
    if (!(cfg.container_radius > 0.0))
        throw std::invalid_argument("sim: container radius must be positive");
    if (!(cfg.growth_to_speed_ratio >= 0.0))
        throw std::invalid_argument("sim: growth ratio must be non-negative");
    if (!(cfg.initial_packing_fraction > 0.0) || cfg.initial_packing_fraction > 0.5)
        throw std::invalid_argument("sim: initial packing fraction must be in (0, 0.5]");
    if (cfg.convergence_window < 1 || !(cfg.convergence_rel_tol > 0.0))
        throw std::invalid_argument("sim: bad convergence parameters");

    const int n = cfg.n;
    const double R = cfg.container_radius;
    g_ = cfg.growth_to_speed_ratio;
    r0_ = R * std::sqrt(cfg.initial_packing_fraction / n);

    pos_.resize(n);
    vel_.resize(n);
    tloc_.assign(n, 0.0);
    epoch_.assign(n, 0);

    std::mt19937_64 rng(splitmix64(cfg.seed));
    std::uniform_real_distribution<double> uab(0.0, 1.0);
    const double tau = 2.0 * std::numbers::pi;
    const double reach = R - r0_;
    const double min_dist2 = 4.0 * r0_ * r0_ * (1.0 + 1e-9);
    for (int i = 0; i < n; ++i) {
        for (std::uint64_t attempt = 0;; ++attempt) {
            if (attempt > 10000000ull) throw SimError("sim: could not seed initial positions");
            const Vec2 cand = from_polar(reach * std::sqrt(uab(rng)), tau * uab(rng));
            bool ok = true;
            for (int j = 0; j < i && ok; ++j)
                if (dist2(cand, pos_[j]) < min_dist2) ok = false;
            if (ok) {
                pos_[i] = cand;
                break;
            }
        }
        vel_[i] = from_polar(1.0, tau * uab(rng));
    }

    renorm_interval_ = std::max<std::uint64_t>(256, 4ull * n);
    next_renorm_ = renorm_interval_;
    next_check_ = cfg.convergence_window;

    if (cfg_.use_grid) {
        cell_size_ = 2.6 * r0_;
        ncell_x_ = std::max(1, static_cast<int>(std::floor(2.0 * R / cell_size_)));
        cell_size_ = 2.0 * R / ncell_x_;
    }
    rebuild_events();
}

void Simulation::advance(int i, double t) {
    pos_[i] = pos_[i] + vel_[i] * (t - tloc_[i]);
    tloc_[i] = t;
}

void Simulation::push_event(const Event& e) {
    if (e.t == kInf) return;
    if (!std::isfinite(e.t)) throw SimError("sim: non-finite event time");
    heap_.push_back(e);
    std::push_heap(heap_.begin(), heap_.end(),
                   [](const Event& x, const Event& y) { return x.t > y.t; });
}

// Predictions read extrapolated positions without storing them back, so the
// stored state mutates only at collisions; the grid and all-pairs engines
// then perform bitwise-identical arithmetic along the same trajectory.
void Simulation::predict_wall(int i) {
    const double s =
        predict_disk_wall(pos_at(i, now_), vel_[i], cfg_.container_radius - radius(), g_);
    push_event({now_ + std::max(s, 0.0), static_cast<std::int32_t>(i), kWall, epoch_[i], 0});
}

int Simulation::cell_index_of(const Vec2& p) const {
    const double R = cfg_.container_radius;
    int cx = static_cast<int>(std::floor((p.x + R) / cell_size_));
    int cy = static_cast<int>(std::floor((p.y + R) / cell_size_));
    cx = std::clamp(cx, 0, ncell_x_ - 1);
    cy = std::clamp(cy, 0, ncell_x_ - 1);
    return cy * ncell_x_ + cx;
}

void Simulation::predict_cross(int i) {
    const Vec2 p = pos_at(i, now_);
    const double R = cfg_.container_radius;
    const int cx = cell_of_[i] % ncell_x_;
    const int cy = cell_of_[i] / ncell_x_;
    double best = kInf;
    std::uint32_t side = 0;
    const auto consider = [&](double s, std::uint32_t which) {
        if (s >= 0.0 && s < best) {
            best = s;
            side = which;
        }
    };
    if (vel_[i].x > 0.0) consider(((cx + 1) * cell_size_ - R - p.x) / vel_[i].x, 0);
    if (vel_[i].x < 0.0) consider((cx * cell_size_ - R - p.x) / vel_[i].x, 1);
    if (vel_[i].y > 0.0) consider(((cy + 1) * cell_size_ - R - p.y) / vel_[i].y, 2);
    if (vel_[i].y < 0.0) consider((cy * cell_size_ - R - p.y) / vel_[i].y, 3);
    if (best < kInf)
        push_event({now_ + best, static_cast<std::int32_t>(i), kCross, epoch_[i], side});
}

void Simulation::predict_pair(int i, int j) {
    const double s = predict_disk_disk(pos_at(j, now_) - pos_at(i, now_), vel_[j] - vel_[i],
                                       2.0 * radius(), g_);
    if (s == kInf) return;
    push_event({now_ + std::max(s, 0.0), static_cast<std::int32_t>(std::min(i, j)),
                static_cast<std::int32_t>(std::max(i, j)), epoch_[std::min(i, j)],
                epoch_[std::max(i, j)]});
}

void Simulation::predict_cell_pairs(int i, int cx0, int cx1, int cy0, int cy1) {
    for (int cy = std::max(cy0, 0); cy <= std::min(cy1, ncell_x_ - 1); ++cy) {
        for (int cx = std::max(cx0, 0); cx <= std::min(cx1, ncell_x_ - 1); ++cx) {
            for (int j = cell_head_[cy * ncell_x_ + cx]; j >= 0; j = cell_next_[j]) {
                if (j != i) predict_pair(i, j);
            }
        }
    }
}

void Simulation::schedule_disk(int i) {
    predict_wall(i);
    if (cfg_.use_grid) {
        predict_cross(i);
        const int cx = cell_of_[i] % ncell_x_;
        const int cy = cell_of_[i] / ncell_x_;
        predict_cell_pairs(i, cx - 1, cx + 1, cy - 1, cy + 1);
    } else {
        for (int j = 0; j < cfg_.n; ++j)
            if (j != i) predict_pair(i, j);
    }
}

void Simulation::link_cell(int i, int c) {
    cell_of_[i] = c;
    cell_prev_[i] = -1;
    cell_next_[i] = cell_head_[c];
    if (cell_head_[c] >= 0) cell_prev_[cell_head_[c]] = i;
    cell_head_[c] = i;
}

void Simulation::unlink_cell(int i) {
    const int c = cell_of_[i];
    if (cell_prev_[i] >= 0)
        cell_next_[cell_prev_[i]] = cell_next_[i];
    else
        cell_head_[c] = cell_next_[i];
    if (cell_next_[i] >= 0) cell_prev_[cell_next_[i]] = cell_prev_[i];
}

void Simulation::process_cross(const Event& e) {
    const int i = e.a;
    ++cell_events_;
    const int cx = cell_of_[i] % ncell_x_;
    const int cy = cell_of_[i] / ncell_x_;
    int nx = cx, ny = cy;
    switch (e.eb) {
        case 0: ++nx; break;
        case 1: --nx; break;
        case 2: ++ny; break;
        default: --ny; break;
    }
    if (nx < 0 || nx >= ncell_x_ || ny < 0 || ny >= ncell_x_) return;  // wall turns it back first
    unlink_cell(i);
    link_cell(i, ny * ncell_x_ + nx);
    // only the freshly exposed row/column needs new pair predictions
    switch (e.eb) {
        case 0: predict_cell_pairs(i, nx + 1, nx + 1, ny - 1, ny + 1); break;
        case 1: predict_cell_pairs(i, nx - 1, nx - 1, ny - 1, ny + 1); break;
        case 2: predict_cell_pairs(i, nx - 1, nx + 1, ny + 1, ny + 1); break;
        default: predict_cell_pairs(i, nx - 1, nx + 1, ny - 1, ny - 1); break;
    }
    predict_cross(i);
}

void Simulation::rebuild_events() {
    heap_.clear();
    for (auto& e : epoch_) ++e;
    if (cfg_.use_grid) {
        const int n = cfg_.n;
        cell_of_.assign(n, -1);
        cell_next_.assign(n, -1);
        cell_prev_.assign(n, -1);
        cell_head_.assign(static_cast<size_t>(ncell_x_) * ncell_x_, -1);
        for (int i = 0; i < n; ++i) link_cell(i, cell_index_of(pos_at(i, now_)));
        for (int i = 0; i < n; ++i) {
            predict_wall(i);
            predict_cross(i);
            const int cx = cell_of_[i] % ncell_x_;
            const int cy = cell_of_[i] / ncell_x_;
            // each unordered pair once: scan neighbors with larger index
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int x = cx + dx, y = cy + dy;
                    if (x < 0 || x >= ncell_x_ || y < 0 || y >= ncell_x_) continue;
                    for (int j = cell_head_[y * ncell_x_ + x]; j >= 0; j = cell_next_[j])
                        if (j > i) predict_pair(i, j);
                }
            }
        }
    } else {
        for (int i = 0; i < cfg_.n; ++i) predict_wall(i);
        for (int i = 0; i < cfg_.n; ++i)
            for (int j = i + 1; j < cfg_.n; ++j) predict_pair(i, j);
    }
}

void Simulation::resize_grid() {
    cell_size_ = 2.6 * radius();
    ncell_x_ = std::max(1, static_cast<int>(std::floor(2.0 * cfg_.container_radius / cell_size_)));
    cell_size_ = 2.0 * cfg_.container_radius / ncell_x_;
}

void Simulation::renormalize() {
    double sum = 0.0;
    for (int i = 0; i < cfg_.n; ++i) {
        advance(i, now_);
        sum += vel_[i].norm();
    }
    const double mean = sum / cfg_.n;
    if (!(mean > 0.0) || !std::isfinite(mean)) throw SimError("sim: velocity renormalization failed");
    const double inv = 1.0 / mean;
    for (auto& v : vel_) v = v * inv;

    // Fold the time origin while every disk is synced to now_. Near jamming
    // the gap between events can drop below one ulp of an absolute clock,
    // which would freeze positions (and with them the soft sliding modes that
    // still have to relax). Restarting the clock at zero keeps event gaps
    // representable no matter how late in the run we are.
    r0_ = radius();
    time_base_ += now_;
    now_ = 0.0;
    std::fill(tloc_.begin(), tloc_.end(), 0.0);
}

void Simulation::maintenance() {
    bool rebuild = false;
    if (g_ > 0.0 && collisions_ >= next_renorm_) {
        next_renorm_ = collisions_ + renorm_interval_;
        renormalize();
        rebuild = true;
    }
    if (cfg_.use_grid && 2.0 * radius() > 0.95 * cell_size_) {
        resize_grid();
        rebuild = true;
    }
    if (rebuild || heap_.size() > 200000 + 400 * static_cast<size_t>(cfg_.n)) rebuild_events();

    if (collisions_ >= next_check_) {
        next_check_ = collisions_ + cfg_.convergence_window;
        const double cur = ratio();
        if (prev_ratio_ >= 0.0 && std::abs(prev_ratio_ - cur) < cfg_.convergence_rel_tol * cur)
            converged_ = true;
        prev_ratio_ = cur;
    }
}

void Simulation::paranoia_check(int i) {
    const double d = 2.0 * radius();
    const Vec2 pi = pos_at(i, now_);
    for (int j = 0; j < cfg_.n; ++j) {
        if (j == i) continue;
        const double gap = (dist(pi, pos_at(j, now_)) - d) / d;
        if (gap < -1e-12) throw SimError("sim: overlap beyond tolerance");
    }
    const double wall_gap = ((cfg_.container_radius - radius()) - pi.norm()) / d;
    if (wall_gap < -1e-12) throw SimError("sim: wall violation beyond tolerance");
    if (!std::isfinite(pi.x) || !std::isfinite(pi.y)) throw SimError("sim: position NaN");
}

bool Simulation::step() {
    if (converged_ || collisions_ >= cfg_.max_collisions) return false;
    for (;;) {
        if (heap_.empty()) throw SimError("sim: event queue starved");
        const Event e = heap_.front();
        std::pop_heap(heap_.begin(), heap_.end(),
                      [](const Event& x, const Event& y) { return x.t > y.t; });
        heap_.pop_back();
        if (e.ea != epoch_[e.a]) continue;
        if (e.b >= 0 && e.eb != epoch_[e.b]) continue;
        if (!std::isfinite(e.t)) throw SimError("sim: non-finite event time");
        if (e.t < now_ - 1e-9 * (1.0 + now_)) throw SimError("sim: event time regressed");

        if (e.b == kCross) {
            // Bookkeeping only; the simulation clock moves at collisions.
            process_cross(e);
            continue;
        }
        // The queued time orders events; the collision instant itself is
        // recomputed from the participants' exact state, so both engines
        // advance the trajectory with identical arithmetic.
        if (e.b == kWall) {
            const double s = predict_disk_wall(pos_at(e.a, now_), vel_[e.a],
                                               cfg_.container_radius - radius(), g_);
            now_ = (s < kInf) ? now_ + std::max(s, 0.0) : std::max(now_, e.t);
            advance(e.a, now_);
            resolve_disk_wall(pos_[e.a], vel_[e.a], g_);
            ++epoch_[e.a];
            schedule_disk(e.a);
            ++wall_events_;
            if (cfg_.paranoia) paranoia_check(e.a);
        } else {
            const double s =
                predict_disk_disk(pos_at(e.b, now_) - pos_at(e.a, now_),
                                  vel_[e.b] - vel_[e.a], 2.0 * radius(), g_);
            now_ = (s < kInf) ? now_ + std::max(s, 0.0) : std::max(now_, e.t);
            advance(e.a, now_);
            advance(e.b, now_);
            resolve_disk_disk(pos_[e.a], pos_[e.b], vel_[e.a], vel_[e.b], g_);
            ++epoch_[e.a];
            ++epoch_[e.b];
            schedule_disk(e.a);
            schedule_disk(e.b);
            ++pair_events_;
            if (cfg_.paranoia) {
                paranoia_check(e.a);
                paranoia_check(e.b);
            }
        }
        ++collisions_;
        maintenance();
        return true;
    }
}

Packing Simulation::snapshot() const {
    Packing p;
    p.container_radius = cfg_.container_radius;
    p.disk_radius = radius();
    p.centers.resize(cfg_.n);
    for (int i = 0; i < cfg_.n; ++i)
        p.centers[i] = pos_[i] + vel_[i] * (now_ - tloc_[i]);
    p.metadata["generator"] = "billiards";
    p.metadata["seed"] = std::to_string(cfg_.seed);
    p.metadata["collisions"] = std::to_string(collisions_);
    return p;
}

double Simulation::kinetic_energy() const {
    double e = 0.0;
    for (const auto& v : vel_) e += 0.5 * v.norm2();
    return e;
}

RunResult Simulation::finish() {
    const auto t0 = std::chrono::steady_clock::now();
    while (step()) {
    }
    RunResult out;
    out.packing = snapshot();
    out.packing.metadata["converged"] = converged_ ? "true" : "false";

    RunStats& st = out.stats;
    st.collisions = collisions_;
    st.pair_events = pair_events_;
    st.wall_events = wall_events_;
    st.cell_events = cell_events_;
    st.sim_time = time();
    st.final_ratio = ratio();
    st.converged = converged_;
    st.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    GapBands& gb = st.gaps;
    gb.min_gap = kInf;
    const Packing& p = out.packing;
    const double d = p.diameter();
    const auto note = [&](double gap) {
        gb.min_gap = std::min(gb.min_gap, gap);
        if (gap < 1e-13)
            ++gb.below_1e13;
        else if (gap < 1e-9)
            ++gb.below_1e9;
        else if (gap < 1e-5)
            ++gb.below_1e5;
        else
            ++gb.rest;
    };
    for (int i = 0; i < p.size(); ++i) {
        for (int j = i + 1; j < p.size(); ++j) note((dist(p.centers[i], p.centers[j]) - d) / d);
        note(((p.container_radius - p.disk_radius) - p.centers[i].norm()) / d);
    }
    return out;
}

RunResult run_simulation(const SimConfig& cfg) {
    Simulation sim(cfg);
    return sim.finish();
}

BatchResult run_batch(const SimConfig& base, const std::vector<std::uint64_t>& seeds,
                      double class_tol) {
    BatchResult out;
    out.runs.resize(seeds.size());

    const int m = static_cast<int>(seeds.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i) {
        BatchRun& run = out.runs[i];
        run.seed = seeds[i];
        try {
            SimConfig cfg = base;
            cfg.seed = seeds[i];
            RunResult res = run_simulation(cfg);
            run.stats = res.stats;
            run.packing = std::move(res.packing);
            run.ok = true;
        } catch (const std::exception& ex) {
            run.ok = false;
            run.error = ex.what();
        }
    }

    for (int i = 0; i < m; ++i) {
        const BatchRun& run = out.runs[i];
        if (!run.ok) continue;
        const double density = measure(run.packing).density;
        if (out.best_run < 0 || density > out.best_density) {
            out.best_run = i;
            out.best_density = density;
        }
        bool placed = false;
        for (auto& cls : out.classes) {
            if (congruent(run.packing, out.runs[cls.representative].packing, class_tol)) {
                ++cls.count;
                if (density > cls.best_density) {
                    cls.best_density = density;
                    cls.best_run = i;
                }
                placed = true;
                break;
            }
        }
        if (!placed) out.classes.push_back({i, 1, i, density});
    }
    return out;
}

}  // namespace circpack
