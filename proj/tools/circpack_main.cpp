// circpack: command-line front end tying construction, simulation, and
// analysis into reproducible experiments.
//
// Subcommands: construct, enumerate, pack, analyze, render, table1,
// tightness, recipe.  Global flags --seed/--runs/--parallelism/--tol/--out
// apply to every subcommand; CIRCPACK_OUT overrides the default output
// directory when --out is not given.  All outputs are deterministic under
// fixed seeds (the wall-clock column of stats CSVs aside).

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "circpack/analysis.hpp"
#include "circpack/construct.hpp"
#include "circpack/hex_formulas.hpp"
#include "circpack/packing.hpp"
#include "circpack/sim.hpp"
#include "circpack/svg.hpp"

namespace fs = std::filesystem;
using namespace circpack;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 1;
    int runs = 0;  // 0: use the subcommand's default
    int parallelism = 0;
    double tol = 1e-9;
    std::string out = ".";
};

// Numbers in console tables carry 14 significant digits; files carry 17 so a
// reload reproduces every double bit-for-bit.
std::string f14(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.14g", v);
    return buf;
}

std::string f17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

fs::path prepare_outdir(const GlobalOpts& g) {
    fs::path dir(g.out);
    fs::create_directories(dir);
    return dir;
}

void apply_parallelism(const GlobalOpts& g) {
#ifdef _OPENMP
    if (g.parallelism > 0) omp_set_num_threads(g.parallelism);
#else
    (void)g;
#endif
}

std::string slugify(const std::string& spec) {
    std::string s;
    for (char c : spec) {
        if (c == '=') continue;
        if (c == ';')
            s += '_';
        else if (c == ',')
            s += '-';
        else
            s += c;
    }
    return s;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

// --- construction spec strings -------------------------------------------
// "k=5;order=1,2,3,4" | "k=13;flips=6,7,8,9" | "k=2" (basic pattern).

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(what + ": '" + item + "' is not an integer");
        }
        if (used != item.size())
            throw std::invalid_argument(what + ": '" + item + "' is not an integer");
        out.push_back(v);
    }
    return out;
}

std::variant<PathSpec, FlipSpec> parse_spec_string(const std::string& text) {
    int k = 0;
    bool have_k = false;
    std::optional<std::vector<int>> order, flips;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        if (tok.empty()) continue;
        const size_t eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("spec token '" + tok + "' is not key=value");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "k") {
            k = std::stoi(val);
            have_k = true;
        } else if (key == "order") {
            order = parse_int_list(val, "order");
        } else if (key == "flips") {
            flips = parse_int_list(val, "flips");
        } else {
            throw std::invalid_argument("unknown spec key '" + key + "'");
        }
    }
    if (!have_k) throw std::invalid_argument("spec must give k");
    if (order && flips) throw std::invalid_argument("spec cannot give both order and flips");
    if (flips) {
        FlipSpec f;
        f.k = k;
        f.flipped_layers = *flips;
        check_spec(f);
        return f;
    }
    PathSpec s;
    s.k = k;
    if (order) {
        s.order = *order;
    } else {
        for (int i = 1; i < k; ++i) s.order.push_back(i);  // basic pattern
    }
    check_spec(s);
    return s;
}

// --- construct -------------------------------------------------------------

int cmd_construct(const GlobalOpts& g, const std::string& spec_text) {
    const auto spec = parse_spec_string(spec_text);
    Packing p;
    PathSpec path;
    if (std::holds_alternative<FlipSpec>(spec)) {
        const FlipSpec& f = std::get<FlipSpec>(spec);
        p = build_packing_from_flips(f);
        path = flip_to_permutation(f);
    } else {
        path = std::get<PathSpec>(spec);
        p = build_packing_from_path(path);
    }
    const Measurement m = measure(p);
    const AnalysisReport rep = analyze(p, g.tol, false);

    const fs::path dir = prepare_outdir(g);
    const fs::path file = dir / ("construct_" + slugify(spec_text) + ".json");
    write_packing(p, file.string());

    std::cout << "spec       " << spec_text << "\n";
    std::cout << "canonical  " << to_string(canonical(path)) << "\n";
    std::cout << "disks      " << p.size() << "\n";
    std::cout << "D/d        " << f14(m.ratio) << "\n";
    std::cout << "density    " << f14(m.density) << "\n";
    std::cout << "regular    " << (rep.regular ? "yes" : "no") << "\n";
    std::cout << "wrote      " << file.string() << "\n";
    return 0;
}

// --- enumerate ---------------------------------------------------------------

int cmd_enumerate(const GlobalOpts& g, int k) {
    apply_parallelism(g);
    const std::vector<HexClass> classes = enumerate_all(k);
    const fs::path dir = prepare_outdir(g);

    int regular_count = 0;
    std::string summary = "{\n  \"k\": " + std::to_string(k) +
                          ",\n  \"classes\": " + std::to_string(classes.size()) +
                          ",\n  \"members\": [\n";
    for (size_t i = 0; i < classes.size(); ++i) {
        const HexClass& c = classes[i];
        const bool regular = permutation_to_flips(c.spec).has_value();
        regular_count += regular;
        char name[64];
        std::snprintf(name, sizeof name, "k%d_class%02zu.json", k, i);
        Packing p = c.packing;
        p.metadata["class_index"] = std::to_string(i);
        p.metadata["regular"] = regular ? "true" : "false";
        p.metadata["members"] = std::to_string(c.member_count);
        write_packing(p, (dir / name).string());
        summary += std::string("    {\"file\": \"") + name + "\", \"spec\": \"" +
                   to_string(c.spec) + "\", \"members\": " + std::to_string(c.member_count) +
                   ", \"regular\": " + (regular ? "true" : "false") + ", \"digest\": \"" +
                   c.fp.digest() + "\"}";
        summary += (i + 1 < classes.size()) ? ",\n" : "\n";
    }
    summary += "  ],\n  \"regular_classes\": " + std::to_string(regular_count) + "\n}\n";
    const fs::path sfile = dir / ("k" + std::to_string(k) + "_summary.json");
    write_text(sfile, summary);

    std::cout << "k=" << k << ": " << classes.size() << " congruence classes, " << regular_count
              << " regular\n";
    for (size_t i = 0; i < classes.size(); ++i) {
        const HexClass& c = classes[i];
        std::printf("  class %2zu  members %3d  %s  %s\n", i, c.member_count,
                    permutation_to_flips(c.spec) ? "regular  " : "irregular",
                    to_string(c.spec).c_str());
    }
    std::cout << "wrote " << classes.size() << " packing files and " << sfile.string() << "\n";
    return 0;
}

// --- pack ----------------------------------------------------------------

struct SimOverrides {
    double growth = 0.001;
    double fraction = 0.1;
    std::uint64_t window = 1000000;
    double reltol = 1e-15;
    std::uint64_t max_collisions = 2000000000ull;
    bool naive = false;
};

SimConfig make_config(int n, const SimOverrides& so) {
    SimConfig cfg;
    cfg.n = n;
    cfg.growth_to_speed_ratio = so.growth;
    cfg.initial_packing_fraction = so.fraction;
    cfg.convergence_window = so.window;
    cfg.convergence_rel_tol = so.reltol;
    cfg.max_collisions = so.max_collisions;
    cfg.use_grid = !so.naive;
    return cfg;
}

std::vector<std::uint64_t> seed_list(std::uint64_t base, int runs) {
    std::vector<std::uint64_t> seeds(runs);
    for (int i = 0; i < runs; ++i) seeds[i] = base + static_cast<std::uint64_t>(i);
    return seeds;
}

void write_runs_csv(const fs::path& file, const BatchResult& batch) {
    std::string csv =
        "seed,ok,converged,collisions,pair_events,wall_events,cell_events,"
        "sim_time,final_ratio,density,digest,error,wall_clock_seconds\n";
    for (const BatchRun& r : batch.runs) {
        double density = 0.0;
        std::string digest;
        if (r.ok) {
            density = measure(r.packing).density;
            digest = fingerprint(r.packing).digest();
        }
        csv += std::to_string(r.seed);
        csv += r.ok ? ",1," : ",0,";
        csv += r.stats.converged ? "1," : "0,";
        csv += std::to_string(r.stats.collisions) + "," + std::to_string(r.stats.pair_events) +
               "," + std::to_string(r.stats.wall_events) + "," +
               std::to_string(r.stats.cell_events) + "," + f17(r.stats.sim_time) + "," +
               f17(r.stats.final_ratio) + "," + f17(density) + "," + digest + "," +
               csv_quote(r.error) + "," + f17(r.stats.wall_clock_seconds) + "\n";
    }
    write_text(file, csv);
}

// Frequency table over congruence classes, one row per class.
void print_class_table(const BatchResult& batch) {
    std::printf("  %-5s %-5s %-18s %-18s %-18s %-8s %s\n", "class", "count", "best D/d",
                "best density", "match", "regular", "digest");
    for (size_t i = 0; i < batch.classes.size(); ++i) {
        const BatchClassSummary& c = batch.classes[i];
        const BatchRun& rep = batch.runs[c.representative];
        const auto matched = match_curved_hex(rep.packing);
        const bool regular = matched && permutation_to_flips(*matched).has_value();
        const double best_ratio = batch.runs[c.best_run].stats.final_ratio;
        std::printf("  %-5zu %-5d %-18s %-18s %-18s %-8s %s\n", i, c.count,
                    f14(best_ratio).c_str(), f14(c.best_density).c_str(),
                    matched ? to_string(*matched).c_str() : "-",
                    matched ? (regular ? "yes" : "no") : "-",
                    fingerprint(rep.packing).digest().c_str());
    }
}

std::string batch_summary_json(int n, const GlobalOpts& g, const BatchResult& batch) {
    int ok = 0, converged = 0;
    for (const BatchRun& r : batch.runs) {
        ok += r.ok;
        converged += r.stats.converged;
    }
    std::string j = "{\n  \"n\": " + std::to_string(n) +
                    ",\n  \"runs\": " + std::to_string(batch.runs.size()) +
                    ",\n  \"ok\": " + std::to_string(ok) +
                    ",\n  \"converged\": " + std::to_string(converged) +
                    ",\n  \"seed_base\": " + std::to_string(g.seed);
    if (batch.best_run >= 0) {
        j += ",\n  \"best\": {\"seed\": " + std::to_string(batch.runs[batch.best_run].seed) +
             ", \"density\": " + f17(batch.best_density) +
             ", \"ratio\": " + f17(batch.runs[batch.best_run].stats.final_ratio) + "}";
    }
    j += ",\n  \"classes\": [\n";
    for (size_t i = 0; i < batch.classes.size(); ++i) {
        const BatchClassSummary& c = batch.classes[i];
        const BatchRun& rep = batch.runs[c.representative];
        const auto matched = match_curved_hex(rep.packing);
        j += "    {\"count\": " + std::to_string(c.count) +
             ", \"best_density\": " + f17(c.best_density) + ", \"digest\": \"" +
             fingerprint(rep.packing).digest() + "\"";
        if (matched) {
            j += ", \"match\": \"" + to_string(*matched) + "\", \"regular\": " +
                 (permutation_to_flips(*matched) ? "true" : "false");
        } else {
            j += ", \"match\": null";
        }
        j += "}";
        j += (i + 1 < batch.classes.size()) ? ",\n" : "\n";
    }
    j += "  ]\n}\n";
    return j;
}

int cmd_pack(const GlobalOpts& g, int n, const SimOverrides& so) {
    const int runs = g.runs > 0 ? g.runs : 20;
    if (g.runs < 0) throw std::invalid_argument("runs must be positive");
    apply_parallelism(g);
    const SimConfig cfg = make_config(n, so);
    const BatchResult batch = run_batch(cfg, seed_list(g.seed, runs));

    const fs::path dir = prepare_outdir(g);
    const std::string stem = "pack_n" + std::to_string(n);
    write_runs_csv(dir / (stem + "_runs.csv"), batch);
    write_text(dir / (stem + "_summary.json"), batch_summary_json(n, g, batch));

    int ok = 0;
    for (const BatchRun& r : batch.runs) ok += r.ok;
    std::cout << "n=" << n << "  runs=" << runs << "  ok=" << ok
              << "  classes=" << batch.classes.size() << "\n";
    if (batch.best_run < 0) {
        std::cerr << "error: no run produced a packing\n";
        return 1;
    }
    const BatchRun& best = batch.runs[batch.best_run];
    std::cout << "best  seed=" << best.seed << "  D/d=" << f14(best.stats.final_ratio)
              << "  density=" << f14(batch.best_density) << "\n";
    print_class_table(batch);

    const fs::path best_file = dir / (stem + "_best.json");
    write_packing(best.packing, best_file.string());
    std::cout << "wrote " << best_file.string() << ", " << (dir / (stem + "_runs.csv")).string()
              << ", " << (dir / (stem + "_summary.json")).string() << "\n";
    return 0;
}

// --- analyze ----------------------------------------------------------------

int cmd_analyze(const GlobalOpts& g, const std::string& input, bool no_match) {
    const Packing p = read_packing(input);
    const AnalysisReport rep = analyze(p, g.tol, !no_match);
    const std::string json = report_to_json(rep);
    const fs::path dir = prepare_outdir(g);
    const fs::path file = dir / ("analysis_" + fs::path(input).stem().string() + ".json");
    write_text(file, json + "\n");
    std::cout << json << "\n";
    return 0;
}

// --- render ----------------------------------------------------------------

int cmd_render(const GlobalOpts& g, const std::string& input, const std::string& style,
               int size_px, std::string output) {
    const Packing p = read_packing(input);
    RenderOptions opt;
    opt.size_px = size_px;
    opt.draw_bonds = style != "plain";
    opt.draw_labels = style == "labels";
    opt.bond_threshold = g.tol;
    if (p.size() > 0) {
        const ContactGraph cg = contact_graph(p, g.tol);
        opt.rattlers = find_rattlers(p, cg);
    }
    const fs::path dir = prepare_outdir(g);
    if (output.empty()) output = fs::path(input).stem().string() + ".svg";
    const fs::path file = dir / output;
    write_svg(p, file.string(), opt);
    std::cout << "wrote " << file.string() << " (" << p.size() << " disks, style " << style
              << ")\n";
    return 0;
}

// --- table1 ----------------------------------------------------------------

int cmd_table1(const GlobalOpts& g, std::vector<int> ks, const SimOverrides& so) {
    const int runs = g.runs > 0 ? g.runs : 20;
    apply_parallelism(g);
    if (ks.empty()) ks = {6, 7, 8};

    std::string csv =
        "k,n,curvhex_density_formula,curvhex_ratio_formula,"
        "best_density_sim,best_ratio_sim,better_count,ok_runs,runs\n";
    std::printf("%3s %6s  %-18s %-18s  %-18s %-18s  %s\n", "k", "n", "curv-hex density",
                "curv-hex D/d", "best density", "best D/d", "better/runs");
    std::printf("%11s %-37s  %-37s\n", "", "(formula)",
                ("(simulation, best of " + std::to_string(runs) + ")").c_str());

    double total_wall = 0.0;
    for (int k : ks) {
        const int n = static_cast<int>(hex_number(k));
        const double fd = curved_hex_density(k);
        const double fr = curved_hex_ratio(k);
        const SimConfig cfg = make_config(n, so);
        const BatchResult batch = run_batch(cfg, seed_list(g.seed, runs));
        int ok = 0, better = 0;
        for (const BatchRun& r : batch.runs) {
            ok += r.ok;
            if (r.ok && measure(r.packing).density > fd) ++better;
            total_wall += r.stats.wall_clock_seconds;
        }
        const double bd = batch.best_run >= 0 ? batch.best_density : 0.0;
        const double br = batch.best_run >= 0 ? batch.runs[batch.best_run].stats.final_ratio : 0.0;
        std::printf("%3d %6d  %-18s %-18s  %-18s %-18s  %d/%d\n", k, n, f14(fd).c_str(),
                    f14(fr).c_str(), f14(bd).c_str(), f14(br).c_str(), better, runs);
        csv += std::to_string(k) + "," + std::to_string(n) + "," + f17(fd) + "," + f17(fr) + "," +
               f17(bd) + "," + f17(br) + "," + std::to_string(better) + "," + std::to_string(ok) +
               "," + std::to_string(runs) + "\n";
    }
    const fs::path dir = prepare_outdir(g);
    write_text(dir / "table1.csv", csv);
    std::printf("total simulation wall clock: %.1f s\n", total_wall);
    std::cout << "wrote " << (dir / "table1.csv").string() << "\n";
    return 0;
}

// --- tightness ----------------------------------------------------------------

int cmd_tightness(const GlobalOpts& g, int k, const SimOverrides& so) {
    const int runs = g.runs > 0 ? g.runs : 30;
    apply_parallelism(g);
    const int n0 = static_cast<int>(hex_number(k));

    Packing best[3];
    double best_ratio[3] = {0, 0, 0};
    double total_wall = 0.0;
    for (int j = 0; j < 3; ++j) {
        const int n = n0 - 1 + j;
        const SimConfig cfg = make_config(n, so);
        // A different seed block per disk count keeps the three batches
        // statistically independent even with a shared base seed.
        const BatchResult batch =
            run_batch(cfg, seed_list(g.seed + 1000ull * static_cast<std::uint64_t>(j), runs));
        for (const BatchRun& r : batch.runs) total_wall += r.stats.wall_clock_seconds;
        if (batch.best_run < 0) {
            std::cerr << "error: no successful run for n=" << n << "\n";
            return 1;
        }
        best[j] = batch.runs[batch.best_run].packing;
        best_ratio[j] = batch.runs[batch.best_run].stats.final_ratio;
    }

    const auto ratio = tightness_ratio(best[0], best[1], best[2]);
    // Quality gate: if the h(k) batch missed the curved-hex optimum the row
    // is not a statement about optimal packings.
    const bool converged = std::abs(best_ratio[1] - curved_hex_ratio(k)) <= 1e-6;
    const std::string status = converged ? "ok" : "unconverged";

    std::printf("k=%d  n=%d\n", k, n0);
    std::printf("  D/d(n-1) = %s\n", f14(best_ratio[0]).c_str());
    std::printf("  D/d(n)   = %s   (curved-hex formula %s)\n", f14(best_ratio[1]).c_str(),
                f14(curved_hex_ratio(k)).c_str());
    std::printf("  D/d(n+1) = %s\n", f14(best_ratio[2]).c_str());
    std::printf("  tightness = %s   [%s, best of %d runs per n]\n",
                ratio ? f14(*ratio).c_str() : "undefined", status.c_str(), runs);

    std::string csv =
        "k,n,ratio_minus_sim,ratio_center_sim,ratio_plus_sim,"
        "curvhex_ratio_formula,tightness,status,runs\n";
    csv += std::to_string(k) + "," + std::to_string(n0) + "," + f17(best_ratio[0]) + "," +
           f17(best_ratio[1]) + "," + f17(best_ratio[2]) + "," + f17(curved_hex_ratio(k)) + "," +
           (ratio ? f17(*ratio) : "") + "," + status + "," + std::to_string(runs) + "\n";
    const fs::path dir = prepare_outdir(g);
    const fs::path file = dir / ("tightness_k" + std::to_string(k) + ".csv");
    write_text(file, csv);
    std::printf("total simulation wall clock: %.1f s\n", total_wall);
    std::cout << "wrote " << file.string() << "\n";
    return 0;
}

// --- recipe ----------------------------------------------------------------

int run_argv(const std::vector<std::string>& args);

// A recipe file names a command sequence with shared overrides:
// {"name": "...", "commands": [["construct", "k=2"], ...],
//  "seed": 5, "tol": 1e-9, "out": "dir", "outputs": ["construct_k2.json"]}
int cmd_recipe(const GlobalOpts& g, const std::string& file) {
    std::ifstream f(file);
    if (!f) throw std::runtime_error("cannot read recipe " + file);
    nlohmann::json j;
    f >> j;

    const std::string name = j.value("name", fs::path(file).stem().string());
    std::vector<std::string> overrides;
    if (j.contains("out"))
        overrides = {"--out", j["out"].get<std::string>()};
    else if (g.out != ".")
        overrides = {"--out", g.out};
    if (j.contains("seed")) {
        overrides.push_back("--seed");
        overrides.push_back(std::to_string(j["seed"].get<std::uint64_t>()));
    }
    if (j.contains("tol")) {
        overrides.push_back("--tol");
        overrides.push_back(f17(j["tol"].get<double>()));
    }

    if (!j.contains("commands") || !j["commands"].is_array())
        throw std::runtime_error("recipe has no commands array");
    int step = 0;
    for (const auto& cmd : j["commands"]) {
        std::vector<std::string> argv = overrides;
        for (const auto& a : cmd) argv.push_back(a.get<std::string>());
        std::cout << "--- recipe " << name << " step " << ++step << "\n";
        const int rc = run_argv(argv);
        if (rc != 0) {
            std::cerr << "recipe " << name << ": step " << step << " failed\n";
            return rc;
        }
    }

    if (j.contains("outputs")) {
        const fs::path dir(j.contains("out") ? j["out"].get<std::string>() : g.out);
        for (const auto& o : j["outputs"]) {
            const fs::path p = dir / o.get<std::string>();
            if (!fs::exists(p)) {
                std::cerr << "recipe " << name << ": expected output missing: " << p.string()
                          << "\n";
                return 1;
            }
        }
    }
    std::cout << "recipe " << name << ": " << step << " commands ok\n";
    return 0;
}

// --- dispatch ----------------------------------------------------------------

int run_argv(const std::vector<std::string>& args) {
    GlobalOpts g;
    CLI::App app{"dense packings of equal disks in a circle"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "base random seed")->capture_default_str();
    app.add_option("--runs", g.runs, "simulation runs per batch (default per command)");
    app.add_option("--parallelism", g.parallelism, "worker thread cap (0 = library default)");
    app.add_option("--tol", g.tol, "contact/bond threshold in diameters")->capture_default_str();
    app.add_option("--out", g.out, "output directory")->envname("CIRCPACK_OUT");

    std::string spec_text, input, style = "bonds", output, recipe_file;
    int k = 2, n = 7, size_px = 800;
    bool no_match = false;
    std::vector<int> ks;
    SimOverrides so;

    CLI::App* c_construct = app.add_subcommand("construct", "build a curved hexagonal packing");
    c_construct->add_option("spec", spec_text, "e.g. \"k=5;order=1,2,3,4\" or \"k=13;flips=6,7,8,9\"")
        ->required();

    CLI::App* c_enum = app.add_subcommand("enumerate", "all congruence classes for one k");
    c_enum->add_option("k", k, "layer count (1..8)")->required();

    CLI::App* c_pack = app.add_subcommand("pack", "batch of billiards runs for n disks");
    c_pack->add_option("n", n, "disk count")->required();
    auto add_sim_flags = [&so](CLI::App* c) {
        c->add_option("--growth", so.growth, "growth rate / mean speed")->capture_default_str();
        c->add_option("--fraction", so.fraction, "initial packing fraction")
            ->capture_default_str();
        c->add_option("--window", so.window, "convergence window in collisions")
            ->capture_default_str();
        c->add_option("--reltol", so.reltol, "relative ratio change per window")
            ->capture_default_str();
        c->add_option("--max-collisions", so.max_collisions, "per-run collision cap")
            ->capture_default_str();
        c->add_flag("--naive", so.naive, "use the all-pairs reference engine");
    };
    add_sim_flags(c_pack);

    CLI::App* c_analyze = app.add_subcommand("analyze", "contact/rigidity report for a packing");
    c_analyze->add_option("file", input, "packing JSON")->required()->check(CLI::ExistingFile);
    c_analyze->add_flag("--no-match", no_match, "skip curved-hex identification");

    CLI::App* c_render = app.add_subcommand("render", "SVG figure for a packing");
    c_render->add_option("file", input, "packing JSON")->required()->check(CLI::ExistingFile);
    c_render->add_option("--style", style, "plain | bonds | labels")
        ->check(CLI::IsMember({"plain", "bonds", "labels"}))
        ->capture_default_str();
    c_render->add_option("--size", size_px, "image size in pixels")->capture_default_str();
    c_render->add_option("--output", output, "file name (default input stem + .svg)");

    CLI::App* c_table1 = app.add_subcommand("table1", "curved-hex formulas vs batch experiments");
    c_table1->add_option("--k", ks, "layer counts (default 6 7 8)")->delimiter(',');
    add_sim_flags(c_table1);

    CLI::App* c_tight = app.add_subcommand("tightness", "D/d sensitivity at n = h(k)-1, h(k), h(k)+1");
    c_tight->add_option("k", k, "layer count")->required();
    add_sim_flags(c_tight);

    CLI::App* c_recipe = app.add_subcommand("recipe", "replay a command sequence from JSON");
    c_recipe->add_option("file", recipe_file, "recipe JSON")->required()->check(CLI::ExistingFile);

    std::vector<const char*> argv;
    argv.push_back("circpack");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (c_construct->parsed()) return cmd_construct(g, spec_text);
        if (c_enum->parsed()) return cmd_enumerate(g, k);
        if (c_pack->parsed()) return cmd_pack(g, n, so);
        if (c_analyze->parsed()) return cmd_analyze(g, input, no_match);
        if (c_render->parsed()) return cmd_render(g, input, style, size_px, output);
        if (c_table1->parsed()) return cmd_table1(g, ks, so);
        if (c_tight->parsed()) return cmd_tightness(g, k, so);
        if (c_recipe->parsed()) return cmd_recipe(g, recipe_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_argv(args);
}
