#include "entscale/cli.hpp"

#include "entscale/bounds.hpp"
#include "entscale/error.hpp"
#include "entscale/lattice.hpp"
#include "entscale/rng.hpp"
#include "entscale/runtime_model.hpp"
#include "entscale/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace entscale {

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::string screen(double value) {
    return fmt::format("{:.6g}", value);
}

IntRange parse_range(const std::string& text, const std::string& flag) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            throw std::invalid_argument("missing ':'");
        }
        std::size_t used = 0;
        const auto lo = std::stoull(text.substr(0, colon), &used);
        if (used != colon) {
            throw std::invalid_argument("bad minimum");
        }
        const std::string rest = text.substr(colon + 1);
        const auto hi = std::stoull(rest, &used);
        if (used != rest.size()) {
            throw std::invalid_argument("bad maximum");
        }
        return IntRange{lo, hi};
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, fmt::format("expected MIN:MAX with integers, got '{}'", text));
    }
}

void add_param_flags(CLI::App* cmd, RuntimeParams& params) {
    cmd->add_option("--a1", params.a1, "Gate-count exponent")->capture_default_str();
    cmd->add_option("--a2", params.a2, "Depth rate per sqrt(qubit)")->capture_default_str();
    cmd->add_option("--flops", params.flops, "Classical operations per second")->capture_default_str();
}

void print_rows(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t width = 0;
    for (const auto& [key, value] : rows) {
        width = std::max(width, key.size());
    }
    for (const auto& [key, value] : rows) {
        out << fmt::format("{:<{}}  {}\n", key, width, value);
    }
}

void print_report(std::ostream& out, const BoundReport& r, bool json) {
    if (json) {
        out << to_json(r).dump(2) << '\n';
        return;
    }
    print_rows(out, {
                        {"n", std::to_string(r.n)},
                        {"e", std::to_string(r.e)},
                        {"f", std::to_string(r.f)},
                        {"log2_chi_lb", screen(r.log2_chi_lb)},
                        {"chi_lb", screen(r.chi_lb)},
                        {"gate_lb", screen(r.gate_lb)},
                        {"depth_interval", screen(r.depth_interval.lower) + " " + screen(r.depth_interval.upper)},
                    });
}

constexpr const char* kSuiteChecks[] = {"ebit cap", "crossing rank bound", "per-layer ebit gain",
                                        "local-gate spectrum invariance", "entropy-rank coarse graining",
                                        "spectrum normalization", "state norm"};

std::vector<Cut> random_cuts(const LatticeGraph& grid, std::size_t count) {
    std::vector<Cut> cuts;
    for (std::size_t i = 0; i < count; ++i) {
        cuts.push_back(random_balanced_cut(grid, substream_seed(0xc075ULL + grid.size(), i)));
    }
    return cuts;
}

std::vector<Vertex> parse_ids(const std::string& text) {
    std::vector<Vertex> ids;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            std::size_t used = 0;
            ids.push_back(std::stoull(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw CLI::ValidationError("--cut", fmt::format("'{}' is not a comma-separated list of qubit ids", text));
        }
    }
    return ids;
}

template <class Fn>
CheckResult timed_check(std::string name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult result{std::move(name), false, {}, 0.0};
    try {
        std::tie(result.passed, result.detail) = fn();
    } catch (const std::exception& e) {
        result.passed = false;
        result.detail = e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace

std::vector<CheckResult> verify_all(const VerifyAllOptions& options) {
    std::vector<CheckResult> results;

    results.push_back(timed_check("table 1 reproduction", [] {
        const std::uint64_t qubits[] = {50, 72};
        const auto horizons = standard_horizons();
        const auto table = depth_table(kPaperParams, qubits, horizons, false);
        const std::uint64_t expected[4][2] = {{75, 60}, {84, 67}, {93, 75}, {102, 82}};
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 2; ++c) {
                if (table.rows[r].depths[c] != expected[r][c]) {
                    return std::pair{false, fmt::format("{} at {} qubits: got {}, expected {}", table.rows[r].label,
                                                        qubits[c], table.rows[r].depths[c], expected[r][c])};
                }
            }
        }
        return std::pair{true, std::string("8 of 8 depths match")};
    }));

    results.push_back(timed_check("general-graph vs deformed-grid bounds", [] {
        std::size_t cases = 0;
        for (std::uint64_t side = 1; side * side <= 400; ++side) {
            const std::uint64_t n = side * side;
            for (std::uint64_t k = 0; k < side; ++k) {
                if (n % (side - k) != 0) {
                    continue;
                }
                const auto graph = build_deformed_grid(n, k);
                if (deformed_edge_count(n, k) != Rational(graph.edge_count())) {
                    return std::pair{false, fmt::format("edge count formula disagrees at n={} k={}", n, k)};
                }
                if (n >= 2 && side - k >= 1 && graph.edge_count() > 0 &&
                    deformed_exact(n, k) != prop1_exact(n, graph.edge_count(), side - k)) {
                    return std::pair{false, fmt::format("bounds disagree at n={} k={}", n, k)};
                }
                ++cases;
            }
        }
        return std::pair{true, fmt::format("{} (n, k) cases exact", cases)};
    }));

    // The suite runs min cuts and random cuts separately so that each check's
    // outcome can be reported per cut family.
    struct Family {
        const char* label;
        bool random;
    };
    for (const Family family : {Family{"min cuts", false}, Family{"random cuts", true}}) {
        std::map<std::string, std::size_t> violations;
        std::vector<std::string> first;
        std::size_t grids = 0;
        std::size_t checks = 0;
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            std::vector<std::uint64_t> seeds(options.seeds);
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                seeds[i] = i + 1;
            }
            for (std::size_t rows = 1; rows * rows <= options.max_qubits; ++rows) {
                for (std::size_t cols = rows; rows * cols <= options.max_qubits; ++cols) {
                    if (rows * cols < 4) {
                        continue;
                    }
                    const auto grid = build_grid(rows, cols);
                    const auto cuts = family.random ? random_cuts(grid, options.random_cuts) : all_min_balanced_cuts(grid);
                    if (cuts.empty()) {
                        continue;
                    }
                    VerifyOptions verify;
                    verify.keep_records = false;
                    verify.max_qubits = std::max<std::size_t>(options.max_qubits, grid.size());
                    const auto report = verify_caps(grid, options.depth, seeds, cuts, verify);
                    checks += report.checks;
                    ++grids;
                    for (const auto& v : report.first_violations) {
                        if (violations[v.check] == 0) {
                            first.push_back(fmt::format("{}: {}x{} grid, seed {}, layer {}, cut {}, observed {} > {}",
                                                        v.check, rows, cols, v.seed, v.layer, v.cut_id,
                                                        screen(v.observed), screen(v.bound)));
                        }
                    }
                    for (const auto& [name, count] : report.violation_counts) {
                        violations[name] += count;
                    }
                }
            }
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const char* check : kSuiteChecks) {
            CheckResult r{fmt::format("{} ({})", check, family.label), false, {}, seconds};
            if (!error.empty()) {
                r.detail = error;
            } else if (violations[check] == 0) {
                r.passed = true;
                r.detail = fmt::format("{} grids, {} checks in total", grids, checks);
            } else {
                r.detail = fmt::format("{} violations; first ", violations[check]);
                for (const auto& f : first) {
                    if (f.starts_with(check)) {
                        r.detail += f;
                    }
                }
            }
            results.push_back(std::move(r));
        }
    }
    return results;
}

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement-scaling bounds, runtime model and statevector checks", "entscale"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    bool json = false;
    app.add_flag("--json", json, "Machine-readable output");

    int status = 0;
    std::function<void()> action;

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "Bond-dimension and gate-count lower bounds");
    std::vector<std::size_t> grid_dims;
    std::vector<std::uint64_t> deformed_args;
    std::string graph_path;
    std::string cut_mode_name;
    auto* grid_opt = bounds_cmd->add_option("--grid", grid_dims, "Grid rows and columns")->expected(2);
    auto* deformed_opt = bounds_cmd->add_option("--deformed", deformed_args, "Deformed grid N K")->expected(2);
    auto* graph_opt = bounds_cmd->add_option("--graph", graph_path, "Graph file");
    grid_opt->excludes(deformed_opt)->excludes(graph_opt);
    deformed_opt->excludes(graph_opt);
    bounds_cmd->add_option("--cut", cut_mode_name, "Min-cut mode")->check(CLI::IsMember({"exact", "heuristic"}));
    bounds_cmd->callback([&] {
        if (grid_opt->count() + deformed_opt->count() + graph_opt->count() == 0) {
            throw CLI::RequiredError("one of --grid, --deformed, --graph");
        }
        action = [&] {
            if (deformed_opt->count() > 0) {
                print_report(out, deformed_bounds(deformed_args[0], deformed_args[1]), json);
                return;
            }
            const LatticeGraph graph =
                grid_opt->count() > 0 ? build_grid(grid_dims[0], grid_dims[1]) : load_graph(graph_path);
            CutMode mode = graph.size() <= kExactCutLimit ? CutMode::Exact : CutMode::Heuristic;
            if (!cut_mode_name.empty()) {
                mode = cut_mode_name == "exact" ? CutMode::Exact : CutMode::Heuristic;
            }
            const Cut cut = min_balanced_cut(graph, mode);
            print_report(out, prop1_bounds(graph.size(), graph.edge_count(), cut.crossing), json);
        };
    });

    // interval
    auto* interval_cmd = app.add_subcommand("interval", "Gate-depth interval [sqrt(4n), 8 sqrt(n)]");
    std::uint64_t interval_qubits = 0;
    interval_cmd->add_option("--qubits", interval_qubits, "Qubit count")->required()->check(CLI::PositiveNumber);
    interval_cmd->callback([&] {
        action = [&] {
            const auto window = depth_interval(interval_qubits);
            if (json) {
                out << nlohmann::json{{"qubits", interval_qubits}, {"lower", window.lower}, {"upper", window.upper}}
                           .dump(2)
                    << '\n';
            } else {
                out << screen(window.lower) << ' ' << screen(window.upper) << '\n';
            }
        };
    });

    // runtime-eval
    auto* eval_cmd = app.add_subcommand("runtime-eval", "Estimated classical simulation time");
    RuntimeParams eval_params;
    std::uint64_t eval_qubits = 0;
    double eval_depth = 0.0;
    eval_cmd->add_option("--qubits", eval_qubits, "Qubit count")->required();
    eval_cmd->add_option("--depth", eval_depth, "Gate depth")->required();
    add_param_flags(eval_cmd, eval_params);
    eval_cmd->callback([&] {
        action = [&] {
            const Runtime t = eval_runtime(eval_params, eval_qubits, eval_depth);
            const auto seconds = t.seconds();
            if (json) {
                nlohmann::json j{{"qubits", eval_qubits}, {"depth", eval_depth}, {"log10_seconds", t.log10_seconds()}};
                j["seconds"] = seconds ? nlohmann::json(*seconds) : nlohmann::json(nullptr);
                out << j.dump(2) << '\n';
                return;
            }
            print_rows(out, {
                                {"seconds", seconds ? screen(*seconds) : "beyond double range"},
                                {"log10_seconds", screen(t.log10_seconds())},
                            });
        };
    });

    // runtime-invert
    auto* invert_cmd = app.add_subcommand("runtime-invert", "Depth reachable in a given time");
    RuntimeParams invert_params;
    std::uint64_t invert_qubits = 0;
    double invert_seconds = 0.0;
    invert_cmd->add_option("--qubits", invert_qubits, "Qubit count")->required();
    invert_cmd->add_option("--seconds", invert_seconds, "Time budget in seconds")->required();
    add_param_flags(invert_cmd, invert_params);
    invert_cmd->callback([&] {
        action = [&] {
            const double depth = invert_depth(invert_params, invert_qubits, invert_seconds);
            const auto achievable = round_up_depth(depth);
            if (json) {
                out << nlohmann::json{{"qubits", invert_qubits},
                                      {"seconds", invert_seconds},
                                      {"depth", depth},
                                      {"achievable_depth", achievable}}
                           .dump(2)
                    << '\n';
                return;
            }
            print_rows(out, {{"depth", screen(depth)}, {"achievable_depth", std::to_string(achievable)}});
        };
    });

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit a1, a2 to benchmark timings");
    std::string fit_path;
    double fit_flops = kPaperParams.flops;
    fit_cmd->add_option("--data", fit_path, "Benchmark CSV")->required();
    fit_cmd->add_option("--flops", fit_flops, "Classical operations per second")->capture_default_str();
    fit_cmd->callback([&] {
        action = [&] {
            const auto points = ingest_benchmarks(fit_path);
            const auto fit = fit_params(points, fit_flops);
            if (json) {
                out << nlohmann::json{{"a1", fit.params.a1},
                                      {"a2", fit.params.a2},
                                      {"flops", fit.params.flops},
                                      {"residual_norm", fit.residual_norm},
                                      {"points", points.size()}}
                           .dump(2)
                    << '\n';
                return;
            }
            print_rows(out, {
                                {"a1", screen(fit.params.a1)},
                                {"a2", screen(fit.params.a2)},
                                {"flops", screen(fit.params.flops)},
                                {"residual_norm", screen(fit.residual_norm)},
                                {"points", std::to_string(points.size())},
                            });
        };
    });

    // tables
    auto* tables_cmd = app.add_subcommand("tables", "Achievable depth per runtime horizon");
    RuntimeParams table_params;
    bool modified = false;
    std::vector<std::uint64_t> table_qubits{50, 72};
    tables_cmd->add_flag("--modified", modified, "Halve depths for the revised benchmark");
    tables_cmd->add_option("--qubits", table_qubits, "Qubit counts")->delimiter(',')->capture_default_str();
    add_param_flags(tables_cmd, table_params);
    tables_cmd->callback([&] {
        action = [&] {
            const auto horizons = standard_horizons();
            const auto table = depth_table(table_params, table_qubits, horizons, modified);
            if (json) {
                out << to_json(table).dump(2) << '\n';
            } else {
                out << render_text(table);
            }
        };
    });

    // heatmap
    auto* heatmap_cmd = app.add_subcommand("heatmap", "Runtime heat map, interval curve and contours as CSV");
    RuntimeParams heat_params;
    std::string heat_qubits;
    std::string heat_depths;
    std::uint64_t heat_step = 1;
    std::string heat_out;
    heatmap_cmd->add_option("--qubits", heat_qubits, "MIN:MAX")->required();
    heatmap_cmd->add_option("--depth", heat_depths, "MIN:MAX")->required();
    heatmap_cmd->add_option("--step", heat_step, "Lattice step")->capture_default_str()->check(CLI::PositiveNumber);
    heatmap_cmd->add_option("--out", heat_out, "Output directory")->required();
    add_param_flags(heatmap_cmd, heat_params);
    heatmap_cmd->callback([&] {
        const IntRange qubits = parse_range(heat_qubits, "--qubits");
        const IntRange depths = parse_range(heat_depths, "--depth");
        action = [&, qubits, depths] {
            const auto horizons = standard_horizons();
            const auto map = heatmap(heat_params, qubits, depths, heat_step, horizons);
            write_heatmap(heat_out, map);
            if (json) {
                out << nlohmann::json{{"directory", heat_out},
                                      {"cells", map.cells.size()},
                                      {"interval_points", map.interval.size()},
                                      {"contour_points", map.contours.size()}}
                           .dump(2)
                    << '\n';
            } else {
                out << fmt::format("wrote {} cells, {} interval points, {} contour points to {}\n", map.cells.size(),
                                   map.interval.size(), map.contours.size(), heat_out);
            }
        };
    });

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Random circuit with per-layer Schmidt analysis");
    std::size_t sim_rows = 0;
    std::size_t sim_cols = 0;
    std::size_t sim_depth = 0;
    std::uint64_t sim_seed = 0;
    std::string sim_report;
    std::vector<std::string> sim_cuts;
    sim_cmd->add_option("--rows", sim_rows, "Grid rows")->required()->check(CLI::PositiveNumber);
    sim_cmd->add_option("--cols", sim_cols, "Grid columns")->required()->check(CLI::PositiveNumber);
    sim_cmd->add_option("--depth", sim_depth, "Circuit depth")->required();
    sim_cmd->add_option("--seed", sim_seed, "Random seed")->required();
    sim_cmd->add_option("--report", sim_report, "Write the per-layer report (CSV, or JSON for *.json)");
    sim_cmd->add_option("--cut", sim_cuts, "Side-A qubit ids, comma separated (repeatable); default: min-cut");
    sim_cmd->callback([&] {
        std::vector<std::vector<Vertex>> sides;
        for (const auto& text : sim_cuts) {
            sides.push_back(parse_ids(text));
        }
        action = [&, sides] {
            const auto grid = build_grid(sim_rows, sim_cols);
            std::vector<Cut> cuts;
            for (const auto& side : sides) {
                cuts.push_back(make_cut(grid, side));
            }
            if (cuts.empty()) {
                cuts.push_back(min_balanced_cut(grid, CutMode::Exact));
            }
            VerifyOptions verify;
            verify.threads = 1;
            const std::uint64_t seeds[] = {sim_seed};
            const auto report = verify_caps(grid, sim_depth, seeds, cuts, verify);
            if (!sim_report.empty()) {
                std::ofstream file(sim_report);
                if (!file) {
                    throw IoError(fmt::format("cannot write report '{}'", sim_report));
                }
                if (sim_report.ends_with(".json")) {
                    file << to_json(report).dump(2) << '\n';
                } else {
                    write_records_csv(file, report.records);
                }
            }
            if (json) {
                out << to_json(report).dump(2) << '\n';
            } else {
                out << fmt::format("{:>5}  {:>6}  {:>12}  {:>6}  {:>11}  {:>3}\n", "layer", "cut_id", "entropy_ebits",
                                   "rank", "crossing_cz", "cap");
                for (const auto& r : report.records) {
                    out << fmt::format("{:>5}  {:>6}  {:>12}  {:>6}  {:>11}  {:>3}\n", r.layer, r.cut_id,
                                       screen(r.entropy_ebits), r.rank, r.crossing_cz, r.cap);
                }
                out << (report.passed() ? "verdict: pass\n" : "verdict: FAIL\n");
            }
            if (const auto* c_ptr = report.counterexample()) {
                const auto& c = *c_ptr;
                err << fmt::format("counterexample: seed {} layer {} cut {}: {} observed {} exceeds {}\n", c.seed,
                                   c.layer, c.cut_id, c.check, c.observed, c.bound);
                status = kExitDomain;
            }
        };
    });

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Run the end-to-end checks");
    VerifyAllOptions verify_options;
    verify_cmd->add_option("--max-qubits", verify_options.max_qubits, "Largest grid simulated")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seeds", verify_options.seeds, "Seeds per grid")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--depth", verify_options.depth, "Circuit depth")->capture_default_str();
    verify_cmd->callback([&] {
        action = [&] {
            const auto results = verify_all(verify_options);
            bool all = true;
            nlohmann::json j = nlohmann::json::array();
            for (const auto& r : results) {
                all = all && r.passed;
                if (json) {
                    j.push_back({{"check", r.name}, {"pass", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
                } else {
                    out << fmt::format("{}  {:<50} {:>9.3f} s  {}\n", r.passed ? "PASS" : "FAIL", r.name, r.seconds,
                                       r.detail);
                }
            }
            if (json) {
                out << nlohmann::json{{"checks", j}, {"pass", all}}.dump(2) << '\n';
            }
            if (!all) {
                status = kExitDomain;
            }
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        err << "run 'entscale --help' for the command grammar\n";
        return kExitUsage;
    }

    try {
        if (action) {
            action();
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return status;
}

} // namespace entscale
