// End-to-end acceptance run: one PASS/FAIL line per criterion.
//
// A FAIL is "known" when the analysis in the README shows the criterion cannot
// hold as worded; the line still says FAIL and names the reason. The exit code
// counts only unexpected failures.

#include "entscale/bounds.hpp"
#include "entscale/error.hpp"
#include "entscale/lattice.hpp"
#include "entscale/rng.hpp"
#include "entscale/runtime_model.hpp"
#include "entscale/simulator.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>

using namespace entscale;

namespace {

// Tolerances and budgets, pinned here.
constexpr double kTable1Seconds = 1.0;
constexpr double kTable2Seconds = 1.0;
constexpr int kTable2Slack = 1;
constexpr double kConsistencySeconds = 10.0;
constexpr std::uint64_t kConsistencyMaxN = 400;
constexpr double kSeriesSeconds = 5.0;
constexpr std::uint64_t kSeriesMaxN = 144;
constexpr std::size_t kSeriesOrder = 64;
constexpr double kSimulatorSeconds = 300.0;
constexpr std::size_t kSimulatorMaxQubits = 16;
constexpr std::size_t kSimulatorDepth = 12;
constexpr std::size_t kSimulatorSeeds = 100;
constexpr std::size_t kRandomCuts = 10;
constexpr std::uint64_t kRandomCutStream = 0xc075ULL;
constexpr unsigned kLaptopThreads = 4;
constexpr double kFitSeconds = 5.0;
constexpr double kFitNoiselessAbs = 1e-9;
constexpr double kFitNoiseSigma = 0.05;
constexpr std::size_t kFitNoiseSeeds = 100;
constexpr double kFitNoisyRel = 0.01;
constexpr double kInversionSeconds = 1.0;
constexpr std::size_t kInversionCases = 200;
constexpr double kInversionAbs = 1e-6;
constexpr double kHeatmapSeconds = 10.0;
constexpr double kIntervalAbs = 1e-12;

struct Verdict {
    bool passed = false;
    bool known = false; // failed for a documented, unavoidable reason
    std::string detail;
};

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Verdict within_time(Verdict v, double seconds, double budget) {
    if (v.passed && seconds >= budget) {
        v.passed = false;
        v.detail += fmt::format("; took {:.2f} s, budget {} s", seconds, budget);
    }
    return v;
}

Verdict table_one() {
    const std::uint64_t qubits[] = {50, 72};
    const auto horizons = standard_horizons();
    const auto table = depth_table(kPaperParams, qubits, horizons, false);
    const std::uint64_t expected[4][2] = {{75, 60}, {84, 67}, {93, 75}, {102, 82}};
    std::string cells;
    bool ok = true;
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            ok = ok && table.rows[r].depths[c] == expected[r][c];
        }
        cells += fmt::format("({}, {}) ", table.rows[r].depths[0], table.rows[r].depths[1]);
    }
    return {ok, false, "depths " + cells};
}

Verdict table_two() {
    const std::uint64_t qubits[] = {50, 72};
    const auto horizons = standard_horizons();
    const auto table = depth_table(kPaperParams, qubits, horizons, true);
    const int paper[4][2] = {{38, 30}, {42, 33}, {46, 38}, {51, 41}};
    std::string cells;
    bool ok = true;
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            ok = ok && std::abs(static_cast<int>(table.rows[r].depths[c]) - paper[r][c]) <= kTable2Slack;
        }
        cells += fmt::format("({}, {}) ", table.rows[r].depths[0], table.rows[r].depths[1]);
    }
    return {ok, false, "depths " + cells};
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> deformations(std::uint64_t max_n) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t side = 2; side * side <= max_n; ++side) {
        for (std::uint64_t k = 0; k < side; ++k) {
            if ((side * side) % (side - k) == 0) {
                out.emplace_back(side * side, k);
            }
        }
    }
    return out;
}

Verdict consistency() {
    std::size_t cases = 0;
    for (const auto& [n, k] : deformations(kConsistencyMaxN)) {
        // Brute force: build the lattice and count its edges.
        const auto graph = build_deformed_grid(n, k);
        const std::uint64_t f = exact_sqrt(n).value() - k;
        if (deformed_edge_count(n, k) != Rational(graph.edge_count())) {
            return {false, false, fmt::format("edge count differs at n={} k={}", n, k)};
        }
        if (deformed_exact(n, k) != prop1_exact(n, graph.edge_count(), f)) {
            return {false, false, fmt::format("bounds differ at n={} k={}", n, k)};
        }
        ++cases;
    }
    return {true, false, fmt::format("{} (n, k) pairs equal as exact rationals", cases)};
}

Verdict series() {
    std::size_t cases = 0;
    std::size_t steps = 0;
    std::size_t chi_bad = 0;
    std::size_t gate_outside = 0;
    std::size_t gate_nonmonotone = 0;
    std::size_t gate_naive_outside = 0;
    for (const auto& [n, k] : deformations(kSeriesMaxN)) {
        const auto exact = deformed_exact(n, k);
        const auto s = deformed_bounds_series(n, k, kSeriesOrder);
        const Rational x(k, exact_sqrt(n).value());
        const Rational a = Rational(n) * (Rational(exact_sqrt(n).value()) - 1);
        const Rational b = Rational(k * k, 2);
        Rational x_power = x; // x^(order + 1)
        for (std::size_t order = 0; order <= kSeriesOrder; ++order, x_power *= x) {
            ++steps;
            const Rational chi_err = exact.log2_chi_lb - s.log2_chi_terms[order];
            const Rational gate_err = abs(exact.gate_lb - s.gate_terms[order]);
            if (chi_err < 0 || chi_err > log2_chi_tail_bound(n, k, order) ||
                (order > 0 && s.log2_chi_terms[order] < s.log2_chi_terms[order - 1])) {
                ++chi_bad;
            }
            if (gate_err > gate_tail_bound(n, k, order)) {
                ++gate_outside;
            }
            if (order > 0 && gate_err > abs(exact.gate_lb - s.gate_terms[order - 1])) {
                ++gate_nonmonotone;
            }
            // First omitted term over (1 - x): the plain geometric tail.
            const Rational next = abs(a - b * (order + 2)) * x_power;
            if (gate_err > next / (1 - x)) {
                ++gate_naive_outside;
            }
        }
        ++cases;
    }
    const bool chi_ok = chi_bad == 0;
    const bool gate_ok = gate_outside == 0 && gate_nonmonotone == 0;
    Verdict v;
    v.passed = chi_ok && gate_ok;
    v.detail = fmt::format("{} (n, k) pairs x {} orders; log2 chi: {} violations; gates: {} outside the "
                           "arithmetico-geometric tail, {} non-monotone error steps, {} outside the plain geometric "
                           "tail",
                           cases, kSeriesOrder + 1, chi_bad, gate_outside, gate_nonmonotone, gate_naive_outside);
    // The gate series has terms (A - B(s+1)) x^s that change sign once s + 1 > A/B,
    // so its error cannot shrink monotonically. Everything else must hold.
    v.known = !v.passed && chi_ok && gate_outside == 0;
    return v;
}

Verdict simulator() {
    struct Family {
        const char* label;
        bool random;
    };
    std::vector<std::uint64_t> seeds(kSimulatorSeeds);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        seeds[i] = i + 1;
    }
    const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::map<std::string, std::size_t> min_violations;
    std::map<std::string, std::size_t> random_violations;
    std::string first_random;
    std::size_t checks = 0;
    std::size_t grids = 0;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t rows = 1; rows * rows <= kSimulatorMaxQubits; ++rows) {
        for (std::size_t cols = rows; rows * cols <= kSimulatorMaxQubits; ++cols) {
            if (rows * cols < 4) {
                continue;
            }
            const auto grid = build_grid(rows, cols);
            ++grids;
            for (const Family family : {Family{"min", false}, Family{"random", true}}) {
                std::vector<Cut> cuts;
                if (family.random) {
                    for (std::size_t i = 0; i < kRandomCuts; ++i) {
                        cuts.push_back(random_balanced_cut(grid, substream_seed(kRandomCutStream + grid.size(), i)));
                    }
                } else {
                    cuts = all_min_balanced_cuts(grid);
                }
                VerifyOptions options;
                options.keep_records = false;
                options.threads = threads;
                options.max_qubits = kSimulatorMaxQubits;
                const auto report = verify_caps(grid, kSimulatorDepth, seeds, cuts, options);
                checks += report.checks;
                auto& tally = family.random ? random_violations : min_violations;
                for (const auto& [name, count] : report.violation_counts) {
                    tally[name] += count;
                }
                if (family.random && first_random.empty() && report.counterexample()) {
                    const auto& c = *report.counterexample();
                    first_random = fmt::format("{}x{} seed {} layer {} cut {}: {} {:.6g} > {:.6g}", rows, cols, c.seed,
                                               c.layer, c.cut_id, c.check, c.observed, c.bound);
                }
            }
        }
    }
    const double seconds = elapsed_since(start);

    auto describe = [](const std::map<std::string, std::size_t>& tally) {
        std::string s;
        for (const auto& [name, count] : tally) {
            s += fmt::format("{}{}={}", s.empty() ? "" : ", ", name, count);
        }
        return s.empty() ? std::string("none") : s;
    };
    const bool min_clean = min_violations.empty();
    const bool random_only_cap = random_violations.size() == 1 && random_violations.contains("ebit cap");
    const bool random_clean = random_violations.empty();
    const bool fast = seconds < kSimulatorSeconds;

    Verdict v;
    v.passed = min_clean && random_clean && fast;
    v.detail = fmt::format("{} grids, {} seeds, depth {}, {} checks in {:.1f} s on {} thread(s); violations on min "
                           "cuts: {}; on random cuts: {}",
                           grids, kSimulatorSeeds, kSimulatorDepth, checks, seconds, threads, describe(min_violations),
                           describe(random_violations));
    if (!first_random.empty()) {
        v.detail += "; first: " + first_random;
    }
    if (!fast) {
        v.detail += fmt::format("; over the {} s budget", kSimulatorSeconds);
    }
    // The min(ceil(n/2), g) cap assumes one new ebit per entangling layer, which
    // a cut crossing several gates of one layer exceeds. The time budget is for a
    // laptop; machines with fewer hardware threads are reported, not excused
    // when the checks themselves fail.
    const bool cap_is_the_only_issue = min_clean && (random_clean || random_only_cap);
    const bool slow_only_for_hardware = fast || threads < kLaptopThreads;
    v.known = !v.passed && cap_is_the_only_issue && slow_only_for_hardware;
    return v;
}

double synthetic_seconds(const RuntimeParams& p, std::uint64_t n, std::uint64_t g) {
    const long double r = std::sqrt(static_cast<long double>(n));
    const long double m = 2 * (r - 1) * r * static_cast<long double>(g);
    return static_cast<double>(std::pow(m, static_cast<long double>(p.a1)) *
                               std::exp2(static_cast<long double>(p.a2) * g * r) / static_cast<long double>(p.flops));
}

Verdict fit_recovery() {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> design;
    for (std::uint64_t n = 20; n <= 100; n += 4) {
        for (std::uint64_t g = 5; g <= 60; g += 5) {
            design.emplace_back(n, g);
        }
    }
    const RuntimeParams truth = kPaperParams;
    std::vector<BenchmarkPoint> clean;
    for (const auto& [n, g] : design) {
        clean.push_back({"synthetic", n, g, synthetic_seconds(truth, n, g), ""});
    }
    const auto exact_fit = fit_params(clean, truth.flops);
    const double abs_err =
        std::max(std::abs(exact_fit.params.a1 - truth.a1), std::abs(exact_fit.params.a2 - truth.a2));

    double worst_rel = 0.0;
    for (std::uint64_t seed = 0; seed < kFitNoiseSeeds; ++seed) {
        SplitMix64 rng(substream_seed(0xf17ULL, seed));
        std::vector<BenchmarkPoint> noisy = clean;
        for (auto& p : noisy) {
            p.seconds *= std::exp(kFitNoiseSigma * rng.normal());
        }
        const auto fit = fit_params(noisy, truth.flops);
        worst_rel = std::max({worst_rel, std::abs(fit.params.a1 / truth.a1 - 1.0),
                              std::abs(fit.params.a2 / truth.a2 - 1.0)});
    }
    const bool ok = abs_err <= kFitNoiselessAbs && worst_rel < kFitNoisyRel;
    return {ok, false,
            fmt::format("{} points; noiseless max |error| {:.3g} (tol {}); 5% lognormal noise over {} seeds: max "
                        "relative error {:.3g} (tol {})",
                        design.size(), abs_err, kFitNoiselessAbs, kFitNoiseSeeds, worst_rel, kFitNoisyRel)};
}

Verdict inversion() {
    SplitMix64 rng(0x1a7e);
    const RuntimeParams param_sets[] = {
        kPaperParams, {0.5, 0.0, 1e17}, {8.0, 0.3, 1e3}, {0.0, 0.01, 1e30}, {4.0, 0.05, 1.0},
    };
    double worst = 0.0;
    std::size_t near_overflow = 0;
    std::size_t beyond_double = 0;
    for (std::size_t i = 0; i < kInversionCases; ++i) {
        const RuntimeParams& p = param_sets[i % std::size(param_sets)];
        const std::uint64_t n = 2 + rng.below(i % 4 == 0 ? 1000000 : 2000);
        double g = 1.0 + 500.0 * rng.uniform();
        if (i % 5 == 4) {
            // Aim for ln t close to the largest double, from either side.
            const double target = std::log(std::numeric_limits<double>::max()) + (rng.uniform() - 0.5) * 4.0;
            g = invert_depth_log(p, n, target);
        }
        const auto t = eval_runtime(p, n, g);
        double back = 0.0;
        if (const auto s = t.seconds()) {
            back = invert_depth(p, n, *s);
        } else {
            back = invert_depth_log(p, n, t.ln_seconds);
            ++beyond_double;
        }
        if (std::abs(t.ln_seconds - std::log(std::numeric_limits<double>::max())) < 2.0) {
            ++near_overflow;
        }
        worst = std::max(worst, std::abs(back - g));
    }
    return {worst < kInversionAbs && near_overflow > 0, false,
            fmt::format("{} cases ({} within e^2 of double overflow, {} beyond it): max |g' - g| = {:.3g} (tol {})",
                        kInversionCases, near_overflow, beyond_double, worst, kInversionAbs)};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict heatmap_property() {
    const auto horizons = standard_horizons();
    const IntRange qubits{10, 100};
    const IntRange depths{1, 200};
    const auto first = heatmap(kPaperParams, qubits, depths, 1, horizons);
    const auto second = heatmap(kPaperParams, qubits, depths, 1, horizons);

    const auto base = std::filesystem::temp_directory_path() / "entscale_acceptance_heatmap";
    std::filesystem::remove_all(base);
    write_heatmap(base / "a", first);
    write_heatmap(base / "b", second);
    bool same_bytes = true;
    for (const char* name : {"heatmap.csv", "interval.csv", "contours.csv"}) {
        same_bytes = same_bytes && slurp(base / "a" / name) == slurp(base / "b" / name);
    }
    const bool round_trip = read_heatmap(base / "a") == first;
    std::filesystem::remove_all(base);

    std::size_t contour_mismatch = 0;
    for (const auto& c : first.contours) {
        const auto h = std::find_if(horizons.begin(), horizons.end(), [&](const Horizon& x) { return x.label == c.label; });
        if (round_up_depth(c.depth) != achievable_depth(kPaperParams, c.n, h->seconds)) {
            ++contour_mismatch;
        }
    }
    double interval_err = 0.0;
    for (const auto& p : first.interval) {
        const long double n = p.n;
        interval_err = std::max({interval_err, static_cast<double>(std::abs(p.lower - std::sqrt(4 * n))),
                                 static_cast<double>(std::abs(p.upper - 8 * std::sqrt(n)))});
    }
    const bool ok = first == second && same_bytes && round_trip && contour_mismatch == 0 && !first.contours.empty() &&
                    interval_err <= kIntervalAbs;
    return {ok, false,
            fmt::format("{} cells, {} contour points ({} off by an integer), interval max error {:.3g}; repeat run "
                        "identical: {}, files byte-identical: {}, CSV round trip exact: {}",
                        first.cells.size(), first.contours.size(), contour_mismatch, interval_err, first == second,
                        same_bytes, round_trip)};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget;
        std::function<Verdict()> run;
    };
    const Criterion criteria[] = {
        {1, "table 1 reproduction", kTable1Seconds, table_one},
        {2, "halved table within one", kTable2Seconds, table_two},
        {3, "general-graph vs deformed-grid bounds", kConsistencySeconds, consistency},
        {4, "series convergence", kSeriesSeconds, series},
        {5, "simulator ebit-cap suite", kSimulatorSeconds, simulator},
        {6, "fit recovery", kFitSeconds, fit_recovery},
        {7, "inversion round trip", kInversionSeconds, inversion},
        {8, "heatmap determinism and contours", kHeatmapSeconds, heatmap_property},
    };
    int unexpected = 0;
    int known = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, false, std::string("exception: ") + e.what()};
        }
        const double seconds = elapsed_since(start);
        // Criterion 5 accounts for its own budget.
        if (c.id != 5) {
            v = within_time(v, seconds, c.budget);
        }
        const char* status = v.passed ? "PASS" : (v.known ? "FAIL (known)" : "FAIL");
        std::cout << fmt::format("criterion {}: {} | {} | {:.2f} s | {}\n", c.id, status, c.name, seconds, v.detail)
                  << std::flush;
        if (!v.passed) {
            (v.known ? known : unexpected) += 1;
        }
    }
    std::cout << fmt::format("summary: {} pass, {} known failures, {} unexpected failures\n",
                             static_cast<int>(std::size(criteria)) - known - unexpected, known, unexpected);
    return unexpected == 0 ? 0 : 1;
}
