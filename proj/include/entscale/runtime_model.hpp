#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace entscale {

/// Parameters of t(n, g) = M(n, g)^a1 * 2^(a2 g sqrt(n)) / flops, t in seconds.
struct RuntimeParams {
    double a1 = 4.36063901;
    double a2 = 0.04315488;
    double flops = 1e17;
};

/// Fit to single-amplitude simulation timings at 1e17 flop/s.
inline constexpr RuntimeParams kPaperParams{};

inline constexpr double kYearSeconds = 365.2425 * 24.0 * 3600.0;
inline constexpr double kMonthSeconds = kYearSeconds / 12.0;

struct Horizon {
    std::string label;
    double seconds = 0.0;
};

/// 1 month, 1 year, 10 years, 100 years.
std::vector<Horizon> standard_horizons();

/// Gate count estimate M(n, g) = 2 (sqrt(n) - 1) sqrt(n) g with real sqrt(n).
double gate_total(std::uint64_t n, double g);

/// A runtime held as ln(seconds); values past the double range stay in log form.
struct Runtime {
    double ln_seconds = 0.0;

    bool representable() const noexcept;
    /// Seconds when representable as a finite double.
    std::optional<double> seconds() const noexcept;
    double log10_seconds() const noexcept;
};

Runtime eval_runtime(const RuntimeParams& params, std::uint64_t n, double g);

/// Real depth g in [1, 2^20] with eval_runtime(params, n, g) = seconds, by bisection
/// on the increasing log-runtime. Throws BelowRangeError below the g = 1 runtime.
double invert_depth(const RuntimeParams& params, std::uint64_t n, double seconds);
double invert_depth_log(const RuntimeParams& params, std::uint64_t n, double ln_seconds);

/// Ceiling that first snaps values within 1e-9 (relative) of an integer onto it.
std::uint64_t round_up_depth(double depth);

/// Deepest circuit simulable in the given time, rounded up.
std::uint64_t achievable_depth(const RuntimeParams& params, std::uint64_t n, double seconds);

struct BenchmarkPoint {
    std::string source;
    std::uint64_t n = 0;
    std::uint64_t g = 0;
    double seconds = 0.0;
    std::string amplitudes;
};

struct FitResult {
    RuntimeParams params;
    /// Euclidean norm of the log-space residual.
    double residual_norm = 0.0;
};

/// Least squares in log space, where the model is linear in (a1, a2):
///   ln t + ln flops = a1 ln M(n, g) + a2 g sqrt(n) ln 2.
FitResult fit_params(std::span<const BenchmarkPoint> points, double flops = kPaperParams.flops);

struct DepthRow {
    std::string label;
    double seconds = 0.0;
    std::vector<std::uint64_t> depths; // one per qubit count
};

struct DepthTable {
    std::vector<std::uint64_t> qubits;
    bool halved = false;
    std::vector<DepthRow> rows;
};

/// Achievable depth per (horizon, qubit count). With `halve` the continuous depth
/// is halved before rounding up.
DepthTable depth_table(const RuntimeParams& params, std::span<const std::uint64_t> qubits,
                       std::span<const Horizon> horizons, bool halve);

std::string render_text(const DepthTable& table);
nlohmann::json to_json(const DepthTable& table);

struct IntRange {
    std::uint64_t min = 0;
    std::uint64_t max = 0;
};

struct HeatCell {
    std::uint64_t n = 0;
    std::uint64_t g = 0;
    double log10_seconds = 0.0;

    friend bool operator==(const HeatCell&, const HeatCell&) = default;
};

struct IntervalPoint {
    std::uint64_t n = 0;
    double lower = 0.0;
    double upper = 0.0;

    friend bool operator==(const IntervalPoint&, const IntervalPoint&) = default;
};

struct ContourPoint {
    std::string label;
    std::uint64_t n = 0;
    double depth = 0.0; // continuous iso-runtime depth

    friend bool operator==(const ContourPoint&, const ContourPoint&) = default;
};

struct Heatmap {
    std::vector<HeatCell> cells; // row-major in n, then g
    std::vector<IntervalPoint> interval;
    std::vector<ContourPoint> contours;

    friend bool operator==(const Heatmap&, const Heatmap&) = default;
};

/// log10 runtime over the (n, g) lattice, the depth-interval curve per n, and the
/// iso-runtime depth of each horizon per n (omitted where the horizon lies outside
/// the invertible range).
Heatmap heatmap(const RuntimeParams& params, IntRange qubits, IntRange depths, std::uint64_t step,
                std::span<const Horizon> horizons);

/// Writes heatmap.csv, interval.csv and contours.csv into `dir`.
void write_heatmap(const std::filesystem::path& dir, const Heatmap& map);
Heatmap read_heatmap(const std::filesystem::path& dir);

/// Benchmark CSV with header `source,qubits,depth,seconds,amplitudes`.
std::vector<BenchmarkPoint> read_benchmarks(std::istream& in);
std::vector<BenchmarkPoint> ingest_benchmarks(const std::filesystem::path& path);
void write_benchmarks(std::ostream& out, std::span<const BenchmarkPoint> points);

} // namespace entscale
