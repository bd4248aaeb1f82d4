#include "entscale/runtime_model.hpp"

#include "csv.hpp"
#include "entscale/bounds.hpp"
#include "entscale/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace entscale {

namespace {

constexpr double kMinDepth = 1.0;
constexpr double kMaxDepth = 1048576.0; // 2^20
constexpr int kMaxBisections = 200;

void check_params(const RuntimeParams& p) {
    if (!(p.flops > 0.0) || !std::isfinite(p.flops)) {
        throw PreconditionError(fmt::format("flops must be positive and finite, got {}", p.flops));
    }
    if (!(p.a1 >= 0.0) || !(p.a2 >= 0.0) || !std::isfinite(p.a1) || !std::isfinite(p.a2)) {
        throw PreconditionError(fmt::format("runtime exponents must be nonnegative, got a1={} a2={}", p.a1, p.a2));
    }
}

void check_qubits(std::uint64_t n) {
    if (n < 2) {
        throw PreconditionError(fmt::format("runtime model needs at least 2 qubits, got {}", n));
    }
}

double ln_runtime(const RuntimeParams& p, std::uint64_t n, double g) {
    const double root = std::sqrt(static_cast<double>(n));
    return -std::log(p.flops) + p.a1 * std::log(gate_total(n, g)) + p.a2 * g * root * std::numbers::ln2;
}

std::string format_full(double value) {
    return fmt::format("{}", value);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError(fmt::format("cannot write '{}'", path.string()));
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    return in;
}

// Calls row(fields, line_no) for each nonblank line after the header.
template <class Row>
void read_csv(std::istream& in, std::string_view header, std::size_t columns, Row&& row) {
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError(fmt::format("missing header '{}'", header));
    }
    csv::expect_header(line, header);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) {
            continue;
        }
        const auto fields = csv::split(line);
        csv::expect_columns(fields, columns, line_no);
        row(fields, line_no);
    }
}

} // namespace

std::vector<Horizon> standard_horizons() {
    return {
        {"1 month", kMonthSeconds},
        {"1 year", kYearSeconds},
        {"10 years", 10.0 * kYearSeconds},
        {"100 years", 100.0 * kYearSeconds},
    };
}

double gate_total(std::uint64_t n, double g) {
    const double root = std::sqrt(static_cast<double>(n));
    return 2.0 * (root - 1.0) * root * g;
}

bool Runtime::representable() const noexcept {
    return std::isfinite(ln_seconds) && ln_seconds <= std::log(std::numeric_limits<double>::max()) &&
           ln_seconds >= std::log(std::numeric_limits<double>::min());
}

std::optional<double> Runtime::seconds() const noexcept {
    if (!representable()) {
        return std::nullopt;
    }
    return std::exp(ln_seconds);
}

double Runtime::log10_seconds() const noexcept {
    return ln_seconds / std::numbers::ln10;
}

Runtime eval_runtime(const RuntimeParams& params, std::uint64_t n, double g) {
    check_params(params);
    check_qubits(n);
    if (!(g > 0.0)) {
        throw PreconditionError(fmt::format("depth must be positive, got {}", g));
    }
    return Runtime{ln_runtime(params, n, g)};
}

double invert_depth_log(const RuntimeParams& params, std::uint64_t n, double ln_seconds) {
    check_params(params);
    check_qubits(n);
    if (params.a1 == 0.0 && params.a2 == 0.0) {
        throw PreconditionError("runtime is constant in depth when a1 = a2 = 0; nothing to invert");
    }
    double lo = kMinDepth;
    double hi = kMaxDepth;
    const double ln_lo = ln_runtime(params, n, lo);
    if (ln_seconds < ln_lo) {
        throw BelowRangeError(fmt::format("{} qubits need {:.6g} s even at depth 1; {:.6g} s is below range", n,
                                          std::exp(ln_lo), std::exp(ln_seconds)));
    }
    if (ln_seconds > ln_runtime(params, n, hi)) {
        throw AboveRangeError(fmt::format("runtime target exceeds the depth-{} runtime at {} qubits", hi, n));
    }
    for (int i = 0; i < kMaxBisections; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (ln_runtime(params, n, mid) < ln_seconds) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double err_lo = std::abs(ln_runtime(params, n, lo) - ln_seconds);
    const double err_hi = std::abs(ln_runtime(params, n, hi) - ln_seconds);
    return err_lo <= err_hi ? lo : hi;
}

double invert_depth(const RuntimeParams& params, std::uint64_t n, double seconds) {
    if (!(seconds > 0.0)) {
        throw BelowRangeError(fmt::format("runtime must be positive, got {}", seconds));
    }
    return invert_depth_log(params, n, std::log(seconds));
}

std::uint64_t round_up_depth(double depth) {
    const double nearest = std::round(depth);
    if (std::abs(depth - nearest) <= 1e-9 * std::max(1.0, std::abs(depth))) {
        return static_cast<std::uint64_t>(nearest);
    }
    return static_cast<std::uint64_t>(std::ceil(depth));
}

std::uint64_t achievable_depth(const RuntimeParams& params, std::uint64_t n, double seconds) {
    return round_up_depth(invert_depth(params, n, seconds));
}

FitResult fit_params(std::span<const BenchmarkPoint> points, double flops) {
    if (points.size() < 2) {
        throw DegenerateDataError(fmt::format("fitting two parameters needs at least 2 points, got {}", points.size()));
    }
    if (!(flops > 0.0)) {
        throw PreconditionError(fmt::format("flops must be positive, got {}", flops));
    }
    const auto rows = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixX2d design(rows, 2);
    Eigen::VectorXd target(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& p = points[static_cast<std::size_t>(i)];
        if (p.n < 2 || p.g < 1 || !(p.seconds > 0.0)) {
            throw PreconditionError(
                fmt::format("point {} ({}) violates n >= 2, g >= 1, seconds > 0", i, p.source));
        }
        const auto g = static_cast<double>(p.g);
        design(i, 0) = std::log(gate_total(p.n, g));
        design(i, 1) = g * std::sqrt(static_cast<double>(p.n)) * std::numbers::ln2;
        target(i) = std::log(p.seconds) + std::log(flops);
    }
    // Column scaling makes the QR rank threshold independent of feature units.
    const Eigen::Vector2d scale = design.colwise().norm().transpose();
    if (scale.minCoeff() == 0.0) {
        throw DegenerateDataError("a design column is identically zero");
    }
    const Eigen::MatrixX2d scaled = design * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixX2d> qr(scaled);
    qr.setThreshold(1e-10);
    if (qr.rank() < 2) {
        throw DegenerateDataError(
            "design matrix is rank-deficient: ln M(n,g) and g*sqrt(n)*ln2 are collinear over the supplied points");
    }
    const Eigen::Vector2d coeffs = qr.solve(target).cwiseQuotient(scale);
    FitResult result;
    result.params = RuntimeParams{coeffs(0), coeffs(1), flops};
    result.residual_norm = (design * coeffs - target).norm();
    return result;
}

DepthTable depth_table(const RuntimeParams& params, std::span<const std::uint64_t> qubits,
                       std::span<const Horizon> horizons, bool halve) {
    DepthTable table;
    table.qubits.assign(qubits.begin(), qubits.end());
    table.halved = halve;
    for (const auto& horizon : horizons) {
        DepthRow row{horizon.label, horizon.seconds, {}};
        for (std::uint64_t n : qubits) {
            const double depth = invert_depth(params, n, horizon.seconds);
            row.depths.push_back(round_up_depth(halve ? depth / 2.0 : depth));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string render_text(const DepthTable& table) {
    std::size_t label_width = std::string_view("runtime").size();
    for (const auto& row : table.rows) {
        label_width = std::max(label_width, row.label.size());
    }
    std::ostringstream out;
    out << fmt::format("{:<{}}", "runtime", label_width);
    for (std::uint64_t n : table.qubits) {
        out << fmt::format("  {:>12}", fmt::format("{} qubits", n));
    }
    out << '\n';
    for (const auto& row : table.rows) {
        out << fmt::format("{:<{}}", row.label, label_width);
        for (std::uint64_t depth : row.depths) {
            out << fmt::format("  {:>12}", depth);
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::json to_json(const DepthTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        rows.push_back({{"runtime", row.label}, {"seconds", row.seconds}, {"depths", row.depths}});
    }
    return {{"qubits", table.qubits}, {"halved", table.halved}, {"rows", rows}};
}

Heatmap heatmap(const RuntimeParams& params, IntRange qubits, IntRange depths, std::uint64_t step,
                std::span<const Horizon> horizons) {
    if (step == 0) {
        throw PreconditionError("heatmap step must be positive");
    }
    if (qubits.min > qubits.max || depths.min > depths.max) {
        throw PreconditionError("heatmap ranges must be nonempty (min <= max)");
    }
    check_qubits(qubits.min);
    if (depths.min == 0) {
        throw PreconditionError("heatmap depths start at 1");
    }
    check_params(params);
    Heatmap map;
    for (std::uint64_t n = qubits.min; n <= qubits.max; n += step) {
        for (std::uint64_t g = depths.min; g <= depths.max; g += step) {
            map.cells.push_back({n, g, eval_runtime(params, n, static_cast<double>(g)).log10_seconds()});
        }
        const auto window = depth_interval(n);
        map.interval.push_back({n, window.lower, window.upper});
        for (const auto& horizon : horizons) {
            try {
                map.contours.push_back({horizon.label, n, invert_depth(params, n, horizon.seconds)});
            } catch (const BelowRangeError&) {
            } catch (const AboveRangeError&) {
            }
        }
    }
    return map;
}

void write_heatmap(const std::filesystem::path& dir, const Heatmap& map) {
    std::filesystem::create_directories(dir);
    auto cells = open_out(dir / "heatmap.csv");
    cells << "qubits,depth,log10_seconds\n";
    for (const auto& c : map.cells) {
        cells << c.n << ',' << c.g << ',' << format_full(c.log10_seconds) << '\n';
    }
    auto interval = open_out(dir / "interval.csv");
    interval << "qubits,lower,upper\n";
    for (const auto& p : map.interval) {
        interval << p.n << ',' << format_full(p.lower) << ',' << format_full(p.upper) << '\n';
    }
    auto contours = open_out(dir / "contours.csv");
    contours << "label,qubits,depth\n";
    for (const auto& p : map.contours) {
        contours << p.label << ',' << p.n << ',' << format_full(p.depth) << '\n';
    }
}

Heatmap read_heatmap(const std::filesystem::path& dir) {
    Heatmap map;
    auto cells = open_in(dir / "heatmap.csv");
    read_csv(cells, "qubits,depth,log10_seconds", 3, [&](const auto& f, std::size_t line) {
        map.cells.push_back({csv::parse_uint(f[0], line, "qubits"), csv::parse_uint(f[1], line, "depth"),
                             csv::parse_double(f[2], line, "log10_seconds")});
    });
    auto interval = open_in(dir / "interval.csv");
    read_csv(interval, "qubits,lower,upper", 3, [&](const auto& f, std::size_t line) {
        map.interval.push_back({csv::parse_uint(f[0], line, "qubits"), csv::parse_double(f[1], line, "lower"),
                                csv::parse_double(f[2], line, "upper")});
    });
    auto contours = open_in(dir / "contours.csv");
    read_csv(contours, "label,qubits,depth", 3, [&](const auto& f, std::size_t line) {
        map.contours.push_back(
            {std::string(f[0]), csv::parse_uint(f[1], line, "qubits"), csv::parse_double(f[2], line, "depth")});
    });
    return map;
}

std::vector<BenchmarkPoint> read_benchmarks(std::istream& in) {
    std::vector<BenchmarkPoint> points;
    read_csv(in, "source,qubits,depth,seconds,amplitudes", 5, [&](const auto& f, std::size_t line) {
        BenchmarkPoint p;
        p.source = std::string(f[0]);
        p.n = csv::parse_uint(f[1], line, "qubits");
        p.g = csv::parse_uint(f[2], line, "depth");
        p.seconds = csv::parse_double(f[3], line, "seconds");
        p.amplitudes = std::string(f[4]);
        if (p.n < 1) {
            throw SchemaError(fmt::format("line {}: qubits must be at least 1", line));
        }
        if (p.g < 1) {
            throw SchemaError(fmt::format("line {}: depth must be at least 1", line));
        }
        if (!(p.seconds > 0.0) || !std::isfinite(p.seconds)) {
            throw SchemaError(fmt::format("line {}: seconds must be positive, got {}", line, f[3]));
        }
        points.push_back(std::move(p));
    });
    return points;
}

std::vector<BenchmarkPoint> ingest_benchmarks(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return read_benchmarks(in);
    } catch (const SchemaError& e) {
        throw SchemaError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void write_benchmarks(std::ostream& out, std::span<const BenchmarkPoint> points) {
    out << "source,qubits,depth,seconds,amplitudes\n";
    for (const auto& p : points) {
        out << p.source << ',' << p.n << ',' << p.g << ',' << format_full(p.seconds) << ',' << p.amplitudes << '\n';
    }
}

} // namespace entscale
