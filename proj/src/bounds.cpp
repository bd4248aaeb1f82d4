#include "entscale/bounds.hpp"

#include "entscale/error.hpp"
#include "entscale/lattice.hpp"

#include <cmath>

#include <fmt/format.h>

namespace entscale {

namespace {

Rational power(const Rational& base, std::size_t exponent) {
    Rational result = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        result *= base;
    }
    return result;
}

double to_double(const Rational& value) {
    return static_cast<double>(value);
}

BoundReport make_report(std::uint64_t n, std::uint64_t e, std::uint64_t f, const ExactBounds& exact) {
    BoundReport report;
    report.n = n;
    report.e = e;
    report.f = f;
    report.log2_chi_lb = to_double(exact.log2_chi_lb);
    report.chi_lb = std::exp2(report.log2_chi_lb);
    report.gate_lb = to_double(exact.gate_lb);
    report.depth_interval = depth_interval(n);
    return report;
}

struct DeformedTerms {
    std::uint64_t side;
    Rational ratio; // k / sqrt(n)
    Rational gate_constant; // n (sqrt(n) - 1)
    Rational gate_slope; // k^2 / 2
};

DeformedTerms deformed_terms(std::uint64_t n, std::uint64_t k) {
    const std::uint64_t side = deformed_short_side(n, k) + k;
    return DeformedTerms{side, Rational(k, side), Rational(n * (side - 1)), Rational(k * k, 2)};
}

} // namespace

ExactBounds prop1_exact(std::uint64_t n, std::uint64_t e, std::uint64_t f) {
    if (f == 0) {
        throw DegenerateCutError("cut crosses no edges (f = 0); a disconnected bipartition supports no ebits");
    }
    if (n == 0) {
        throw PreconditionError("qubit count must be positive");
    }
    if (e < f) {
        throw PreconditionError(fmt::format("edge count e={} is smaller than the crossing count f={}", e, f));
    }
    Rational log2_chi(n, 2 * f);
    return ExactBounds{log2_chi, log2_chi * e};
}

BoundReport prop1_bounds(std::uint64_t n, std::uint64_t e, std::uint64_t f) {
    return make_report(n, e, f, prop1_exact(n, e, f));
}

BoundReport grid_bounds(std::uint64_t n) {
    const auto side = exact_sqrt(n);
    if (!side || n < 4) {
        throw PreconditionError(fmt::format("grid bounds need a perfect square n >= 4, got {}", n));
    }
    return prop1_bounds(n, 2 * *side * (*side - 1), *side);
}

Rational deformed_edge_count(std::uint64_t n, std::uint64_t k) {
    const auto t = deformed_terms(n, k);
    const Rational side(t.side);
    return 2 * side * (side - 1) - Rational(k * k, t.side) / (1 - t.ratio);
}

ExactBounds deformed_exact(std::uint64_t n, std::uint64_t k) {
    const auto t = deformed_terms(n, k);
    const Rational shrink = 1 - t.ratio;
    return ExactBounds{
        Rational(t.side, 2) / shrink,
        t.gate_constant / shrink - t.gate_slope / (shrink * shrink),
    };
}

BoundReport deformed_bounds(std::uint64_t n, std::uint64_t k) {
    const ExactBounds exact = deformed_exact(n, k);
    const Rational e = deformed_edge_count(n, k);
    // (sqrt(n) - k) | n makes the closed-form edge count integral.
    const auto edges = static_cast<std::uint64_t>(boost::multiprecision::numerator(e));
    return make_report(n, edges, deformed_short_side(n, k), exact);
}

SeriesBound deformed_bounds_series(std::uint64_t n, std::uint64_t k, std::size_t order) {
    const auto t = deformed_terms(n, k);
    SeriesBound series;
    series.order = order;
    series.log2_chi_terms.reserve(order + 1);
    series.gate_terms.reserve(order + 1);
    Rational x_power = 1;
    Rational chi_sum = 0;
    Rational gate_sum = 0;
    for (std::size_t s = 0; s <= order; ++s) {
        chi_sum += Rational(t.side, 2) * x_power;
        gate_sum += (t.gate_constant - t.gate_slope * (s + 1)) * x_power;
        series.log2_chi_terms.push_back(chi_sum);
        series.gate_terms.push_back(gate_sum);
        x_power *= t.ratio;
    }
    return series;
}

Rational log2_chi_tail_bound(std::uint64_t n, std::uint64_t k, std::size_t order) {
    const auto t = deformed_terms(n, k);
    return Rational(t.side, 2) * power(t.ratio, order + 1) / (1 - t.ratio);
}

Rational gate_tail_bound(std::uint64_t n, std::uint64_t k, std::size_t order) {
    const auto t = deformed_terms(n, k);
    const Rational x = t.ratio;
    const Rational lead = power(x, order + 1);
    const Rational shrink = 1 - x;
    // sum_{s>N} (s+1) x^s = x^(N+1) ((N+2) - (N+1) x) / (1-x)^2
    const Rational weighted = lead * (Rational(order + 2) - Rational(order + 1) * x) / (shrink * shrink);
    return t.gate_constant * lead / shrink + t.gate_slope * weighted;
}

DepthInterval depth_interval(std::uint64_t n) {
    const auto q = static_cast<double>(n);
    return DepthInterval{std::sqrt(4.0 * q), 8.0 * std::sqrt(q)};
}

std::uint64_t ebit_cap(std::uint64_t n, std::uint64_t g) noexcept {
    return std::min(n / 2 + n % 2, g);
}

BigInt memory_bytes(std::uint64_t n) {
    BigInt bytes = 16;
    bytes <<= static_cast<unsigned>(n + 1);
    return bytes;
}

nlohmann::json to_json(const BoundReport& report) {
    return nlohmann::json{
        {"n", report.n},
        {"e", report.e},
        {"f", report.f},
        {"log2_chi_lb", report.log2_chi_lb},
        {"chi_lb", report.chi_lb},
        {"gate_lb", report.gate_lb},
        {"depth_interval", {report.depth_interval.lower, report.depth_interval.upper}},
    };
}

} // namespace entscale
