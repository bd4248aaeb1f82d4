#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace entscale {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Gate-depth window [sqrt(4n), 8 sqrt(n)].
struct DepthInterval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Lower bounds for producing a state with the maximum number of ebits across
/// a cut of f edges in a graph of n vertices and e edges.
///
/// chi_lb = 2^log2_chi_lb, gate_lb = e * log2_chi_lb. gate_lb counts two-qubit
/// gates only; local gates enter through depth_interval.upper.
struct BoundReport {
    std::uint64_t n = 0;
    std::uint64_t e = 0;
    std::uint64_t f = 0;
    double log2_chi_lb = 0.0;
    double chi_lb = 1.0;
    double gate_lb = 0.0;
    DepthInterval depth_interval;
};

/// The two bounds of a BoundReport before conversion to floating point.
struct ExactBounds {
    Rational log2_chi_lb;
    Rational gate_lb;

    friend bool operator==(const ExactBounds&, const ExactBounds&) = default;
};

/// log2(chi) >= n / 2f and #gates >= n e / 2f. Throws DegenerateCutError for f = 0.
ExactBounds prop1_exact(std::uint64_t n, std::uint64_t e, std::uint64_t f);
BoundReport prop1_bounds(std::uint64_t n, std::uint64_t e, std::uint64_t f);

/// prop1 on the sqrt(n) x sqrt(n) grid with its min-cut f = sqrt(n):
/// chi >= 2^(sqrt(n)/2), #gates >= n (sqrt(n) - 1).
BoundReport grid_bounds(std::uint64_t n);

/// Edge count of the deformed grid from the closed form
/// 2 sqrt(n)(sqrt(n) - 1) - (k^2 / sqrt(n)) (1 - k/sqrt(n))^-1.
Rational deformed_edge_count(std::uint64_t n, std::uint64_t k);

/// Closed-form deformed-grid bounds
///   log2 chi >= (sqrt(n)/2) (1 - k/sqrt(n))^-1
///   #gates   >= n (sqrt(n) - 1)(1 - k/sqrt(n))^-1 - (k^2/2)(1 - k/sqrt(n))^-2
/// evaluated exactly. Preconditions as build_deformed_grid.
ExactBounds deformed_exact(std::uint64_t n, std::uint64_t k);
BoundReport deformed_bounds(std::uint64_t n, std::uint64_t k);

/// Partial sums of the Taylor expansions of the deformed-grid bounds in
/// x = k / sqrt(n). Entry s holds the sum of terms 0..s.
struct SeriesBound {
    std::size_t order = 0;
    std::vector<Rational> log2_chi_terms;
    std::vector<Rational> gate_terms;
};

SeriesBound deformed_bounds_series(std::uint64_t n, std::uint64_t k, std::size_t order);

/// Bound on |closed form - partial sum(order)| for the log2 chi series:
/// first omitted term / (1 - x).
Rational log2_chi_tail_bound(std::uint64_t n, std::uint64_t k, std::size_t order);

/// Bound on |closed form - partial sum(order)| for the gate series. Its terms
/// [A - B(s+1)] x^s change sign, so the bound sums |A| x^s and B (s+1) x^s
/// over s > order.
Rational gate_tail_bound(std::uint64_t n, std::uint64_t k, std::size_t order);

DepthInterval depth_interval(std::uint64_t n);

/// min(ceil(n/2), g): ebits a g-layer circuit on n qubits can create across any cut.
std::uint64_t ebit_cap(std::uint64_t n, std::uint64_t g) noexcept;

/// 2^(n+1) * 16 bytes.
BigInt memory_bytes(std::uint64_t n);

nlohmann::json to_json(const BoundReport& report);

} // namespace entscale
