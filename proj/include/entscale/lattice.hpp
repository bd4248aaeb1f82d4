#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace entscale {

using Vertex = std::size_t;

/// Undirected edge stored with the smaller id first.
using Edge = std::pair<Vertex, Vertex>;

struct Coord {
    std::size_t row = 0;
    std::size_t col = 0;

    friend bool operator==(const Coord&, const Coord&) = default;
};

enum class LatticeKind { SquareGrid, RectangularGrid, DeformedGrid, Custom };

/// Coupling graph of a processor: qubits are vertices, couplers are edges.
///
/// Immutable after construction. Grid kinds carry row-major coordinates,
/// id = row * cols + col.
class LatticeGraph {
public:
    /// Validates ids, self-loops and duplicates. Edges are stored normalized
    /// and sorted.
    LatticeGraph(std::size_t n, std::vector<Edge> edges);

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
    bool has_edge(Vertex u, Vertex v) const;

    LatticeKind kind() const noexcept { return kind_; }
    bool is_grid() const noexcept { return kind_ != LatticeKind::Custom; }
    /// Grid dimensions; zero for custom graphs.
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    /// The k of a deformed grid; zero otherwise.
    std::size_t deformation() const noexcept { return deformation_; }

    std::optional<Coord> coord(Vertex v) const;

private:
    friend LatticeGraph build_grid(std::size_t rows, std::size_t cols);
    friend LatticeGraph build_deformed_grid(std::size_t n, std::size_t k);

    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adjacency_;
    LatticeKind kind_ = LatticeKind::Custom;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t deformation_ = 0;
};

/// Integer square root when n is a perfect square.
std::optional<std::uint64_t> exact_sqrt(std::uint64_t n) noexcept;

/// rows x cols nearest-neighbour grid.
LatticeGraph build_grid(std::size_t rows, std::size_t cols);

/// Validates a deformation (n perfect square, k < sqrt(n), (sqrt(n) - k) | n)
/// and returns the short side sqrt(n) - k.
std::uint64_t deformed_short_side(std::uint64_t n, std::uint64_t k);

/// The (sqrt(n) - k) x n / (sqrt(n) - k) deformation of the sqrt(n) x sqrt(n) grid.
LatticeGraph build_deformed_grid(std::size_t n, std::size_t k);

LatticeGraph build_custom(std::size_t n, std::vector<Edge> edges);

/// Balanced bipartition: |side_a| = ceil(n/2), |side_b| = floor(n/2).
struct Cut {
    std::vector<Vertex> side_a;
    std::vector<Vertex> side_b;
    std::size_t crossing = 0;

    friend bool operator==(const Cut&, const Cut&) = default;
};

enum class CutMode { Exact, Heuristic };

/// Largest graph the exact enumeration accepts.
inline constexpr std::size_t kExactCutLimit = 24;

struct HeuristicOptions {
    std::uint64_t seed = 0x5eedULL;
    std::size_t restarts = 32;
};

/// Number of edges with exactly one endpoint in side_a.
std::size_t crossing_count(const LatticeGraph& graph, std::span<const Vertex> side_a);

/// Builds a balanced cut from side A, filling side B and the crossing count.
Cut make_cut(const LatticeGraph& graph, std::vector<Vertex> side_a);

/// Balanced cut of minimum crossing count.
///
/// Exact enumerates every balanced bipartition (n <= kExactCutLimit). Heuristic
/// runs pair-swap descent from `restarts` random starts and returns an upper
/// bound on the minimum. Ties go to the lexicographically smallest side A; for
/// even n side A is the half containing vertex 0.
Cut min_balanced_cut(const LatticeGraph& graph, CutMode mode, const HeuristicOptions& options = {});

/// Every minimizing balanced cut (exact, n <= kExactCutLimit), one per A/B pair,
/// ordered lexicographically by side A.
std::vector<Cut> all_min_balanced_cuts(const LatticeGraph& graph);

/// Uniformly random balanced cut drawn from the given seed.
Cut random_balanced_cut(const LatticeGraph& graph, std::uint64_t seed);

/// Text graph format: `n=<int>` then one `u,v` pair per line; `#` starts a comment.
LatticeGraph read_graph(std::istream& in);
void write_graph(std::ostream& out, const LatticeGraph& graph);
LatticeGraph load_graph(const std::filesystem::path& path);
void save_graph(const std::filesystem::path& path, const LatticeGraph& graph);

} // namespace entscale
