#include "entscale/lattice.hpp"

#include "entscale/error.hpp"
#include "entscale/rng.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include <fmt/format.h>

namespace entscale {

LatticeGraph::LatticeGraph(std::size_t n, std::vector<Edge> edges) : n_(n), adjacency_(n) {
    if (n == 0) {
        throw PreconditionError("graph must have at least one vertex");
    }
    for (auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw PreconditionError(fmt::format("edge ({},{}) has a vertex id outside 0..{}", u, v, n - 1));
        }
        if (u == v) {
            throw PreconditionError(fmt::format("self-loop on vertex {}", u));
        }
        if (u > v) {
            std::swap(u, v);
        }
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
        throw PreconditionError(fmt::format("duplicate edge ({},{})", dup->first, dup->second));
    }
    edges_ = std::move(edges);
    for (const auto& [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
    }
}

bool LatticeGraph::has_edge(Vertex u, Vertex v) const {
    if (u >= n_ || v >= n_) {
        return false;
    }
    const auto& list = adjacency_[u];
    return std::binary_search(list.begin(), list.end(), v);
}

std::optional<Coord> LatticeGraph::coord(Vertex v) const {
    if (!is_grid() || v >= n_) {
        return std::nullopt;
    }
    return Coord{v / cols_, v % cols_};
}

std::optional<std::uint64_t> exact_sqrt(std::uint64_t n) noexcept {
    // The root of a 64-bit value fits in 32 bits, so squares below stay exact.
    constexpr std::uint64_t kMaxRoot = 0xffffffffULL;
    auto root = std::min(static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n))), kMaxRoot);
    while (root * root > n) {
        --root;
    }
    while (root < kMaxRoot && (root + 1) * (root + 1) <= n) {
        ++root;
    }
    if (root * root != n) {
        return std::nullopt;
    }
    return root;
}

LatticeGraph build_grid(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw PreconditionError(fmt::format("grid dimensions must be positive, got {}x{}", rows, cols));
    }
    std::vector<Edge> edges;
    edges.reserve(rows * (cols - 1) + cols * (rows - 1));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const Vertex v = r * cols + c;
            if (c + 1 < cols) {
                edges.emplace_back(v, v + 1);
            }
            if (r + 1 < rows) {
                edges.emplace_back(v, v + cols);
            }
        }
    }
    LatticeGraph graph(rows * cols, std::move(edges));
    graph.kind_ = rows == cols ? LatticeKind::SquareGrid : LatticeKind::RectangularGrid;
    graph.rows_ = rows;
    graph.cols_ = cols;
    return graph;
}

std::uint64_t deformed_short_side(std::uint64_t n, std::uint64_t k) {
    const auto side = exact_sqrt(n);
    if (!side || n == 0) {
        throw PreconditionError(fmt::format("deformed grid needs a perfect-square qubit count, got {}", n));
    }
    if (k >= *side) {
        throw PreconditionError(fmt::format("deformation k={} must be below sqrt(n)={}", k, *side));
    }
    const std::uint64_t short_side = *side - k;
    if (n % short_side != 0) {
        throw PreconditionError(
            fmt::format("sqrt(n)-k={} does not divide n={}; rows and columns would not be integral", short_side, n));
    }
    return short_side;
}

LatticeGraph build_deformed_grid(std::size_t n, std::size_t k) {
    const std::size_t short_side = deformed_short_side(n, k);
    LatticeGraph graph = build_grid(short_side, n / short_side);
    if (k > 0) {
        graph.kind_ = LatticeKind::DeformedGrid;
        graph.deformation_ = k;
    }
    return graph;
}

LatticeGraph build_custom(std::size_t n, std::vector<Edge> edges) {
    return LatticeGraph(n, std::move(edges));
}

namespace {

void check_ids(const LatticeGraph& graph, std::span<const Vertex> ids) {
    for (Vertex v : ids) {
        if (v >= graph.size()) {
            throw PreconditionError(fmt::format("vertex id {} outside 0..{}", v, graph.size() - 1));
        }
    }
}

// Lexicographic order of the sorted member lists of two equal-size sets.
bool lex_less(std::uint32_t a, std::uint32_t b) {
    const std::uint32_t diff = a ^ b;
    return diff != 0 && (a & (diff & (~diff + 1))) != 0;
}

bool lex_less(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Vertex> mask_members(std::uint32_t mask) {
    std::vector<Vertex> out;
    while (mask != 0) {
        out.push_back(static_cast<Vertex>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return out;
}

// Visits every balanced side A as a bitmask; for even n only masks containing vertex 0.
template <class Visit>
void for_each_balanced_mask(std::size_t n, Visit&& visit) {
    const std::size_t half = (n + 1) / 2;
    const bool pin_zero = n % 2 == 0;
    const std::size_t free_bits = pin_zero ? n - 1 : n;
    const std::size_t choose = pin_zero ? half - 1 : half;
    const std::uint32_t shift = pin_zero ? 1 : 0;
    const std::uint32_t base = pin_zero ? 1u : 0u;
    if (choose == 0) {
        visit(base);
        return;
    }
    const std::uint64_t limit = std::uint64_t{1} << free_bits;
    std::uint64_t m = (std::uint64_t{1} << choose) - 1;
    while (m < limit) {
        visit(static_cast<std::uint32_t>((m << shift) | base));
        // Gosper's hack: next integer with the same popcount.
        const std::uint64_t low = m & (~m + 1);
        const std::uint64_t ripple = m + low;
        m = (((ripple ^ m) >> 2) / low) | ripple;
    }
}

std::vector<std::uint32_t> minimizing_masks(const LatticeGraph& graph, bool all) {
    const std::size_t n = graph.size();
    if (n > kExactCutLimit) {
        throw BudgetExceededError(fmt::format(
            "exact balanced min-cut enumerates bipartitions only up to n={} (got n={}); use the heuristic mode",
            kExactCutLimit, n));
    }
    std::vector<std::uint32_t> neighbor_masks(n, 0);
    for (const auto& [u, v] : graph.edges()) {
        neighbor_masks[u] |= 1u << v;
        neighbor_masks[v] |= 1u << u;
    }
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::vector<std::uint32_t> found;
    for_each_balanced_mask(n, [&](std::uint32_t mask) {
        std::size_t f = 0;
        for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
            const auto v = static_cast<std::size_t>(std::countr_zero(rest));
            f += static_cast<std::size_t>(std::popcount(neighbor_masks[v] & ~mask));
        }
        if (f < best) {
            best = f;
            found.clear();
            found.push_back(mask);
        } else if (f == best) {
            if (all) {
                found.push_back(mask);
            } else if (lex_less(mask, found.front())) {
                found.front() = mask;
            }
        }
    });
    std::sort(found.begin(), found.end(), [](std::uint32_t a, std::uint32_t b) { return lex_less(a, b); });
    return found;
}

// For even n, the half containing vertex 0 is side A.
Cut canonical_cut(const LatticeGraph& graph, std::vector<char> in_a) {
    const std::size_t n = graph.size();
    if (n % 2 == 0 && !in_a[0]) {
        for (auto& flag : in_a) {
            flag = !flag;
        }
    }
    std::vector<Vertex> side_a;
    for (Vertex v = 0; v < n; ++v) {
        if (in_a[v]) {
            side_a.push_back(v);
        }
    }
    return make_cut(graph, std::move(side_a));
}

std::vector<char> shuffled_partition(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    std::vector<char> in_a(n, 0);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        in_a[order[i]] = 1;
    }
    return in_a;
}

// Pair-swap descent: swap the (a, b) pair of largest positive gain until none remains.
void swap_descent(const LatticeGraph& graph, std::vector<char>& in_a) {
    const std::size_t n = graph.size();
    // external - internal degree of every vertex
    std::vector<long> gain_of(n, 0);
    auto recompute = [&](Vertex v) {
        long d = 0;
        for (Vertex w : graph.neighbors(v)) {
            d += in_a[w] != in_a[v] ? 1 : -1;
        }
        gain_of[v] = d;
    };
    for (Vertex v = 0; v < n; ++v) {
        recompute(v);
    }
    while (true) {
        long best_gain = 0;
        Vertex best_a = 0;
        Vertex best_b = 0;
        for (Vertex a = 0; a < n; ++a) {
            if (!in_a[a]) {
                continue;
            }
            for (Vertex b = 0; b < n; ++b) {
                if (in_a[b]) {
                    continue;
                }
                const long gain = gain_of[a] + gain_of[b] - (graph.has_edge(a, b) ? 2 : 0);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (best_gain <= 0) {
            return;
        }
        std::swap(in_a[best_a], in_a[best_b]);
        recompute(best_a);
        recompute(best_b);
        for (Vertex w : graph.neighbors(best_a)) {
            recompute(w);
        }
        for (Vertex w : graph.neighbors(best_b)) {
            recompute(w);
        }
    }
}

} // namespace

std::size_t crossing_count(const LatticeGraph& graph, std::span<const Vertex> side_a) {
    check_ids(graph, side_a);
    std::vector<char> in_a(graph.size(), 0);
    for (Vertex v : side_a) {
        in_a[v] = 1;
    }
    std::size_t f = 0;
    for (const auto& [u, v] : graph.edges()) {
        f += in_a[u] != in_a[v] ? 1 : 0;
    }
    return f;
}

Cut make_cut(const LatticeGraph& graph, std::vector<Vertex> side_a) {
    check_ids(graph, side_a);
    std::sort(side_a.begin(), side_a.end());
    if (std::adjacent_find(side_a.begin(), side_a.end()) != side_a.end()) {
        throw PreconditionError("cut side lists a vertex twice");
    }
    const std::size_t n = graph.size();
    if (side_a.size() != (n + 1) / 2) {
        throw PreconditionError(
            fmt::format("cut is not balanced: side A has {} vertices, expected {}", side_a.size(), (n + 1) / 2));
    }
    Cut cut;
    cut.crossing = crossing_count(graph, side_a);
    std::vector<char> in_a(n, 0);
    for (Vertex v : side_a) {
        in_a[v] = 1;
    }
    for (Vertex v = 0; v < n; ++v) {
        if (!in_a[v]) {
            cut.side_b.push_back(v);
        }
    }
    cut.side_a = std::move(side_a);
    return cut;
}

Cut min_balanced_cut(const LatticeGraph& graph, CutMode mode, const HeuristicOptions& options) {
    if (mode == CutMode::Exact) {
        const auto masks = minimizing_masks(graph, false);
        return make_cut(graph, mask_members(masks.front()));
    }
    if (graph.size() == 1) {
        return make_cut(graph, {0});
    }
    std::optional<Cut> best;
    const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
    for (std::size_t r = 0; r < restarts; ++r) {
        auto in_a = shuffled_partition(graph.size(), substream_seed(options.seed, r));
        swap_descent(graph, in_a);
        Cut candidate = canonical_cut(graph, std::move(in_a));
        if (!best || candidate.crossing < best->crossing ||
            (candidate.crossing == best->crossing && lex_less(candidate.side_a, best->side_a))) {
            best = std::move(candidate);
        }
    }
    return *best;
}

std::vector<Cut> all_min_balanced_cuts(const LatticeGraph& graph) {
    std::vector<Cut> cuts;
    for (std::uint32_t mask : minimizing_masks(graph, true)) {
        cuts.push_back(make_cut(graph, mask_members(mask)));
    }
    return cuts;
}

Cut random_balanced_cut(const LatticeGraph& graph, std::uint64_t seed) {
    auto in_a = shuffled_partition(graph.size(), seed);
    std::vector<Vertex> side_a;
    for (Vertex v = 0; v < graph.size(); ++v) {
        if (in_a[v]) {
            side_a.push_back(v);
        }
    }
    return make_cut(graph, std::move(side_a));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::size_t parse_id(std::string_view text, std::size_t line_no) {
    text = trim(text);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw SchemaError(fmt::format("line {}: '{}' is not a nonnegative integer", line_no, text));
    }
    return value;
}

} // namespace

LatticeGraph read_graph(std::istream& in) {
    std::optional<std::size_t> n;
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) {
            body = body.substr(0, hash);
        }
        body = trim(body);
        if (body.empty()) {
            continue;
        }
        if (!n) {
            if (!body.starts_with("n=")) {
                throw SchemaError(fmt::format("line {}: expected 'n=<int>' header", line_no));
            }
            n = parse_id(body.substr(2), line_no);
            continue;
        }
        const auto comma = body.find(',');
        if (comma == std::string_view::npos) {
            throw SchemaError(fmt::format("line {}: expected 'u,v'", line_no));
        }
        edges.emplace_back(parse_id(body.substr(0, comma), line_no), parse_id(body.substr(comma + 1), line_no));
    }
    if (!n) {
        throw SchemaError("graph file has no 'n=<int>' header");
    }
    return LatticeGraph(*n, std::move(edges));
}

void write_graph(std::ostream& out, const LatticeGraph& graph) {
    out << "n=" << graph.size() << '\n';
    for (const auto& [u, v] : graph.edges()) {
        out << u << ',' << v << '\n';
    }
}

LatticeGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open graph file '{}'", path.string()));
    }
    return read_graph(in);
}

void save_graph(const std::filesystem::path& path, const LatticeGraph& graph) {
    std::ofstream out(path);
    if (!out) {
        throw IoError(fmt::format("cannot write graph file '{}'", path.string()));
    }
    write_graph(out, graph);
}

} // namespace entscale
