#include "entscale/error.hpp"
#include "entscale/lattice.hpp"
#include "entscale/rng.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

using namespace entscale;

namespace {

// Oracle: enumerate side-A subsets by combinations of ceil(n/2) vertices and
// keep the minimum crossing and every minimizer (both orientations for even n).
struct BruteCuts {
    std::size_t min_crossing = 0;
    std::set<std::vector<Vertex>> minimizers;
};

BruteCuts brute_min_cuts(std::size_t n, const std::vector<Edge>& edges) {
    const std::size_t half = (n + 1) / 2;
    std::vector<char> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(half), 1);
    BruteCuts out;
    out.min_crossing = edges.size() + 1;
    do {
        std::size_t f = 0;
        for (const auto& [u, v] : edges) {
            f += pick[u] != pick[v];
        }
        std::vector<Vertex> side;
        for (Vertex v = 0; v < n; ++v) {
            if (pick[v]) {
                side.push_back(v);
            }
        }
        if (f < out.min_crossing) {
            out.min_crossing = f;
            out.minimizers.clear();
        }
        if (f == out.min_crossing) {
            out.minimizers.insert(side);
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

std::vector<Edge> random_edges(std::size_t n, double p, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (rng.uniform() < p) {
                edges.emplace_back(u, v);
            }
        }
    }
    return edges;
}

} // namespace

TEST(Grid, SquareEdgeCountMatchesClosedForm) {
    for (std::size_t side = 1; side <= 12; ++side) {
        const auto g = build_grid(side, side);
        EXPECT_EQ(g.edge_count(), 2 * (side - 1) * side) << side;
        EXPECT_EQ(g.kind(), LatticeKind::SquareGrid);
    }
}

TEST(Grid, RectangularShapeAndCoordinates) {
    const auto g = build_grid(2, 3);
    EXPECT_EQ(g.kind(), LatticeKind::RectangularGrid);
    EXPECT_EQ(g.edge_count(), 7u);
    EXPECT_EQ(g.coord(4), (Coord{1, 1}));
    EXPECT_FALSE(g.coord(6).has_value());
    EXPECT_TRUE(g.has_edge(1, 4));
    EXPECT_TRUE(g.has_edge(4, 1));
    EXPECT_FALSE(g.has_edge(0, 4));
    EXPECT_EQ(std::vector<Vertex>(g.neighbors(4).begin(), g.neighbors(4).end()), (std::vector<Vertex>{1, 3, 5}));
}

TEST(Grid, RejectsZeroDimension) {
    EXPECT_THROW(build_grid(0, 3), PreconditionError);
    EXPECT_THROW(build_grid(3, 0), PreconditionError);
}

TEST(Graph, ValidatesEdges) {
    EXPECT_THROW(build_custom(0, {}), PreconditionError);
    EXPECT_THROW(build_custom(3, {{0, 3}}), PreconditionError);
    EXPECT_THROW(build_custom(3, {{1, 1}}), PreconditionError);
    EXPECT_THROW(build_custom(3, {{0, 1}, {1, 0}}), PreconditionError);
    const auto g = build_custom(3, {{2, 0}, {1, 0}});
    EXPECT_EQ(g.kind(), LatticeKind::Custom);
    EXPECT_FALSE(g.is_grid());
    ASSERT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
    EXPECT_EQ(g.edges()[1], (Edge{0, 2}));
}

TEST(ExactSqrt, PerfectSquaresOnly) {
    EXPECT_EQ(exact_sqrt(0), 0u);
    EXPECT_EQ(exact_sqrt(49), 7u);
    EXPECT_FALSE(exact_sqrt(50).has_value());
    EXPECT_EQ(exact_sqrt(4294967296ULL), 65536u);
    EXPECT_FALSE(exact_sqrt(18446744073709551615ULL).has_value());
    EXPECT_EQ(exact_sqrt(18446744065119617025ULL), 4294967295u);
}

TEST(DeformedGrid, ShapeAndValidation) {
    const auto g = build_deformed_grid(36, 3);
    EXPECT_EQ(g.kind(), LatticeKind::DeformedGrid);
    EXPECT_EQ(g.rows(), 3u);
    EXPECT_EQ(g.cols(), 12u);
    EXPECT_EQ(g.deformation(), 3u);
    EXPECT_EQ(g.edge_count(), 57u);
    EXPECT_EQ(build_deformed_grid(36, 0).kind(), LatticeKind::SquareGrid);

    EXPECT_THROW(deformed_short_side(35, 1), PreconditionError); // not a square
    EXPECT_THROW(deformed_short_side(36, 6), PreconditionError); // k >= sqrt(n)
    EXPECT_THROW(deformed_short_side(36, 1), PreconditionError); // 5 does not divide 36
    EXPECT_EQ(deformed_short_side(36, 2), 4u);
}

TEST(Cut, MakeCutValidates) {
    const auto g = build_grid(2, 2);
    EXPECT_THROW(make_cut(g, {0}), PreconditionError);
    EXPECT_THROW(make_cut(g, {0, 0}), PreconditionError);
    EXPECT_THROW(make_cut(g, {0, 7}), PreconditionError);
    const Cut c = make_cut(g, {3, 0});
    EXPECT_EQ(c.side_a, (std::vector<Vertex>{0, 3}));
    EXPECT_EQ(c.side_b, (std::vector<Vertex>{1, 2}));
    EXPECT_EQ(c.crossing, 4u);
}

TEST(Cut, OddSizeGivesLargerSideA) {
    const auto g = build_grid(1, 5);
    const Cut c = min_balanced_cut(g, CutMode::Exact);
    EXPECT_EQ(c.side_a.size(), 3u);
    EXPECT_EQ(c.side_b.size(), 2u);
    EXPECT_EQ(c.crossing, 1u);
    EXPECT_EQ(c.side_a, (std::vector<Vertex>{0, 1, 2}));
}

TEST(Cut, SingleVertex) {
    const auto g = build_custom(1, {});
    const Cut c = min_balanced_cut(g, CutMode::Exact);
    EXPECT_EQ(c.side_a, std::vector<Vertex>{0});
    EXPECT_TRUE(c.side_b.empty());
    EXPECT_EQ(min_balanced_cut(g, CutMode::Heuristic), c);
}

TEST(Cut, SquareGridMinCutIsSide) {
    // A straight cut bisects even sides; odd sides need one extra step.
    for (std::size_t side = 2; side <= 4; ++side) {
        const auto g = build_grid(side, side);
        EXPECT_EQ(min_balanced_cut(g, CutMode::Exact).crossing, side % 2 == 0 ? side : side + 1) << side;
    }
}

TEST(Cut, ExactMatchesBruteForceOnRandomGraphs) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 2 + seed % 11;
        const auto edges = random_edges(n, 0.35, seed);
        const auto g = build_custom(n, edges);
        const auto oracle = brute_min_cuts(n, edges);
        const Cut best = min_balanced_cut(g, CutMode::Exact);
        EXPECT_EQ(best.crossing, oracle.min_crossing) << "seed " << seed;

        // Exactly one representative per unordered pair, each a true minimizer.
        const auto all = all_min_balanced_cuts(g);
        std::size_t expected = 0;
        for (const auto& side : oracle.minimizers) {
            if (n % 2 == 1 || side.front() == 0) {
                ++expected;
            }
        }
        EXPECT_EQ(all.size(), expected) << "seed " << seed;
        for (const Cut& c : all) {
            EXPECT_EQ(c.crossing, oracle.min_crossing);
            EXPECT_TRUE(oracle.minimizers.contains(c.side_a));
        }
        EXPECT_TRUE(std::is_sorted(all.begin(), all.end(),
                                   [](const Cut& a, const Cut& b) { return a.side_a < b.side_a; }));
        EXPECT_EQ(all.front(), best);
    }
}

TEST(Cut, HeuristicIsAnUpperBoundAndOftenExact) {
    std::size_t exact_hits = 0;
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const std::size_t n = 6 + seed % 9;
        const auto g = build_custom(n, random_edges(n, 0.4, seed));
        const Cut exact = min_balanced_cut(g, CutMode::Exact);
        const Cut heuristic = min_balanced_cut(g, CutMode::Heuristic);
        EXPECT_GE(heuristic.crossing, exact.crossing);
        EXPECT_EQ(heuristic.crossing, crossing_count(g, heuristic.side_a));
        exact_hits += heuristic.crossing == exact.crossing;
    }
    EXPECT_GE(exact_hits, 27u);
}

TEST(Cut, HeuristicFindsGridCutBeyondExactLimit) {
    const auto g = build_grid(6, 6);
    EXPECT_THROW(min_balanced_cut(g, CutMode::Exact), BudgetExceededError);
    EXPECT_THROW(all_min_balanced_cuts(g), BudgetExceededError);
    const Cut c = min_balanced_cut(g, CutMode::Heuristic);
    EXPECT_EQ(c.crossing, 6u);
    EXPECT_EQ(c, min_balanced_cut(g, CutMode::Heuristic));
}

TEST(Cut, RandomCutIsBalancedAndDeterministic) {
    const auto g = build_grid(3, 5);
    std::set<std::vector<Vertex>> seen;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Cut c = random_balanced_cut(g, seed);
        EXPECT_EQ(c.side_a.size(), 8u);
        EXPECT_EQ(c.side_b.size(), 7u);
        EXPECT_EQ(c.crossing, crossing_count(g, c.side_a));
        EXPECT_EQ(c, random_balanced_cut(g, seed));
        seen.insert(c.side_a);
    }
    EXPECT_GT(seen.size(), 45u);
}

TEST(Cut, CrossingCountIsSymmetric) {
    const auto g = build_grid(3, 4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Cut c = random_balanced_cut(g, seed);
        EXPECT_EQ(crossing_count(g, c.side_a), crossing_count(g, c.side_b));
    }
}

TEST(GraphIo, RoundTrip) {
    const auto g = build_deformed_grid(16, 2);
    std::stringstream buffer;
    write_graph(buffer, g);
    const auto back = read_graph(buffer);
    EXPECT_EQ(back.size(), g.size());
    EXPECT_TRUE(std::equal(back.edges().begin(), back.edges().end(), g.edges().begin(), g.edges().end()));

    const auto path = std::filesystem::temp_directory_path() / "entscale_graph_roundtrip.txt";
    save_graph(path, g);
    EXPECT_EQ(load_graph(path).edge_count(), g.edge_count());
    std::filesystem::remove(path);
}

TEST(GraphIo, CommentsAndBlankLines) {
    std::istringstream in("# triangle\n\nn=3  \n0,1 # first\n 1 , 2\n0,2\n");
    const auto g = read_graph(in);
    EXPECT_EQ(g.size(), 3u);
    EXPECT_EQ(g.edge_count(), 3u);
}

TEST(GraphIo, SchemaErrorsNameTheLine) {
    auto message = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_graph(in);
        } catch (const SchemaError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message("0,1\n").find("line 1"), std::string::npos);
    EXPECT_NE(message("n=3\n0;1\n").find("line 2"), std::string::npos);
    EXPECT_NE(message("n=3\n0,x\n").find("line 2"), std::string::npos);
    EXPECT_NE(message("n=-1\n").find("line 1"), std::string::npos);
    EXPECT_NE(message("# only a comment\n").find("header"), std::string::npos);

    std::istringstream bad_edge("n=2\n0,5\n");
    EXPECT_THROW(read_graph(bad_edge), PreconditionError);
    EXPECT_THROW(load_graph("/nonexistent/graph.txt"), IoError);
}
