#include "entscale/simulator.hpp"

#include "csv.hpp"
#include "entscale/bounds.hpp"
#include "entscale/error.hpp"
#include "entscale/rng.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <thread>

#include <Eigen/Dense>
#include <fmt/format.h>

// LAPACKE takes std::complex when this is defined before its header.
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace entscale {

std::string_view gate_name(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::CZ:
        return "CZ";
    case GateKind::T:
        return "T";
    case GateKind::SqrtX:
        return "SqrtX";
    case GateKind::SqrtY:
        return "SqrtY";
    case GateKind::H:
        return "H";
    }
    return "?";
}

bool is_entangling(const Layer& layer) noexcept {
    return std::any_of(layer.begin(), layer.end(), [](const Gate& g) { return g.kind == GateKind::CZ; });
}

Circuit::Circuit(LatticeGraph graph, std::vector<Layer> layers) : graph_(std::move(graph)), layers_(std::move(layers)) {
    const std::size_t n = graph_.size();
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        std::vector<char> used(n, 0);
        auto claim = [&](Vertex q) {
            if (q >= n) {
                throw PreconditionError(fmt::format("layer {}: qubit {} outside 0..{}", l, q, n - 1));
            }
            if (used[q]) {
                throw PreconditionError(fmt::format("layer {}: qubit {} is acted on twice", l, q));
            }
            used[q] = 1;
        };
        for (const Gate& gate : layers_[l]) {
            claim(gate.target);
            if (gate.kind == GateKind::CZ) {
                claim(gate.partner);
                if (!graph_.has_edge(gate.target, gate.partner)) {
                    throw PreconditionError(
                        fmt::format("layer {}: CZ({},{}) is not on a lattice edge", l, gate.target, gate.partner));
                }
            }
        }
    }
}

std::size_t Circuit::entangling_depth() const noexcept {
    return static_cast<std::size_t>(std::count_if(layers_.begin(), layers_.end(), is_entangling));
}

std::vector<std::vector<Edge>> cz_patterns(const LatticeGraph& grid) {
    if (!grid.is_grid()) {
        throw UnsupportedTopologyError("the random-circuit prescription is defined on grids only");
    }
    struct Pattern {
        bool horizontal;
        std::size_t row_parity;
        std::size_t col_parity;
    };
    static constexpr Pattern kCycle[8] = {
        {true, 0, 0}, {true, 1, 1}, {false, 0, 0}, {false, 1, 1},
        {true, 1, 0}, {true, 0, 1}, {false, 0, 1}, {false, 1, 0},
    };
    std::vector<std::vector<Edge>> patterns;
    for (const auto& p : kCycle) {
        std::vector<Edge> edges;
        for (const auto& [u, v] : grid.edges()) {
            const Coord cu = *grid.coord(u);
            const bool horizontal = cu.row == grid.coord(v)->row;
            if (horizontal == p.horizontal && cu.row % 2 == p.row_parity && cu.col % 2 == p.col_parity) {
                edges.emplace_back(u, v);
            }
        }
        patterns.push_back(std::move(edges));
    }
    return patterns;
}

Circuit build_random_circuit(const LatticeGraph& grid, std::size_t depth, std::uint64_t seed) {
    const auto patterns = cz_patterns(grid);
    const std::size_t n = grid.size();
    static constexpr GateKind kLocal[3] = {GateKind::T, GateKind::SqrtX, GateKind::SqrtY};

    std::vector<Layer> layers;
    layers.reserve(depth + 1);
    Layer hadamards;
    for (Vertex q = 0; q < n; ++q) {
        hadamards.push_back({GateKind::H, q, 0});
    }
    layers.push_back(std::move(hadamards));

    for (std::size_t l = 1; l <= depth; ++l) {
        SplitMix64 rng(substream_seed(seed, l));
        Layer layer;
        std::vector<char> busy(n, 0);
        for (const auto& [u, v] : patterns[(l - 1) % patterns.size()]) {
            layer.push_back({GateKind::CZ, u, v});
            busy[u] = busy[v] = 1;
        }
        for (Vertex q = 0; q < n; ++q) {
            if (!busy[q]) {
                layer.push_back({kLocal[rng.below(3)], q, 0});
            }
        }
        layers.push_back(std::move(layer));
    }
    return Circuit(grid, std::move(layers));
}

StateVector::StateVector(std::size_t qubits) : qubits_(qubits), amplitudes_(std::size_t{1} << qubits) {
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(std::size_t qubits, std::vector<Amplitude> amplitudes)
    : qubits_(qubits), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != (std::size_t{1} << qubits)) {
        throw PreconditionError(
            fmt::format("{} amplitudes given for {} qubits (need {})", amplitudes_.size(), qubits, 1ULL << qubits));
    }
}

double StateVector::norm() const noexcept {
    double sum = 0.0;
    for (const auto& a : amplitudes_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

namespace {

// Plain complex product; operator* routes through a NaN-recovery call.
inline Amplitude mul(Amplitude a, Amplitude b) noexcept {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

} // namespace

void StateVector::apply_single(Vertex q, const Amplitude (&u)[2][2]) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t size = amplitudes_.size();
    for (std::size_t block = 0; block < size; block += 2 * stride) {
        for (std::size_t i = block; i < block + stride; ++i) {
            const Amplitude a0 = amplitudes_[i];
            const Amplitude a1 = amplitudes_[i + stride];
            amplitudes_[i] = mul(u[0][0], a0) + mul(u[0][1], a1);
            amplitudes_[i + stride] = mul(u[1][0], a0) + mul(u[1][1], a1);
        }
    }
}

void StateVector::apply(const Gate& gate) {
    if (gate.target >= qubits_ || (gate.kind == GateKind::CZ && gate.partner >= qubits_)) {
        throw PreconditionError(fmt::format("gate {} addresses a qubit outside 0..{}", gate_name(gate.kind), qubits_ - 1));
    }
    using namespace std::complex_literals;
    static const double r = 1.0 / std::numbers::sqrt2;
    static const Amplitude kH[2][2] = {{r, r}, {r, -r}};
    static const Amplitude kSqrtX[2][2] = {{0.5 + 0.5i, 0.5 - 0.5i}, {0.5 - 0.5i, 0.5 + 0.5i}};
    static const Amplitude kSqrtY[2][2] = {{0.5 + 0.5i, -0.5 - 0.5i}, {0.5 + 0.5i, 0.5 + 0.5i}};
    switch (gate.kind) {
    case GateKind::H:
        apply_single(gate.target, kH);
        return;
    case GateKind::SqrtX:
        apply_single(gate.target, kSqrtX);
        return;
    case GateKind::SqrtY:
        apply_single(gate.target, kSqrtY);
        return;
    case GateKind::T: {
        const Amplitude phase = std::polar(1.0, std::numbers::pi / 4.0);
        const std::size_t bit = std::size_t{1} << gate.target;
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
            if (i & bit) {
                amplitudes_[i] = mul(amplitudes_[i], phase);
            }
        }
        return;
    }
    case GateKind::CZ: {
        if (gate.partner == gate.target) {
            throw PreconditionError("CZ needs two distinct qubits");
        }
        const std::size_t mask = (std::size_t{1} << gate.target) | (std::size_t{1} << gate.partner);
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
            if ((i & mask) == mask) {
                amplitudes_[i] = -amplitudes_[i];
            }
        }
        return;
    }
    }
}

void StateVector::apply(const Layer& layer) {
    for (const Gate& gate : layer) {
        apply(gate);
    }
}

std::size_t qubit_limit() {
    if (const char* env = std::getenv("ENTSCALE_MAX_QUBITS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long value = std::strtoull(env, &end, 10);
        if (end == nullptr || *end != '\0' || value == 0 || value > 40) {
            throw PreconditionError(fmt::format("ENTSCALE_MAX_QUBITS must be an integer in 1..40, got '{}'", env));
        }
        return static_cast<std::size_t>(value);
    }
    return kDefaultQubitLimit;
}

StateVector run(const Circuit& circuit, const LayerHook& hook, std::size_t max_qubits) {
    const std::size_t n = circuit.qubits();
    if (n > max_qubits) {
        throw ResourceError(fmt::format("{} qubits exceed the simulator limit of {}; the state needs up to {} bytes", n,
                                        max_qubits, memory_bytes(n).str()));
    }
    StateVector state(n);
    const auto layers = circuit.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        state.apply(layers[l]);
        if (hook) {
            hook(l, state);
        }
    }
    return state;
}

namespace {

using Matrix = Eigen::MatrixXcd;

// Index offsets of every assignment of the given qubits.
std::vector<std::size_t> scatter_offsets(std::span<const Vertex> qubits) {
    std::vector<std::size_t> offsets(std::size_t{1} << qubits.size(), 0);
    for (std::size_t x = 1; x < offsets.size(); ++x) {
        const auto low = static_cast<std::size_t>(std::countr_zero(x));
        offsets[x] = offsets[x & (x - 1)] | (std::size_t{1} << qubits[low]);
    }
    return offsets;
}

void check_cut_matches(const StateVector& state, const Cut& cut) {
    const std::size_t n = state.qubits();
    if (cut.side_a.size() + cut.side_b.size() != n) {
        throw PreconditionError(fmt::format("cut covers {} qubits but the state has {}",
                                            cut.side_a.size() + cut.side_b.size(), n));
    }
    std::vector<char> seen(n, 0);
    for (const auto* side : {&cut.side_a, &cut.side_b}) {
        for (Vertex v : *side) {
            if (v >= n || seen[v]) {
                throw PreconditionError(fmt::format("cut does not partition the {} qubits of the state", n));
            }
            seen[v] = 1;
        }
    }
}

// Rows indexed by the smaller side.
Matrix reshape(const StateVector& state, const Cut& cut) {
    const bool a_rows = cut.side_a.size() <= cut.side_b.size();
    const auto row_offsets = scatter_offsets(a_rows ? cut.side_a : cut.side_b);
    const auto col_offsets = scatter_offsets(a_rows ? cut.side_b : cut.side_a);
    const auto amps = state.amplitudes();
    Matrix m(static_cast<Eigen::Index>(row_offsets.size()), static_cast<Eigen::Index>(col_offsets.size()));
    for (std::size_t c = 0; c < col_offsets.size(); ++c) {
        for (std::size_t r = 0; r < row_offsets.size(); ++r) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = amps[row_offsets[r] | col_offsets[c]];
        }
    }
    return m;
}

// Singular values by LAPACK's QR-iteration SVD, descending. Eigen 3.4.0's
// divide-and-conquer SVD loses accuracy on repeated singular values, which the
// structured early-layer states produce routinely.
std::vector<double> svd_values(Matrix m) {
    const auto rows = static_cast<lapack_int>(m.rows());
    const auto cols = static_cast<lapack_int>(m.cols());
    const auto k = static_cast<std::size_t>(std::min(rows, cols));
    std::vector<double> values(k);
    std::vector<double> superb(k > 0 ? k : 1);
    if (k == 0) {
        return values;
    }
    const lapack_int info =
        LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', rows, cols, m.data(),
                       rows, values.data(), nullptr, 1, nullptr, 1, superb.data());
    if (info != 0) {
        throw Error(fmt::format("singular value decomposition failed (LAPACK info {})", info));
    }
    return values;
}

// Column-pivoted Householder QR that stops once the trailing block's Frobenius
// norm drops to `tolerance`; returns the computed leading rows of R. Their
// singular values match those of m to within `tolerance`.
Matrix truncated_qr_rows(Matrix a, double tolerance) {
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    const Eigen::Index steps = std::min(rows, cols);
    Eigen::VectorXcd workspace(cols);
    Eigen::Index k = 0;
    for (; k < steps; ++k) {
        const auto trailing = a.bottomRightCorner(rows - k, cols - k);
        const Eigen::VectorXd norms = trailing.colwise().squaredNorm().transpose();
        if (std::sqrt(norms.sum()) <= tolerance) {
            break;
        }
        Eigen::Index pivot = 0;
        norms.maxCoeff(&pivot);
        if (pivot != 0) {
            a.col(k).swap(a.col(k + pivot));
        }
        Eigen::VectorXcd essential(rows - k - 1 > 0 ? rows - k - 1 : 0);
        std::complex<double> tau;
        double beta = 0.0;
        a.col(k).tail(rows - k).makeHouseholder(essential, tau, beta);
        if (k + 1 < cols) {
            a.bottomRightCorner(rows - k, cols - k - 1).applyHouseholderOnTheLeft(essential, tau, workspace.data());
        }
        a(k, k) = beta;
        a.col(k).tail(rows - k - 1).setZero();
    }
    return a.topRows(k);
}

// Singular values of a normalized state matrix (rows <= cols), descending.
// Matrices of low rank go through truncated QR first; the rank is judged from
// `rank_bound` when given, else from the participation ratio of the Gram matrix.
std::vector<double> state_singular_values(const Matrix& m, std::size_t rank_bound) {
    const Eigen::Index d = m.rows();
    if (d <= 16) {
        return svd_values(m);
    }
    const double scale = m.norm();
    bool low_rank = 4 * rank_bound < static_cast<std::size_t>(d);
    if (rank_bound == kUnknownRank) {
        Matrix gram = Matrix::Zero(d, d);
        gram.selfadjointView<Eigen::Lower>().rankUpdate(m);
        double purity = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            purity += std::norm(gram(j, j));
            for (Eigen::Index i = j + 1; i < d; ++i) {
                purity += 2.0 * std::norm(gram(i, j));
            }
        }
        // Participation ratio 1/purity <= rank.
        const double participation = scale * scale * scale * scale / purity;
        low_rank = 4.0 * participation < static_cast<double>(d);
    }
    if (!low_rank) {
        return svd_values(m);
    }
    // The truncation is numerical, so a wrong hint costs time but not accuracy.
    return svd_values(truncated_qr_rows(m, 1e-14 * scale));
}

double spectrum_deviation(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        const double x = i < a.size() ? a[i] : 0.0;
        const double y = i < b.size() ? b[i] : 0.0;
        worst = std::max(worst, std::abs(x - y));
    }
    return worst;
}

} // namespace

SchmidtSpectrum schmidt_spectrum(const StateVector& state, const Cut& cut, std::size_t rank_bound) {
    check_cut_matches(state, cut);
    SchmidtSpectrum spectrum{cut, state_singular_values(reshape(state, cut), rank_bound)};
    std::sort(spectrum.values.begin(), spectrum.values.end(), std::greater<>());
    return spectrum;
}

double entropy_ebits(const SchmidtSpectrum& spectrum) {
    double entropy = 0.0;
    for (double s : spectrum.values) {
        const double p = s * s;
        if (p > kEntropyCutoff) {
            entropy -= p * std::log2(p);
        }
    }
    return std::max(entropy, 0.0);
}

std::size_t schmidt_rank(const SchmidtSpectrum& spectrum, double tol) {
    if (!(tol > 0.0)) {
        throw PreconditionError("rank tolerance must be positive");
    }
    if (spectrum.values.empty()) {
        return 0;
    }
    const double largest = *std::max_element(spectrum.values.begin(), spectrum.values.end());
    return static_cast<std::size_t>(
        std::count_if(spectrum.values.begin(), spectrum.values.end(), [&](double s) { return s > tol * largest; }));
}

double local_gate_invariance_check(const StateVector& state, const Cut& cut, GateKind kind, Vertex qubit) {
    if (kind == GateKind::CZ) {
        throw PreconditionError("local-gate invariance takes a single-qubit gate");
    }
    const auto before = schmidt_spectrum(state, cut);
    StateVector moved = state;
    moved.apply(Gate{kind, qubit, 0});
    return spectrum_deviation(before.values, schmidt_spectrum(moved, cut).values);
}

namespace {

constexpr double kEntropySlack = 1e-9;
constexpr double kNormSlack = 1e-10;
constexpr std::uint64_t kLocalCheckStream = 0x10ca16a7eULL;

struct SeedOutcome {
    std::vector<EbitRecord> records;
    std::vector<std::vector<double>> max_entropy;
    double max_local_deviation = 0.0;
    std::size_t checks = 0;
    std::vector<CapViolation> violations; // first per check
    std::map<std::string, std::size_t> violation_counts;
};

SeedOutcome run_seed(const LatticeGraph& grid, std::size_t depth, std::uint64_t seed, std::span<const Cut> cuts,
                     const VerifyOptions& options) {
    const Circuit circuit = build_random_circuit(grid, depth, seed);
    const std::size_t n = grid.size();
    std::vector<std::vector<char>> in_a(cuts.size(), std::vector<char>(n, 0));
    for (std::size_t c = 0; c < cuts.size(); ++c) {
        for (Vertex v : cuts[c].side_a) {
            in_a[c][v] = 1;
        }
    }

    SeedOutcome out;
    out.max_entropy.assign(depth + 1, std::vector<double>(cuts.size(), 0.0));
    std::vector<std::size_t> crossing(cuts.size(), 0);
    std::vector<double> previous_entropy(cuts.size(), 0.0);
    std::size_t entangling = 0;

    auto check = [&](bool ok, std::size_t layer, std::size_t cut_id, const char* name, double observed,
                     double bound) {
        ++out.checks;
        if (ok) {
            return;
        }
        if (out.violation_counts[name]++ == 0) {
            out.violations.push_back(CapViolation{seed, layer, cut_id, name, observed, bound});
        }
    };

    run(
        circuit,
        [&](std::size_t layer, const StateVector& state) {
            const Layer& gates = circuit.layers()[layer];
            if (is_entangling(gates)) {
                ++entangling;
            }
            const auto cap = ebit_cap(n, entangling);
            const double norm = state.norm();
            check(std::abs(norm - 1.0) <= kNormSlack, layer, 0, "state norm", norm, 1.0);

            std::vector<SchmidtSpectrum> spectra;
            spectra.reserve(cuts.size());
            for (std::size_t c = 0; c < cuts.size(); ++c) {
                std::size_t crossing_now = 0;
                for (const Gate& g : gates) {
                    if (g.kind == GateKind::CZ && in_a[c][g.target] != in_a[c][g.partner]) {
                        ++crossing_now;
                    }
                }
                crossing[c] += crossing_now;

                const std::size_t smaller = std::min(cuts[c].side_a.size(), cuts[c].side_b.size());
                const std::size_t rank_exponent = std::min(crossing[c], smaller);
                spectra.push_back(schmidt_spectrum(state, cuts[c], std::size_t{1} << rank_exponent));
                const auto& spectrum = spectra.back();
                const double entropy = entropy_ebits(spectrum);
                const std::size_t rank = schmidt_rank(spectrum);
                double mass = 0.0;
                for (double s : spectrum.values) {
                    mass += s * s;
                }

                check(std::abs(mass - 1.0) <= kNormSlack, layer, c, "spectrum normalization", mass, 1.0);
                check(entropy <= static_cast<double>(cap) + kEntropySlack, layer, c, "ebit cap", entropy,
                      static_cast<double>(cap));
                check(rank <= (std::size_t{1} << rank_exponent), layer, c, "crossing rank bound",
                      static_cast<double>(rank), std::ldexp(1.0, static_cast<int>(rank_exponent)));
                check(entropy <= std::log2(static_cast<double>(std::max<std::size_t>(rank, 1))) + kEntropySlack, layer,
                      c, "entropy-rank coarse graining", entropy, std::log2(static_cast<double>(rank)));
                check(entropy - previous_entropy[c] <= static_cast<double>(crossing_now) + kEntropySlack, layer, c,
                      "per-layer ebit gain", entropy - previous_entropy[c], static_cast<double>(crossing_now));

                previous_entropy[c] = entropy;
                out.max_entropy[layer][c] = std::max(out.max_entropy[layer][c], entropy);
                if (options.keep_records) {
                    out.records.push_back({seed, layer, c, entropy, rank, crossing[c], cap});
                }
            }

            if (options.check_local_invariance && !cuts.empty()) {
                SplitMix64 rng(substream_seed(seed ^ kLocalCheckStream, layer));
                static constexpr GateKind kLocal[4] = {GateKind::T, GateKind::SqrtX, GateKind::SqrtY, GateKind::H};
                const std::size_t c = rng.below(cuts.size());
                const Vertex qubit = rng.below(n);
                const GateKind kind = kLocal[rng.below(4)];
                StateVector moved = state;
                moved.apply(Gate{kind, qubit, 0});
                const double deviation =
                    spectrum_deviation(spectra[c].values,
                                       schmidt_spectrum(moved, cuts[c], spectra[c].values.size()).values);
                out.max_local_deviation = std::max(out.max_local_deviation, deviation);
                check(deviation <= kEntropySlack, layer, c, "local-gate spectrum invariance", deviation,
                      kEntropySlack);
            }
        },
        options.max_qubits);
    return out;
}

} // namespace

EbitReport verify_caps(const LatticeGraph& grid, std::size_t depth, std::span<const std::uint64_t> seeds,
                       std::span<const Cut> cuts, const VerifyOptions& options) {
    if (grid.size() > options.max_qubits) {
        throw ResourceError(fmt::format("{} qubits exceed the simulator limit of {}; the state needs up to {} bytes",
                                        grid.size(), options.max_qubits, memory_bytes(grid.size()).str()));
    }
    for (const Cut& cut : cuts) {
        if (cut.side_a.size() + cut.side_b.size() != grid.size()) {
            throw PreconditionError("every cut must partition the grid's qubits");
        }
    }
    std::vector<SeedOutcome> outcomes(seeds.size());
    std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = std::min(threads, std::max<std::size_t>(seeds.size(), 1));

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](std::size_t id) {
        try {
            for (std::size_t i = next++; i < seeds.size(); i = next++) {
                outcomes[i] = run_seed(grid, depth, seeds[i], cuts, options);
            }
        } catch (...) {
            errors[id] = std::current_exception();
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker, t);
        }
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }

    EbitReport report;
    report.max_entropy.assign(depth + 1, std::vector<double>(cuts.size(), 0.0));
    for (auto& outcome : outcomes) {
        report.records.insert(report.records.end(), outcome.records.begin(), outcome.records.end());
        for (std::size_t l = 0; l <= depth; ++l) {
            for (std::size_t c = 0; c < cuts.size(); ++c) {
                report.max_entropy[l][c] = std::max(report.max_entropy[l][c], outcome.max_entropy[l][c]);
            }
        }
        report.max_local_deviation = std::max(report.max_local_deviation, outcome.max_local_deviation);
        report.checks += outcome.checks;
        for (const auto& v : outcome.violations) {
            if (report.violation_counts[v.check] == 0) {
                report.first_violations.push_back(v);
            }
        }
        for (const auto& [name, count] : outcome.violation_counts) {
            report.violation_counts[name] += count;
        }
    }
    return report;
}

void write_records_csv(std::ostream& out, std::span<const EbitRecord> records) {
    out << "seed,layer,cut_id,entropy_ebits,rank,crossing_cz,cap\n";
    for (const auto& r : records) {
        out << fmt::format("{},{},{},{},{},{},{}\n", r.seed, r.layer, r.cut_id, r.entropy_ebits, r.rank,
                           r.crossing_cz, r.cap);
    }
}

std::vector<EbitRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("missing ebit report header");
    }
    csv::expect_header(line, "seed,layer,cut_id,entropy_ebits,rank,crossing_cz,cap");
    std::vector<EbitRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) {
            continue;
        }
        const auto f = csv::split(line);
        csv::expect_columns(f, 7, line_no);
        records.push_back({
            csv::parse_uint(f[0], line_no, "seed"),
            csv::parse_uint(f[1], line_no, "layer"),
            csv::parse_uint(f[2], line_no, "cut_id"),
            csv::parse_double(f[3], line_no, "entropy_ebits"),
            csv::parse_uint(f[4], line_no, "rank"),
            csv::parse_uint(f[5], line_no, "crossing_cz"),
            csv::parse_uint(f[6], line_no, "cap"),
        });
    }
    return records;
}

nlohmann::json to_json(const EbitReport& report) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : report.records) {
        records.push_back({{"seed", r.seed},
                           {"layer", r.layer},
                           {"cut_id", r.cut_id},
                           {"entropy_ebits", r.entropy_ebits},
                           {"rank", r.rank},
                           {"crossing_cz", r.crossing_cz},
                           {"cap", r.cap}});
    }
    nlohmann::json verdict = {
        {"pass", report.passed()},
        {"checks", report.checks},
        {"max_local_deviation", report.max_local_deviation},
        {"counterexample", nullptr},
    };
    if (report.counterexample()) {
        const auto& c = *report.counterexample();
        verdict["counterexample"] = {{"seed", c.seed},         {"layer", c.layer}, {"cut_id", c.cut_id},
                                     {"check", c.check},       {"observed", c.observed},
                                     {"bound", c.bound}};
    }
    verdict["violations"] = report.violation_counts;
    return {{"records", records}, {"max_entropy", report.max_entropy}, {"verdict", verdict}};
}

} // namespace entscale
