#pragma once

#include "entscale/lattice.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace entscale {

using Amplitude = std::complex<double>;

enum class GateKind { CZ, T, SqrtX, SqrtY, H };

std::string_view gate_name(GateKind kind) noexcept;

struct Gate {
    GateKind kind = GateKind::H;
    Vertex target = 0;
    Vertex partner = 0; // second qubit of a CZ; unused otherwise

    friend bool operator==(const Gate&, const Gate&) = default;
};

using Layer = std::vector<Gate>;

/// Layered circuit on a lattice; gates within a layer act on disjoint qubits and
/// every CZ sits on a lattice edge.
class Circuit {
public:
    Circuit(LatticeGraph graph, std::vector<Layer> layers);

    const LatticeGraph& graph() const noexcept { return graph_; }
    std::span<const Layer> layers() const noexcept { return layers_; }
    std::size_t qubits() const noexcept { return graph_.size(); }
    /// Number of layers holding at least one CZ.
    std::size_t entangling_depth() const noexcept;

    friend bool operator==(const Circuit& a, const Circuit& b) { return a.layers_ == b.layers_; }

private:
    LatticeGraph graph_;
    std::vector<Layer> layers_;
};

bool is_entangling(const Layer& layer) noexcept;

/// The eight CZ edge patterns of the random-circuit prescription, in cycle order.
/// Pattern p uses horizontal (p in {0,1,4,5}) or vertical edges selected by the
/// row/column parity of their first endpoint.
std::vector<std::vector<Edge>> cz_patterns(const LatticeGraph& grid);

/// Layer 0 applies H to every qubit. Layer l >= 1 applies CZ on pattern (l-1) mod 8
/// and a uniformly random gate from {T, sqrt(X), sqrt(Y)} on every qubit the CZs
/// leave idle, drawn from a per-layer substream of `seed`. Layer l is therefore
/// independent of the total depth.
Circuit build_random_circuit(const LatticeGraph& grid, std::size_t depth, std::uint64_t seed);

/// Dense state of n qubits; qubit q is bit q of the amplitude index.
class StateVector {
public:
    /// |0...0>.
    explicit StateVector(std::size_t qubits);
    /// Takes amplitudes as given (length must be 2^qubits).
    StateVector(std::size_t qubits, std::vector<Amplitude> amplitudes);

    std::size_t qubits() const noexcept { return qubits_; }
    std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
    double norm() const noexcept;

    void apply(const Gate& gate);
    void apply(const Layer& layer);

private:
    void apply_single(Vertex q, const Amplitude (&u)[2][2]);

    std::size_t qubits_;
    std::vector<Amplitude> amplitudes_;
};

inline constexpr std::size_t kDefaultQubitLimit = 20;

/// kDefaultQubitLimit unless the ENTSCALE_MAX_QUBITS environment variable overrides it.
std::size_t qubit_limit();

/// Called after each layer with its index and the current state.
using LayerHook = std::function<void(std::size_t layer, const StateVector& state)>;

/// Applies every layer to |0...0>. Throws ResourceError above `max_qubits`.
StateVector run(const Circuit& circuit, const LayerHook& hook = {}, std::size_t max_qubits = qubit_limit());

struct SchmidtSpectrum {
    Cut cut;
    std::vector<double> values; // descending, nonnegative
};

inline constexpr std::size_t kUnknownRank = static_cast<std::size_t>(-1);

/// Singular values of the amplitudes reshaped to a 2^|A| x 2^|B| matrix.
/// Values below 1e-13 (absolute) may be omitted. `rank_bound`, when known (such
/// as 2^crossing CZ gates), only picks the decomposition route.
SchmidtSpectrum schmidt_spectrum(const StateVector& state, const Cut& cut, std::size_t rank_bound = kUnknownRank);

/// Squared values below this count as zero in the entropy sum.
inline constexpr double kEntropyCutoff = 1e-24;
/// Relative singular-value cutoff of the Schmidt rank.
inline constexpr double kRankTolerance = 1e-10;

/// Entanglement entropy -sum s^2 log2 s^2 in ebits.
double entropy_ebits(const SchmidtSpectrum& spectrum);

/// Number of values above tol times the largest value.
std::size_t schmidt_rank(const SchmidtSpectrum& spectrum, double tol = kRankTolerance);

/// Largest change of the sorted Schmidt values across `cut` when `kind` acts on `qubit`.
double local_gate_invariance_check(const StateVector& state, const Cut& cut, GateKind kind, Vertex qubit);

struct EbitRecord {
    std::uint64_t seed = 0;
    std::size_t layer = 0;
    std::size_t cut_id = 0;
    double entropy_ebits = 0.0;
    std::size_t rank = 0;
    std::size_t crossing_cz = 0; // cumulative CZ gates across the cut
    std::size_t cap = 0;

    friend bool operator==(const EbitRecord&, const EbitRecord&) = default;
};

/// A record that broke one of the checked bounds.
struct CapViolation {
    std::uint64_t seed = 0;
    std::size_t layer = 0;
    std::size_t cut_id = 0;
    std::string check;
    double observed = 0.0;
    double bound = 0.0;
};

struct EbitReport {
    std::vector<EbitRecord> records; // seed order, then layer, then cut
    /// max_entropy[layer][cut_id] over all seeds
    std::vector<std::vector<double>> max_entropy;
    double max_local_deviation = 0.0;
    std::size_t checks = 0;
    /// Earliest violation of each check, in seed order.
    std::vector<CapViolation> first_violations;
    std::map<std::string, std::size_t> violation_counts;

    bool passed() const noexcept { return first_violations.empty(); }
    const CapViolation* counterexample() const noexcept {
        return first_violations.empty() ? nullptr : &first_violations.front();
    }
};

struct VerifyOptions {
    std::size_t max_qubits = qubit_limit();
    /// Apply a random local gate per (seed, layer) and check the spectrum is unchanged.
    bool check_local_invariance = true;
    bool keep_records = true;
    /// Worker threads over seeds; 0 picks the hardware concurrency.
    std::size_t threads = 0;
};

/// Simulates a random circuit per seed and checks, after every layer and for
/// every cut:
///   entropy <= min(ceil(n/2), entangling layers so far) + 1e-9
///   rank <= 2^min(cumulative crossing CZ, min(|A|, |B|))
///   entropy gain over the previous layer <= crossing CZ in this layer + 1e-9
///   entropy <= log2(rank) + 1e-9, sum of s^2 = 1 +- 1e-10, state norm = 1 +- 1e-10
/// The report is independent of the thread count.
EbitReport verify_caps(const LatticeGraph& grid, std::size_t depth, std::span<const std::uint64_t> seeds,
                       std::span<const Cut> cuts, const VerifyOptions& options = {});

/// CSV header `seed,layer,cut_id,entropy_ebits,rank,crossing_cz,cap`.
void write_records_csv(std::ostream& out, std::span<const EbitRecord> records);
std::vector<EbitRecord> read_records_csv(std::istream& in);

nlohmann::json to_json(const EbitReport& report);

} // namespace entscale
