#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrc/qcore.h"

namespace qrc {

namespace detail {
class ProjectionIndex;
}

/// Named, placed unitary generator.
struct Generator {
    std::string name;
    cmatrix unitary;
};

/// Generators of a circuit family on a fixed register.
struct GateSet {
    int n = 0;
    std::vector<Generator> generators;
};

/// {H_i, S_i, CNOT_ij} on n qubits, in that order.
GateSet clifford_generators(int n);

/// Provenance record; reconstructs the class deterministically via build_class.
struct ClassSpec {
    enum class Family { stabilizer, iqp, stabilizer_plus_t, iqp_plus_ccz, custom };

    Family family = Family::custom;
    int n = 1;
    int k = 0;      // resource budget (augmented families)
    int depth = 0;  // word-length cap L (augmented families)
    std::string note;

    /// Canonical text form: "stab:1", "iqp:3", "stab+T:1:2:3" (n:k:L), ...
    std::string str() const;

    /// Accepts "stab:n", "iqp:n", "stab+T:k:L", "iqp+CCZ:k:L" (n taken from
    /// `default_n`, or 1 / 3 for the augmented families when absent) and the
    /// explicit four-field forms "stab+T:n:k:L", "iqp+CCZ:n:k:L".
    static ClassSpec parse(std::string_view text, std::optional<int> default_n = std::nullopt);

    bool operator==(const ClassSpec &) const = default;
};

/// Finite, deduplicated, ordered set of channels with provenance. Immutable.
class CircuitClass {
   public:
    CircuitClass(int n, double dedup_tol, ClassSpec spec);
    CircuitClass(const CircuitClass &other);
    CircuitClass(CircuitClass &&) noexcept;
    CircuitClass &operator=(const CircuitClass &other);
    CircuitClass &operator=(CircuitClass &&) noexcept;
    ~CircuitClass();

    int num_qubits() const { return n_; }
    size_t size() const { return channels_.size(); }
    bool empty() const { return channels_.empty(); }
    double dedup_tol() const { return tol_; }
    const ClassSpec &spec() const { return spec_; }
    const std::vector<QuantumChannel> &channels() const { return channels_; }
    const QuantumChannel &operator[](size_t i) const { return channels_[i]; }
    auto begin() const { return channels_.begin(); }
    auto end() const { return channels_.end(); }

    /// Index of the first element within dedup_tol of `phi`.
    std::optional<size_t> find(const QuantumChannel &phi) const;
    bool contains(const QuantumChannel &phi) const { return find(phi).has_value(); }

    /// Appends `phi` unless an element within dedup_tol already exists.
    /// Returns true if it was added.
    bool insert(QuantumChannel phi);

    CircuitClass with_spec(ClassSpec spec) const;

   private:
    int n_;
    double tol_;
    ClassSpec spec_;
    std::vector<QuantumChannel> channels_;
    std::unique_ptr<detail::ProjectionIndex> index_;
};

/// Keeps the first representative of each tol-ball, preserving order.
CircuitClass dedupe(const std::vector<QuantumChannel> &channels, double tol = kChannelTol);

/// All distinct Clifford channels on n in {1, 2} qubits by breadth-first
/// closure of clifford_generators(n) starting from the identity.
CircuitClass clifford_class(int n);

/// |C_n / U(1)| = 2^{n^2+2n} prod_{j=1}^n (4^j - 1).
uint64_t clifford_group_order(int n);

/// Distinct pure stabilizer states, as the orbit of |0...0> under clifford_class(n).
uint64_t stabilizer_state_count(int n);

/// 2^n prod_{j=1}^n (2^j + 1).
uint64_t stabilizer_state_count_formula(int n);

/// IQP channels H^n D H^n where D = prod Z_i^{a_i} prod CZ_ij^{b_ij} with at
/// least one CZ. Canonical form is the pair of placement subsets.
CircuitClass iqp_class(int n);

/// iqp_class(n) extended by up to k CCZ placements inside the diagonal layer.
/// The depth cap is recorded in the provenance only; the canonical form makes
/// word length irrelevant.
CircuitClass iqp_ccz_class(int n, int k, int depth);

/// |I| * sum_{j<=k} C(C(n,3), j).
uint64_t class_size_bound_iqp(int n, int k);

inline constexpr uint64_t kDefaultWordBudget = 1'000'000;

/// Channels expressible as products of at most `depth` factors drawn from
/// base + {psi}, with at most `k` factors equal to psi. Products are built
/// length by length; any order of psi and base factors is allowed.
CircuitClass augment(const CircuitClass &base, const QuantumChannel &psi, int k, int depth,
                     uint64_t word_budget = kDefaultWordBudget);

/// Builds the class a spec describes. Throws config_error for custom specs.
CircuitClass build_class(const ClassSpec &spec);

/// Structured manifest: spec, size and ordered labels; superoperators are
/// embedded when `with_payload`.
std::string class_manifest(const CircuitClass &cls, bool with_payload = false);

}  // namespace qrc
