#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qrc/rng.h"

namespace qrc {

using complex_t = std::complex<double>;
using cmatrix = Eigen::MatrixXcd;
using rmatrix = Eigen::MatrixXd;
using rvector = Eigen::VectorXd;

/// Largest qubit count any dense routine accepts (64x64 density matrices,
/// 256x256 superoperators).
inline constexpr int kMaxQubits = 4;

/// Computational-basis label. Bit 0 is the most significant bit of the basis
/// index and corresponds to the leftmost tensor factor.
class BitString {
   public:
    BitString() = default;
    explicit BitString(std::vector<uint8_t> bits);

    static BitString from_index(uint64_t index, int n);
    /// Parses strings such as "011".
    static BitString parse(std::string_view text);

    int size() const { return static_cast<int>(bits_.size()); }
    uint64_t index() const;
    uint8_t operator[](int i) const { return bits_[static_cast<size_t>(i)]; }
    std::string str() const;

    bool operator==(const BitString &other) const = default;
    auto operator<=>(const BitString &other) const = default;

   private:
    std::vector<uint8_t> bits_;
};

/// One sample z = (x, y): input basis state x and observed output y.
struct SamplePair {
    BitString x;
    BitString y;
    bool operator==(const SamplePair &other) const = default;
};

/// Ordered multiset of samples of uniform dimension.
class SampleSet {
   public:
    SampleSet() = default;
    explicit SampleSet(std::vector<SamplePair> samples);

    int num_qubits() const { return n_; }
    size_t size() const { return samples_.size(); }
    const SamplePair &operator[](size_t i) const { return samples_[i]; }
    const std::vector<SamplePair> &samples() const { return samples_; }
    auto begin() const { return samples_.begin(); }
    auto end() const { return samples_.end(); }
    std::string str() const;

   private:
    int n_ = 0;
    std::vector<SamplePair> samples_;
};

class DensityMatrix {
   public:
    explicit DensityMatrix(cmatrix rho);

    int num_qubits() const { return n_; }
    const cmatrix &matrix() const { return rho_; }
    /// Hermitian, unit trace and PSD, each within `tol`.
    bool is_valid(double tol = 1e-10) const;

   private:
    int n_;
    cmatrix rho_;
};

/// Linear map on n-qubit operators stored as a 4^n x 4^n superoperator acting
/// on column-stacked operators: vec(Phi(rho)) = superop * vec(rho).
class QuantumChannel {
   public:
    QuantumChannel() = default;
    QuantumChannel(int n, cmatrix superop, std::string label = {});

    static QuantumChannel identity(int n);

    int num_qubits() const { return n_; }
    Eigen::Index dim() const { return Eigen::Index{1} << n_; }
    const cmatrix &superop() const { return superop_; }
    const std::string &label() const { return label_; }
    QuantumChannel with_label(std::string label) const;

    cmatrix apply(const cmatrix &rho) const;
    DensityMatrix apply(const DensityMatrix &rho) const;

   private:
    int n_ = 0;
    cmatrix superop_;
    std::string label_;
};

struct FunctionVector {
    rvector values;
    std::string channel_label;
};

DensityMatrix basis_state(const BitString &x);

/// Channel rho -> U rho U^dagger. Throws guard_error if U is not unitary
/// within 1e-10 or its dimension is not a power of two.
QuantumChannel unitary_channel(const cmatrix &u, std::string label = {});

/// Sequential composition: `a` applied after `b`. Label is "b.a" (time order).
QuantumChannel compose(const QuantumChannel &a, const QuantumChannel &b);

/// a on the leading qubits, b on the trailing ones.
QuantumChannel tensor(const QuantumChannel &a, const QuantumChannel &b);

/// (Phi (x) I)(|L><L|) with |L> = 2^{-n/2} sum_x |x>|x>.
cmatrix choi(const QuantumChannel &phi);

/// Transition probability Tr[Phi(|x><x|) |y><y|].
double eval_f(const QuantumChannel &phi, const BitString &x, const BitString &y);

/// Same quantity read off the Choi matrix: 2^n Tr[C (|y><y| (x) |x><x|)].
/// The output register is the first tensor factor of C, so y goes first.
double eval_f_choi(const QuantumChannel &phi, const BitString &x, const BitString &y);

FunctionVector function_vector(const QuantumChannel &phi, const SampleSet &samples);

/// max |vec(I)^T S - vec(I)^T|; zero iff the map is trace preserving.
double trace_preservation_residual(const QuantumChannel &phi);

/// Smallest eigenvalue of the Hermitian part of the Choi matrix.
double choi_min_eigenvalue(const QuantumChannel &phi);

bool is_cptp(const QuantumChannel &phi, double tol = 1e-10);

/// Real 4^n x 4^n matrix R_ij = Tr[P_i Phi(P_j)] / 2^n over the n-qubit Pauli
/// basis ordered I,X,Y,Z per qubit with qubit 0 most significant.
rmatrix pauli_transfer_matrix(const QuantumChannel &phi);

/// n-qubit Pauli basis in the order used by pauli_transfer_matrix.
std::vector<cmatrix> pauli_basis(int n);

/// Max-entry superoperator distance.
double channel_distance(const QuantumChannel &a, const QuantumChannel &b);

/// Default tolerance for channel equality.
inline constexpr double kChannelTol = 1e-9;

/// sum_i coeffs[i] * channels[i]. Not necessarily CPTP.
QuantumChannel linear_combination(std::span<const double> coeffs,
                                  std::span<const QuantumChannel> channels,
                                  std::string label = {});

/// Haar-random unitary channel.
QuantumChannel random_unitary_channel(int n, Rng &rng);

/// Random CPTP map with `rank` Kraus operators from a Ginibre-distributed isometry.
QuantumChannel random_kraus_channel(int n, int rank, Rng &rng);

/// Text serialization: a JSON object {"n", "label", "superop"} with superop a
/// row-major list of [re, im] pairs. Doubles are written with round-trip
/// precision, so parse(serialize(c)) reproduces c bit for bit.
std::string serialize_channel(const QuantumChannel &phi);
QuantumChannel parse_channel(std::string_view text);

}  // namespace qrc
