#include "qrc/qcore.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "qrc/errors.h"

namespace qrc {

namespace {

int qubits_for_dim(Eigen::Index dim) {
    if (dim <= 0 || !std::has_single_bit(static_cast<uint64_t>(dim))) {
        throw guard_error("matrix dimension " + std::to_string(dim) + " is not a power of two");
    }
    int n = std::countr_zero(static_cast<uint64_t>(dim));
    if (n > kMaxQubits) {
        throw guard_error("qubit count " + std::to_string(n) + " exceeds supported maximum " +
                          std::to_string(kMaxQubits));
    }
    return n;
}

void require_qubits(const QuantumChannel &phi, const BitString &b, const char *what) {
    if (b.size() != phi.num_qubits()) {
        throw guard_error(std::string(what) + " has " + std::to_string(b.size()) +
                          " bits but the channel acts on " + std::to_string(phi.num_qubits()) +
                          " qubits");
    }
}

Eigen::Map<const Eigen::VectorXcd> vec(const cmatrix &m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

// Permutation P with vec(A (x) B) = P (vec A (x) vec B), column stacking.
Eigen::PermutationMatrix<Eigen::Dynamic> tensor_vec_permutation(Eigen::Index da, Eigen::Index db) {
    const Eigen::Index d = da * db;
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(d * d);
    for (Eigen::Index ca = 0; ca < da; ++ca) {
        for (Eigen::Index ra = 0; ra < da; ++ra) {
            for (Eigen::Index cb = 0; cb < db; ++cb) {
                for (Eigen::Index rb = 0; rb < db; ++rb) {
                    Eigen::Index src = (ca * da + ra) * (db * db) + (cb * db + rb);
                    Eigen::Index row = ra * db + rb;
                    Eigen::Index col = ca * db + cb;
                    perm.indices()[src] = static_cast<int>(col * d + row);
                }
            }
        }
    }
    return perm;
}

cmatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng &rng) {
    cmatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            double re = standard_normal(rng);
            double im = standard_normal(rng);
            g(i, j) = complex_t(re, im);
        }
    }
    return g;
}

}  // namespace

// BitString ------------------------------------------------------------------

BitString::BitString(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) {
            throw guard_error("bit values must be 0 or 1");
        }
    }
}

BitString BitString::from_index(uint64_t index, int n) {
    if (n < 0 || n > 63 || (n < 63 && index >> n)) {
        throw guard_error("index " + std::to_string(index) + " does not fit in " +
                          std::to_string(n) + " bits");
    }
    std::vector<uint8_t> bits(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        bits[static_cast<size_t>(i)] = static_cast<uint8_t>((index >> (n - 1 - i)) & 1U);
    }
    return BitString(std::move(bits));
}

BitString BitString::parse(std::string_view text) {
    std::vector<uint8_t> bits;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw guard_error("invalid bit string '" + std::string(text) + "'");
        }
        bits.push_back(static_cast<uint8_t>(c - '0'));
    }
    return BitString(std::move(bits));
}

uint64_t BitString::index() const {
    uint64_t r = 0;
    for (auto b : bits_) {
        r = (r << 1) | b;
    }
    return r;
}

std::string BitString::str() const {
    std::string s;
    for (auto b : bits_) {
        s.push_back(static_cast<char>('0' + b));
    }
    return s;
}

// SampleSet ------------------------------------------------------------------

SampleSet::SampleSet(std::vector<SamplePair> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) {
        throw guard_error("a sample set needs at least one sample");
    }
    n_ = samples_.front().x.size();
    for (const auto &z : samples_) {
        if (z.x.size() != n_ || z.y.size() != n_) {
            throw guard_error("sample set has non-uniform dimensions");
        }
    }
}

std::string SampleSet::str() const {
    std::string s;
    for (size_t i = 0; i < samples_.size(); ++i) {
        if (i) {
            s += ' ';
        }
        s += samples_[i].x.str() + ':' + samples_[i].y.str();
    }
    return s;
}

// DensityMatrix --------------------------------------------------------------

DensityMatrix::DensityMatrix(cmatrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) {
        throw guard_error("density matrix must be square");
    }
    n_ = qubits_for_dim(rho_.rows());
}

bool DensityMatrix::is_valid(double tol) const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) {
        return false;
    }
    if (std::abs(rho_.trace() - complex_t(1.0)) > tol) {
        return false;
    }
    cmatrix herm = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<cmatrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

// QuantumChannel -------------------------------------------------------------

QuantumChannel::QuantumChannel(int n, cmatrix superop, std::string label)
    : n_(n), superop_(std::move(superop)), label_(std::move(label)) {
    if (n < 0 || n > kMaxQubits) {
        throw guard_error("qubit count " + std::to_string(n) + " out of range");
    }
    const Eigen::Index d2 = Eigen::Index{1} << (2 * n);
    if (superop_.rows() != d2 || superop_.cols() != d2) {
        throw guard_error("superoperator shape does not match qubit count");
    }
}

QuantumChannel QuantumChannel::identity(int n) {
    const Eigen::Index d2 = Eigen::Index{1} << (2 * n);
    return QuantumChannel(n, cmatrix::Identity(d2, d2), "I");
}

QuantumChannel QuantumChannel::with_label(std::string label) const {
    QuantumChannel c = *this;
    c.label_ = std::move(label);
    return c;
}

cmatrix QuantumChannel::apply(const cmatrix &rho) const {
    const Eigen::Index d = dim();
    if (rho.rows() != d || rho.cols() != d) {
        throw guard_error("operator dimension does not match channel");
    }
    Eigen::VectorXcd out = superop_ * vec(rho);
    return Eigen::Map<cmatrix>(out.data(), d, d);
}

DensityMatrix QuantumChannel::apply(const DensityMatrix &rho) const {
    return DensityMatrix(apply(rho.matrix()));
}

// Operations -----------------------------------------------------------------

DensityMatrix basis_state(const BitString &x) {
    const Eigen::Index d = Eigen::Index{1} << x.size();
    cmatrix rho = cmatrix::Zero(d, d);
    auto i = static_cast<Eigen::Index>(x.index());
    rho(i, i) = 1.0;
    return DensityMatrix(std::move(rho));
}

QuantumChannel unitary_channel(const cmatrix &u, std::string label) {
    if (u.rows() != u.cols()) {
        throw guard_error("unitary must be square");
    }
    int n = qubits_for_dim(u.rows());
    double err = (u.adjoint() * u - cmatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-10) {
        throw guard_error("matrix is not unitary (deviation " + std::to_string(err) + ")");
    }
    // vec(U rho U^dag) = (conj(U) (x) U) vec(rho) under column stacking.
    cmatrix conj_u = u.conjugate();
    const Eigen::Index d = u.rows();
    cmatrix s(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            s.block(i * d, j * d, d, d) = conj_u(i, j) * u;
        }
    }
    return QuantumChannel(n, std::move(s), std::move(label));
}

QuantumChannel compose(const QuantumChannel &a, const QuantumChannel &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw guard_error("cannot compose channels on " + std::to_string(a.num_qubits()) + " and " +
                          std::to_string(b.num_qubits()) + " qubits");
    }
    std::string label;
    if (b.label().empty() || b.label() == "I") {
        label = a.label();
    } else if (a.label().empty() || a.label() == "I") {
        label = b.label();
    } else {
        label = b.label() + "." + a.label();
    }
    return QuantumChannel(a.num_qubits(), a.superop() * b.superop(), std::move(label));
}

QuantumChannel tensor(const QuantumChannel &a, const QuantumChannel &b) {
    const int n = a.num_qubits() + b.num_qubits();
    if (n > kMaxQubits) {
        throw guard_error("tensor product exceeds supported qubit count");
    }
    const cmatrix kron = [&] {
        const cmatrix &sa = a.superop();
        const cmatrix &sb = b.superop();
        cmatrix k(sa.rows() * sb.rows(), sa.cols() * sb.cols());
        for (Eigen::Index i = 0; i < sa.rows(); ++i) {
            for (Eigen::Index j = 0; j < sa.cols(); ++j) {
                k.block(i * sb.rows(), j * sb.cols(), sb.rows(), sb.cols()) = sa(i, j) * sb;
            }
        }
        return k;
    }();
    auto perm = tensor_vec_permutation(a.dim(), b.dim());
    cmatrix s = perm * kron * perm.transpose();
    std::string label = "(" + a.label() + ")x(" + b.label() + ")";
    return QuantumChannel(n, std::move(s), std::move(label));
}

cmatrix choi(const QuantumChannel &phi) {
    const Eigen::Index d = phi.dim();
    cmatrix c = cmatrix::Zero(d * d, d * d);
    cmatrix e = cmatrix::Zero(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
        for (Eigen::Index xp = 0; xp < d; ++xp) {
            e(x, xp) = 1.0;
            cmatrix out = phi.apply(e);
            e(x, xp) = 0.0;
            // Phi(|x><x'|) (x) |x><x'|, output register first.
            for (Eigen::Index r = 0; r < d; ++r) {
                for (Eigen::Index s = 0; s < d; ++s) {
                    c(r * d + x, s * d + xp) += out(r, s);
                }
            }
        }
    }
    return c / static_cast<double>(d);
}

double eval_f(const QuantumChannel &phi, const BitString &x, const BitString &y) {
    require_qubits(phi, x, "input x");
    require_qubits(phi, y, "output y");
    const Eigen::Index d = phi.dim();
    const auto xi = static_cast<Eigen::Index>(x.index());
    const auto yi = static_cast<Eigen::Index>(y.index());
    // Only column vec(|x><x|) = e_{x*d+x} of the superoperator is needed.
    return phi.superop()(yi * d + yi, xi * d + xi).real();
}

double eval_f_choi(const QuantumChannel &phi, const BitString &x, const BitString &y) {
    require_qubits(phi, x, "input x");
    require_qubits(phi, y, "output y");
    const Eigen::Index d = phi.dim();
    cmatrix c = choi(phi);
    const auto xi = static_cast<Eigen::Index>(x.index());
    const auto yi = static_cast<Eigen::Index>(y.index());
    const Eigen::Index k = yi * d + xi;
    return static_cast<double>(d) * c(k, k).real();
}

FunctionVector function_vector(const QuantumChannel &phi, const SampleSet &samples) {
    FunctionVector fv;
    fv.values.resize(static_cast<Eigen::Index>(samples.size()));
    for (size_t i = 0; i < samples.size(); ++i) {
        fv.values[static_cast<Eigen::Index>(i)] = eval_f(phi, samples[i].x, samples[i].y);
    }
    fv.channel_label = phi.label();
    return fv;
}

double trace_preservation_residual(const QuantumChannel &phi) {
    const Eigen::Index d = phi.dim();
    Eigen::RowVectorXcd id_row = Eigen::RowVectorXcd::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        id_row[i * d + i] = 1.0;
    }
    return (id_row * phi.superop() - id_row).cwiseAbs().maxCoeff();
}

double choi_min_eigenvalue(const QuantumChannel &phi) {
    cmatrix c = choi(phi);
    cmatrix herm = 0.5 * (c + c.adjoint());
    Eigen::SelfAdjointEigenSolver<cmatrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_cptp(const QuantumChannel &phi, double tol) {
    if (trace_preservation_residual(phi) >= tol) {
        return false;
    }
    cmatrix c = choi(phi);
    if ((c - c.adjoint()).cwiseAbs().maxCoeff() >= tol) {
        return false;
    }
    return choi_min_eigenvalue(phi) >= -tol;
}

std::vector<cmatrix> pauli_basis(int n) {
    cmatrix p[4];
    p[0] = cmatrix::Identity(2, 2);
    p[1] = cmatrix::Zero(2, 2);
    p[1](0, 1) = p[1](1, 0) = 1.0;
    p[2] = cmatrix::Zero(2, 2);
    p[2](0, 1) = complex_t(0, -1);
    p[2](1, 0) = complex_t(0, 1);
    p[3] = cmatrix::Zero(2, 2);
    p[3](0, 0) = 1.0;
    p[3](1, 1) = -1.0;

    std::vector<cmatrix> basis{cmatrix::Identity(1, 1)};
    for (int q = 0; q < n; ++q) {
        std::vector<cmatrix> next;
        next.reserve(basis.size() * 4);
        for (const auto &b : basis) {
            for (const auto &single : p) {
                cmatrix k(b.rows() * 2, b.cols() * 2);
                for (Eigen::Index i = 0; i < b.rows(); ++i) {
                    for (Eigen::Index j = 0; j < b.cols(); ++j) {
                        k.block(i * 2, j * 2, 2, 2) = b(i, j) * single;
                    }
                }
                next.push_back(std::move(k));
            }
        }
        basis = std::move(next);
    }
    return basis;
}

rmatrix pauli_transfer_matrix(const QuantumChannel &phi) {
    const auto basis = pauli_basis(phi.num_qubits());
    const auto count = static_cast<Eigen::Index>(basis.size());
    const double inv_d = 1.0 / static_cast<double>(phi.dim());
    rmatrix r(count, count);
    for (Eigen::Index j = 0; j < count; ++j) {
        cmatrix out = phi.apply(basis[static_cast<size_t>(j)]);
        for (Eigen::Index i = 0; i < count; ++i) {
            // Tr[P_i^dag X] = sum conj(P_i) .* X; Paulis are Hermitian.
            complex_t tr = (basis[static_cast<size_t>(i)].conjugate().array() * out.array()).sum();
            r(i, j) = tr.real() * inv_d;
        }
    }
    return r;
}

double channel_distance(const QuantumChannel &a, const QuantumChannel &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw guard_error("channel distance needs equal qubit counts");
    }
    return (a.superop() - b.superop()).cwiseAbs().maxCoeff();
}

QuantumChannel linear_combination(std::span<const double> coeffs,
                                  std::span<const QuantumChannel> channels, std::string label) {
    if (coeffs.size() != channels.size() || channels.empty()) {
        throw guard_error("linear combination needs one coefficient per channel");
    }
    const int n = channels.front().num_qubits();
    cmatrix s = cmatrix::Zero(channels.front().superop().rows(), channels.front().superop().cols());
    for (size_t i = 0; i < channels.size(); ++i) {
        if (channels[i].num_qubits() != n) {
            throw guard_error("linear combination over channels of different sizes");
        }
        s += coeffs[i] * channels[i].superop();
    }
    return QuantumChannel(n, std::move(s), std::move(label));
}

QuantumChannel random_unitary_channel(int n, Rng &rng) {
    const Eigen::Index d = Eigen::Index{1} << n;
    cmatrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<cmatrix> qr(g);
    cmatrix q = qr.householderQ() * cmatrix::Identity(d, d);
    cmatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases of R's diagonal so Q is Haar distributed.
    for (Eigen::Index i = 0; i < d; ++i) {
        complex_t rii = r(i, i);
        double mag = std::abs(rii);
        if (mag > 0) {
            q.col(i) *= rii / mag;
        }
    }
    return unitary_channel(q, "haar");
}

QuantumChannel random_kraus_channel(int n, int rank, Rng &rng) {
    if (rank < 1) {
        throw guard_error("Kraus rank must be positive");
    }
    const Eigen::Index d = Eigen::Index{1} << n;
    cmatrix g = ginibre(d * rank, d, rng);
    // Isometry V = G (G^dag G)^{-1/2}; Kraus operators are its d x d blocks.
    Eigen::SelfAdjointEigenSolver<cmatrix> es(g.adjoint() * g);
    cmatrix inv_sqrt = es.eigenvectors() *
                       es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                       es.eigenvectors().adjoint();
    cmatrix v = g * inv_sqrt;
    cmatrix s = cmatrix::Zero(d * d, d * d);
    for (int k = 0; k < rank; ++k) {
        cmatrix kr = v.block(k * d, 0, d, d);
        cmatrix conj_k = kr.conjugate();
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                s.block(i * d, j * d, d, d) += conj_k(i, j) * kr;
            }
        }
    }
    return QuantumChannel(n, std::move(s), "kraus" + std::to_string(rank));
}

std::string serialize_channel(const QuantumChannel &phi) {
    nlohmann::ordered_json j;
    j["n"] = phi.num_qubits();
    j["label"] = phi.label();
    auto entries = nlohmann::ordered_json::array();
    const cmatrix &s = phi.superop();
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
        for (Eigen::Index c = 0; c < s.cols(); ++c) {
            entries.push_back({s(r, c).real(), s(r, c).imag()});
        }
    }
    j["superop"] = std::move(entries);
    return j.dump();
}

QuantumChannel parse_channel(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw guard_error(std::string("malformed channel record: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("superop")) {
        throw guard_error("channel record needs 'n' and 'superop'");
    }
    const int n = j.at("n").get<int>();
    if (n < 0 || n > kMaxQubits) {
        throw guard_error("channel record qubit count out of range");
    }
    const Eigen::Index d2 = Eigen::Index{1} << (2 * n);
    const auto &entries = j.at("superop");
    if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != d2 * d2) {
        throw guard_error("channel record has wrong number of superoperator entries");
    }
    cmatrix s(d2, d2);
    for (Eigen::Index r = 0; r < d2; ++r) {
        for (Eigen::Index c = 0; c < d2; ++c) {
            const auto &e = entries[static_cast<size_t>(r * d2 + c)];
            s(r, c) = complex_t(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    std::string label = j.value("label", std::string{});
    return QuantumChannel(n, std::move(s), std::move(label));
}

}  // namespace qrc
