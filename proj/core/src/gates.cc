#include "qrc/gates.h"

#include <cctype>
#include <cmath>
#include <numbers>

#include "qrc/errors.h"

namespace qrc::gates {

namespace {

cmatrix diag(std::initializer_list<complex_t> entries) {
    cmatrix m = cmatrix::Zero(static_cast<Eigen::Index>(entries.size()),
                              static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (auto e : entries) {
        m(i, i) = e;
        ++i;
    }
    return m;
}

}  // namespace

cmatrix I1() { return cmatrix::Identity(2, 2); }

cmatrix X() {
    cmatrix m = cmatrix::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1.0;
    return m;
}

cmatrix Y() {
    cmatrix m = cmatrix::Zero(2, 2);
    m(0, 1) = complex_t(0, -1);
    m(1, 0) = complex_t(0, 1);
    return m;
}

cmatrix Z() { return diag({1.0, -1.0}); }

cmatrix H() {
    const double r = 1.0 / std::numbers::sqrt2;
    cmatrix m(2, 2);
    m << r, r, r, -r;
    return m;
}

cmatrix S() { return diag({1.0, complex_t(0, 1)}); }
cmatrix Sdg() { return diag({1.0, complex_t(0, -1)}); }
cmatrix T() { return diag({1.0, std::polar(1.0, std::numbers::pi / 4)}); }
cmatrix Tdg() { return diag({1.0, std::polar(1.0, -std::numbers::pi / 4)}); }

cmatrix CNOT() {
    cmatrix m = cmatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
}

cmatrix CZ() { return diag({1.0, 1.0, 1.0, -1.0}); }
cmatrix CCZ() { return diag({1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -1.0}); }

cmatrix embed(const cmatrix &u, const std::vector<int> &qubits, int n) {
    const int k = static_cast<int>(qubits.size());
    if (u.rows() != (Eigen::Index{1} << k) || u.cols() != u.rows()) {
        throw guard_error("gate size does not match its qubit list");
    }
    for (size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= n) {
            throw guard_error("gate qubit index " + std::to_string(qubits[i]) + " out of range");
        }
        for (size_t j = 0; j < i; ++j) {
            if (qubits[i] == qubits[j]) {
                throw guard_error("gate acts twice on qubit " + std::to_string(qubits[i]));
            }
        }
    }
    const Eigen::Index d = Eigen::Index{1} << n;
    auto local_index = [&](Eigen::Index global) {
        Eigen::Index r = 0;
        for (int q : qubits) {
            r = (r << 1) | ((global >> (n - 1 - q)) & 1);
        }
        return r;
    };
    Eigen::Index mask = 0;
    for (int q : qubits) {
        mask |= Eigen::Index{1} << (n - 1 - q);
    }
    cmatrix out = cmatrix::Zero(d, d);
    for (Eigen::Index row = 0; row < d; ++row) {
        for (Eigen::Index col = 0; col < d; ++col) {
            if ((row & ~mask) != (col & ~mask)) {
                continue;
            }
            out(row, col) = u(local_index(row), local_index(col));
        }
    }
    return out;
}

cmatrix phase_polynomial(const std::vector<std::vector<int>> &monomials, int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    cmatrix out = cmatrix::Zero(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
        int parity = 0;
        for (const auto &mono : monomials) {
            int term = 1;
            for (int q : mono) {
                term &= static_cast<int>((x >> (n - 1 - q)) & 1);
            }
            parity ^= term;
        }
        out(x, x) = parity ? -1.0 : 1.0;
    }
    return out;
}

cmatrix hadamard_layer(int n) {
    cmatrix out = cmatrix::Identity(1, 1);
    const cmatrix h = H();
    for (int q = 0; q < n; ++q) {
        cmatrix k(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            for (Eigen::Index j = 0; j < out.cols(); ++j) {
                k.block(i * 2, j * 2, 2, 2) = out(i, j) * h;
            }
        }
        out = std::move(k);
    }
    return out;
}

cmatrix parse_gate(std::string_view token, int n) {
    size_t split = 0;
    while (split < token.size() && !std::isdigit(static_cast<unsigned char>(token[split]))) {
        ++split;
    }
    std::string name(token.substr(0, split));
    std::vector<int> qubits;
    for (char c : token.substr(split)) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw config_error("malformed gate token '" + std::string(token) + "'");
        }
        qubits.push_back(c - '0');
    }

    cmatrix u;
    int arity = 1;
    if (name == "I") {
        u = I1();
    } else if (name == "X") {
        u = X();
    } else if (name == "Y") {
        u = Y();
    } else if (name == "Z") {
        u = Z();
    } else if (name == "H") {
        u = H();
    } else if (name == "S") {
        u = S();
    } else if (name == "Sdg") {
        u = Sdg();
    } else if (name == "T") {
        u = T();
    } else if (name == "Tdg") {
        u = Tdg();
    } else if (name == "CX" || name == "CNOT") {
        u = CNOT();
        arity = 2;
    } else if (name == "CZ") {
        u = CZ();
        arity = 2;
    } else if (name == "CCZ") {
        u = CCZ();
        arity = 3;
    } else {
        throw config_error("unknown gate '" + name + "'");
    }

    if (qubits.empty()) {
        if (arity != n) {
            throw config_error("gate '" + std::string(token) + "' needs explicit qubit indices on " +
                               std::to_string(n) + " qubits");
        }
        for (int q = 0; q < arity; ++q) {
            qubits.push_back(q);
        }
    }
    if (static_cast<int>(qubits.size()) != arity) {
        throw config_error("gate '" + std::string(token) + "' has wrong number of qubit indices");
    }
    try {
        return embed(u, qubits, n);
    } catch (const guard_error &e) {
        throw config_error("gate '" + std::string(token) + "': " + e.what());
    }
}

cmatrix parse_word(std::string_view word, int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    cmatrix u = cmatrix::Identity(d, d);
    size_t pos = 0;
    bool any = false;
    while (pos <= word.size()) {
        size_t end = word.find_first_of(". \t", pos);
        if (end == std::string_view::npos) {
            end = word.size();
        }
        std::string_view token = word.substr(pos, end - pos);
        if (!token.empty()) {
            u = parse_gate(token, n) * u;
            any = true;
        }
        pos = end + 1;
    }
    if (!any) {
        throw config_error("empty gate word");
    }
    return u;
}

QuantumChannel word_channel(std::string_view word, int n) {
    return unitary_channel(parse_word(word, n), std::string(word));
}

}  // namespace qrc::gates
