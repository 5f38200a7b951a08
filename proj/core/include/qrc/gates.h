#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qrc/qcore.h"

namespace qrc::gates {

cmatrix I1();
cmatrix X();
cmatrix Y();
cmatrix Z();
cmatrix H();
cmatrix S();
cmatrix Sdg();
cmatrix T();
cmatrix Tdg();
/// Control on the first factor.
cmatrix CNOT();
cmatrix CZ();
cmatrix CCZ();

/// Places a k-qubit unitary on `qubits` (in that order) of an n-qubit register.
cmatrix embed(const cmatrix &u, const std::vector<int> &qubits, int n);

/// Diagonal unitary with entries (-1)^{p(x)} where p is the sum over `monomials`
/// of the product of the listed bits. Encodes any product of Z/CZ/CCZ gates.
cmatrix phase_polynomial(const std::vector<std::vector<int>> &monomials, int n);

/// H on every qubit.
cmatrix hadamard_layer(int n);

/// Parses one gate token such as "H", "T0", "CX01", "CZ12", "CCZ012" on an
/// n-qubit register. Single-qubit names without an index are allowed when n == 1.
cmatrix parse_gate(std::string_view token, int n);

/// Parses a word of gate tokens separated by '.' or whitespace, applied left
/// to right in time, e.g. "H.T.H". Returns the product unitary.
cmatrix parse_word(std::string_view word, int n);

/// Channel for a gate word, labelled with the word itself.
QuantumChannel word_channel(std::string_view word, int n);

}  // namespace qrc::gates
