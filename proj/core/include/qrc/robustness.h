#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrc/classes.h"
#include "qrc/lp.h"
#include "qrc/qcore.h"

namespace qrc {

struct RobustnessResult {
    enum class Status { optimal, infeasible };

    Status status = Status::infeasible;
    /// Minimal negative weight; the decomposition is psi = sum_i (p_i - q_i) Phi_i.
    double lambda_star = 0;
    std::vector<double> p;  // mass 1 + lambda_star, indexed like the free class
    std::vector<double> q;  // mass lambda_star
    /// Max-entry superoperator residual of the reconstruction.
    double residual = 0;
    std::string free_spec;
    uint64_t lp_iterations = 0;
    /// psi matched a free element and the LP was skipped.
    bool short_circuit = false;
};

/// Free robustness of `psi` relative to Conv(free): the LP
///   min sum q  s.t.  sum_i (p_i - q_i) R(Phi_i) = R(psi),  sum p - sum q = 1,  p, q >= 0
/// posed on Pauli transfer matrices R. `tol` bounds the accepted residual.
RobustnessResult free_robustness(const QuantumChannel &psi, const CircuitClass &free,
                                 double tol = 1e-8, const LpOptions &options = {});

/// Max-entry superoperator residual of sum_i coeffs[i] channels[i] - psi.
double verify_decomposition(const QuantumChannel &psi, std::span<const double> coeffs,
                            std::span<const QuantumChannel> channels);

struct GammaMaxEstimate {
    double lower_bound = 0;
    uint64_t probes = 0;
    uint64_t feasible = 0;
    uint64_t infeasible = 0;
    /// Lower bound after each probe, in probe order.
    std::vector<double> running_max;
};

/// Max of free_robustness over `extra_probes` followed by n_probes seeded
/// random CPTP maps (even probe index: Haar unitary channel, odd: Kraus rank 2).
/// Probes outside the span of the free set are skipped and counted.
GammaMaxEstimate gamma_max_lower_bound(const CircuitClass &free, int n, uint64_t n_probes,
                                       uint64_t seed,
                                       std::span<const QuantumChannel> extra_probes = {});

/// Structured record of a robustness result, including the full decomposition.
std::string robustness_record(const RobustnessResult &result, const QuantumChannel &psi,
                              const CircuitClass &free);

}  // namespace qrc
