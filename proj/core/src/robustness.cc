#include "qrc/robustness.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "qrc/errors.h"

namespace qrc {

namespace {

double reconstruction_residual(const QuantumChannel &psi, const CircuitClass &free,
                               const std::vector<double> &p, const std::vector<double> &q) {
    cmatrix s = -psi.superop();
    for (size_t i = 0; i < free.size(); ++i) {
        const double w = p[i] - q[i];
        if (w != 0.0) {
            s += w * free[i].superop();
        }
    }
    return s.cwiseAbs().maxCoeff();
}

}  // namespace

RobustnessResult free_robustness(const QuantumChannel &psi, const CircuitClass &free, double tol,
                                 const LpOptions &options) {
    if (free.empty()) {
        throw guard_error("free class is empty");
    }
    if (psi.num_qubits() != free.num_qubits()) {
        throw guard_error("target and free class qubit counts differ");
    }

    RobustnessResult result;
    result.free_spec = free.spec().str();
    const size_t count = free.size();
    result.p.assign(count, 0.0);
    result.q.assign(count, 0.0);

    if (auto hit = free.find(psi)) {
        result.status = RobustnessResult::Status::optimal;
        result.p[*hit] = 1.0;
        result.short_circuit = true;
        result.residual = reconstruction_residual(psi, free, result.p, result.q);
        return result;
    }

    const rmatrix target = pauli_transfer_matrix(psi);
    const Eigen::Index entries = target.size();
    const auto cols = static_cast<Eigen::Index>(2 * count);

    LinearProgram lp;
    lp.objective = rvector::Zero(cols);
    lp.equality = rmatrix::Zero(entries + 1, cols);
    lp.rhs = rvector::Zero(entries + 1);
    for (size_t i = 0; i < count; ++i) {
        const rmatrix r = pauli_transfer_matrix(free[i]);
        const auto pi = static_cast<Eigen::Index>(i);
        const auto qi = static_cast<Eigen::Index>(count + i);
        for (Eigen::Index e = 0; e < entries; ++e) {
            const double v = r.data()[e];
            lp.equality(e, pi) = v;
            lp.equality(e, qi) = -v;
        }
        lp.equality(entries, pi) = 1.0;
        lp.equality(entries, qi) = -1.0;
        lp.objective[qi] = 1.0;
    }
    for (Eigen::Index e = 0; e < entries; ++e) {
        lp.rhs[e] = target.data()[e];
    }
    lp.rhs[entries] = 1.0;

    const LpSolution sol = lp_solve(lp, options);
    result.lp_iterations = sol.iterations;
    if (sol.status == LpStatus::infeasible) {
        result.status = RobustnessResult::Status::infeasible;
        return result;
    }
    if (sol.status != LpStatus::optimal) {
        throw numerical_error("robustness LP ended with status " + lp_status_name(sol.status));
    }
    double q_mass = 0;
    for (size_t i = 0; i < count; ++i) {
        result.p[i] = sol.x[static_cast<Eigen::Index>(i)];
        result.q[i] = sol.x[static_cast<Eigen::Index>(count + i)];
        q_mass += result.q[i];
    }
    result.lambda_star = std::max(0.0, q_mass);
    result.status = RobustnessResult::Status::optimal;
    result.residual = reconstruction_residual(psi, free, result.p, result.q);
    if (result.residual > tol) {
        throw numerical_error("robustness decomposition residual " + std::to_string(result.residual) +
                              " exceeds tolerance");
    }
    return result;
}

double verify_decomposition(const QuantumChannel &psi, std::span<const double> coeffs,
                            std::span<const QuantumChannel> channels) {
    for (const auto &c : channels) {
        if (c.num_qubits() != psi.num_qubits()) {
            throw guard_error("decomposition channels must match the target's qubit count");
        }
    }
    const QuantumChannel combo = linear_combination(coeffs, channels);
    return channel_distance(combo, psi);
}

GammaMaxEstimate gamma_max_lower_bound(const CircuitClass &free, int n, uint64_t n_probes,
                                       uint64_t seed, std::span<const QuantumChannel> extra_probes) {
    if (n != free.num_qubits()) {
        throw guard_error("qubit count does not match the free class");
    }
    GammaMaxEstimate est;
    auto probe = [&](const QuantumChannel &phi) {
        ++est.probes;
        const RobustnessResult r = free_robustness(phi, free);
        if (r.status == RobustnessResult::Status::optimal) {
            ++est.feasible;
            est.lower_bound = std::max(est.lower_bound, r.lambda_star);
        } else {
            ++est.infeasible;
        }
        est.running_max.push_back(est.lower_bound);
    };
    for (const auto &phi : extra_probes) {
        probe(phi);
    }
    for (uint64_t i = 0; i < n_probes; ++i) {
        Rng rng = make_rng(seed, i);
        probe(i % 2 == 0 ? random_unitary_channel(n, rng) : random_kraus_channel(n, 2, rng));
    }
    return est;
}

std::string robustness_record(const RobustnessResult &result, const QuantumChannel &psi,
                              const CircuitClass &free) {
    nlohmann::ordered_json j;
    j["target"] = psi.label();
    j["free"] = result.free_spec;
    j["free_size"] = free.size();
    j["status"] = result.status == RobustnessResult::Status::optimal ? "optimal" : "infeasible";
    j["lambda_star"] = result.lambda_star;
    j["residual"] = result.residual;
    j["lp_iterations"] = result.lp_iterations;
    j["short_circuit"] = result.short_circuit;
    auto terms = nlohmann::ordered_json::array();
    if (result.status == RobustnessResult::Status::optimal) {
        for (size_t i = 0; i < free.size(); ++i) {
            const double w = result.p[i] - result.q[i];
            if (result.p[i] != 0.0 || result.q[i] != 0.0) {
                terms.push_back({{"index", i},
                                 {"label", free[i].label()},
                                 {"p", result.p[i]},
                                 {"q", result.q[i]},
                                 {"coefficient", w}});
            }
        }
    }
    j["decomposition"] = std::move(terms);
    return j.dump(2);
}

}  // namespace qrc
