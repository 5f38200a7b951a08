#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrc/classes.h"
#include "qrc/complexity.h"
#include "qrc/qcore.h"

namespace qrc {

/// Synthetic supervised task: samples (x, y) ~ dist, labels generated by
/// `target` through dist's construction.
struct LearningTask {
    SampleDistribution dist;
    QuantumChannel target;
    size_t m = 1;
    double delta = 0.1;
    /// Range bound of the loss; losses are probabilities so 1.
    double loss_bound = 1.0;

    /// x uniform, y ~ p_{target,x}.
    static LearningTask consistent(const QuantumChannel &target, size_t m, double delta);
};

/// 1 - f_Phi(x, y).
double loss(const SamplePair &z, const QuantumChannel &phi);

/// Mean loss over the sample.
double empirical_error(const SampleSet &samples, const QuantumChannel &phi);

/// Exact expected loss under an explicit distribution.
double expected_error(const SampleDistribution &dist, const QuantumChannel &phi);

struct ErmResult {
    size_t index = 0;
    std::string label;
    double empirical_error = 0;
};

/// Minimizer of empirical_error over the class; ties go to the earliest element.
ErmResult erm(const CircuitClass &cls, const SampleSet &samples);

/// er_s + 2 B R + 3 B sqrt(ln(2/delta) / (2m)).
double generalization_bound(double er_s, double complexity, double loss_bound, double delta,
                            size_t m);

/// Loss vectors (1 - f_Phi(z_i))_i of every class element, deduplicated.
VectorSet loss_vectors(const CircuitClass &cls, const SampleSet &samples);

struct PropositionTrial {
    uint64_t trial = 0;
    std::string erm_label;
    double er_s = 0;
    double er_d = 0;
    double r_free = 0;
    double bound = 0;
    bool satisfied = false;
};

struct PropositionReport {
    int k = 0;
    int depth = 0;
    size_t m = 0;
    double delta = 0;
    uint64_t seed = 0;
    std::string class_spec;
    std::string resource;
    size_t class_size = 0;
    double gamma_psi = 0;
    double gamma_star = 0;
    uint64_t trials = 0;
    uint64_t satisfied = 0;
    double fraction = 0;
    double standard_error = 0;  // sqrt(delta (1 - delta) / trials)
    double threshold = 0;       // 1 - delta - 3 SE
    bool holds = false;
    std::vector<PropositionTrial> rows;
};

/// Per trial: draw S ~ D^m, run ERM over O_psi^(k) at depth cap L, and test
///   er_D <= er_S + 2 gamma* R_S(F(O)) + 3 sqrt(ln(2/delta) / (2m)).
/// gamma_psi defaults to the free robustness of psi relative to `free`.
PropositionReport check_proposition(const CircuitClass &free, const QuantumChannel &psi, int k,
                                    int depth, const LearningTask &task, uint64_t trials,
                                    uint64_t seed, std::optional<double> gamma_psi = std::nullopt,
                                    std::optional<double> gamma_max = std::nullopt);

}  // namespace qrc
