#include "qrc/learn.h"

#include <cmath>

#include "qrc/errors.h"
#include "qrc/robustness.h"

namespace qrc {

LearningTask LearningTask::consistent(const QuantumChannel &target, size_t m, double delta) {
    const size_t d = size_t{1} << target.num_qubits();
    std::vector<double> marginal(d, 1.0 / static_cast<double>(d));
    return LearningTask{SampleDistribution::from_channel(target, marginal), target, m, delta, 1.0};
}

double loss(const SamplePair &z, const QuantumChannel &phi) {
    return 1.0 - eval_f(phi, z.x, z.y);
}

double empirical_error(const SampleSet &samples, const QuantumChannel &phi) {
    double total = 0;
    for (const auto &z : samples) {
        total += loss(z, phi);
    }
    return total / static_cast<double>(samples.size());
}

double expected_error(const SampleDistribution &dist, const QuantumChannel &phi) {
    double total = 0;
    for (size_t i = 0; i < dist.support_size(); ++i) {
        total += dist.probability(i) * loss(dist.pair(i), phi);
    }
    return total;
}

ErmResult erm(const CircuitClass &cls, const SampleSet &samples) {
    if (cls.empty()) {
        throw guard_error("ERM over an empty class");
    }
    ErmResult best;
    best.empirical_error = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < cls.size(); ++i) {
        const double e = empirical_error(samples, cls[i]);
        if (e < best.empirical_error) {
            best.index = i;
            best.label = cls[i].label();
            best.empirical_error = e;
        }
    }
    return best;
}

double generalization_bound(double er_s, double complexity, double loss_bound, double delta,
                            size_t m) {
    if (!(delta > 0 && delta < 1)) {
        throw guard_error("confidence parameter delta must lie in (0, 1)");
    }
    if (m == 0) {
        throw guard_error("sample size must be positive");
    }
    if (!std::isfinite(er_s) || !std::isfinite(complexity) || !std::isfinite(loss_bound)) {
        throw guard_error("generalization bound inputs must be finite");
    }
    return er_s + 2.0 * loss_bound * complexity +
           3.0 * loss_bound * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(m)));
}

VectorSet loss_vectors(const CircuitClass &cls, const SampleSet &samples) {
    VectorSet set;
    for (const auto &c : cls) {
        set.push_back(rvector::Ones(static_cast<Eigen::Index>(samples.size())) -
                      function_vector(c, samples).values);
    }
    return dedupe_vectors(set);
}

PropositionReport check_proposition(const CircuitClass &free, const QuantumChannel &psi, int k,
                                    int depth, const LearningTask &task, uint64_t trials,
                                    uint64_t seed, std::optional<double> gamma_psi,
                                    std::optional<double> gamma_max) {
    if (trials == 0) {
        throw guard_error("check_proposition needs at least one trial");
    }
    if (!(task.delta > 0 && task.delta < 1)) {
        throw guard_error("confidence parameter delta must lie in (0, 1)");
    }
    if (task.dist.num_qubits() != free.num_qubits()) {
        throw guard_error("task and class qubit counts differ");
    }

    PropositionReport report;
    report.k = k;
    report.depth = depth;
    report.m = task.m;
    report.delta = task.delta;
    report.seed = seed;
    report.resource = psi.label();
    report.trials = trials;

    const CircuitClass hypotheses = augment(free, psi, k, depth);
    report.class_spec = hypotheses.spec().str();
    report.class_size = hypotheses.size();

    if (gamma_psi) {
        report.gamma_psi = *gamma_psi;
    } else {
        const RobustnessResult rob = free_robustness(psi, free);
        if (rob.status != RobustnessResult::Status::optimal) {
            throw numerical_error("resource channel is outside the span of the free class");
        }
        report.gamma_psi = rob.lambda_star;
    }
    report.gamma_star = gamma_star(report.gamma_psi, gamma_max, k);

    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng = make_rng(seed, t);
        const SampleSet samples = task.dist.draw(task.m, rng);
        const ErmResult best = erm(hypotheses, samples);

        PropositionTrial row;
        row.trial = t;
        row.erm_label = best.label;
        row.er_s = best.empirical_error;
        row.er_d = expected_error(task.dist, hypotheses[best.index]);
        row.r_free = rademacher_set_exact(class_vectors(free, samples));
        // 2 gamma* R_S(F(O)) in place of 2 B R_S(l_F) with B = 1.
        row.bound = generalization_bound(row.er_s, report.gamma_star * row.r_free, task.loss_bound,
                                         task.delta, task.m);
        row.satisfied = row.er_d <= row.bound + kInequalitySlack;
        report.satisfied += row.satisfied ? 1 : 0;
        report.rows.push_back(std::move(row));
    }
    report.fraction = static_cast<double>(report.satisfied) / static_cast<double>(trials);
    report.standard_error =
        std::sqrt(task.delta * (1.0 - task.delta) / static_cast<double>(trials));
    report.threshold = 1.0 - task.delta - 3.0 * report.standard_error;
    report.holds = report.fraction >= report.threshold;
    return report;
}

}  // namespace qrc
