#include "qrc/robustness.h"

#include "gtest/gtest.h"

#include "qrc/gates.h"

using namespace qrc;

namespace {

QuantumChannel gate(std::string_view word, int n = 1) {
    return gates::word_channel(word, n);
}

const double kHalfRoot2 = std::sqrt(0.5);

}  // namespace

TEST(free_robustness, free_target_short_circuits) {
    RobustnessResult r = free_robustness(gate("H"), clifford_class(1));
    EXPECT_EQ(r.status, RobustnessResult::Status::optimal);
    EXPECT_EQ(r.lambda_star, 0.0);
    EXPECT_TRUE(r.short_circuit);
}

TEST(free_robustness, t_over_clifford) {
    CircuitClass c = clifford_class(1);
    RobustnessResult r = free_robustness(gate("T"), c);
    ASSERT_EQ(r.status, RobustnessResult::Status::optimal);
    EXPECT_LE(r.lambda_star, kHalfRoot2 + 1e-9);
    EXPECT_LT(r.residual, 1e-8);
    // The optimum over the 24 Clifford channels is (sqrt2 - 1) / 2.
    EXPECT_NEAR(r.lambda_star, (std::sqrt(2.0) - 1.0) / 2.0, 1e-9);
}

TEST(free_robustness, monotone_in_free_set) {
    CircuitClass small = dedupe({gate("S"), gate("Z"), gate("S.Z")});
    RobustnessResult r_small = free_robustness(gate("T"), small);
    RobustnessResult r_big = free_robustness(gate("T"), clifford_class(1));
    ASSERT_EQ(r_small.status, RobustnessResult::Status::optimal);
    EXPECT_NEAR(r_small.lambda_star, kHalfRoot2, 1e-9);
    EXPECT_LE(r_big.lambda_star, r_small.lambda_star + 1e-12);
}

TEST(free_robustness, infeasible_when_span_misses_target) {
    CircuitClass diag = dedupe({gate("I"), gate("Z")});
    RobustnessResult r = free_robustness(gate("H"), diag);
    EXPECT_EQ(r.status, RobustnessResult::Status::infeasible);
}

TEST(free_robustness, decomposition_soundness_on_states) {
    CircuitClass c = clifford_class(1);
    for (const char *w : {"T", "Tdg", "H.T", "T.H.T"}) {
        QuantumChannel psi = gate(w);
        RobustnessResult r = free_robustness(psi, c);
        ASSERT_EQ(r.status, RobustnessResult::Status::optimal);
        std::vector<double> coeffs;
        for (size_t i = 0; i < c.size(); ++i) {
            coeffs.push_back(r.p[i] - r.q[i]);
        }
        QuantumChannel combo = linear_combination(coeffs, c.channels());
        for (uint64_t s = 0; s < 100; ++s) {
            Rng rng = make_rng(12, s);
            cmatrix rho = random_kraus_channel(1, 2, rng).apply(basis_state(BitString::parse("0")).matrix());
            ASSERT_LT((combo.apply(rho) - psi.apply(rho)).cwiseAbs().maxCoeff(), 1e-8);
        }
        // Feasible mixture: (psi + sum q_i Phi_i) / (1 + lambda) lies in Conv(O).
        if (r.lambda_star > 0) {
            std::vector<double> pos;
            for (size_t i = 0; i < c.size(); ++i) {
                pos.push_back(r.p[i] / (1 + r.lambda_star));
            }
            EXPECT_TRUE(is_cptp(linear_combination(pos, c.channels()), 1e-8));
        }
    }
}

TEST(verify_decomposition, examples) {
    QuantumChannel t = gate("T");
    std::vector<QuantumChannel> chans{gate("S"), gate("Z"), gate("S.Z")};
    std::vector<double> corrected{0.5 + kHalfRoot2, -kHalfRoot2, 0.5};
    EXPECT_LT(verify_decomposition(t, corrected, chans), 1e-12);

    std::vector<double> perturbed = corrected;
    perturbed[1] += 0.01;
    EXPECT_GE(verify_decomposition(t, perturbed, chans), 0.001);

    std::vector<double> one{1.0};
    std::vector<QuantumChannel> self{t};
    EXPECT_EQ(verify_decomposition(t, one, self), 0.0);
}

TEST(verify_decomposition, printed_assignment_does_not_reconstruct_t) {
    // Weights 1/2 on Z and -sqrt2/2 on SZ leave the X->X component at -1/2.
    std::vector<QuantumChannel> chans{gate("S"), gate("Z"), gate("S.Z")};
    std::vector<double> printed{0.5 + kHalfRoot2, 0.5, -kHalfRoot2};
    EXPECT_GT(verify_decomposition(gate("T"), printed, chans), 0.5);
}

TEST(gamma_max_lower_bound, probes) {
    CircuitClass c = clifford_class(1);
    std::vector<QuantumChannel> frees{c[0], c[5]};
    GammaMaxEstimate from_free = gamma_max_lower_bound(c, 1, 0, 1, frees);
    EXPECT_EQ(from_free.lower_bound, 0.0);
    EXPECT_EQ(from_free.probes, 2u);

    std::vector<QuantumChannel> t{gate("T")};
    GammaMaxEstimate est = gamma_max_lower_bound(c, 1, 6, 3, t);
    EXPECT_GE(est.lower_bound, free_robustness(gate("T"), c).lambda_star);
    EXPECT_EQ(est.running_max.size(), 7u);
    for (size_t i = 1; i < est.running_max.size(); ++i) {
        EXPECT_GE(est.running_max[i], est.running_max[i - 1]);
    }
}

TEST(robustness_record, contains_decomposition) {
    CircuitClass c = clifford_class(1);
    RobustnessResult r = free_robustness(gate("T"), c);
    std::string rec = robustness_record(r, gate("T"), c);
    EXPECT_NE(rec.find("\"lambda_star\""), std::string::npos);
    EXPECT_NE(rec.find("\"decomposition\""), std::string::npos);
    EXPECT_NE(rec.find("\"free\": \"stab:1\""), std::string::npos);
}
