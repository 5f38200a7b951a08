#include "qrc/learn.h"

#include "gtest/gtest.h"

#include "qrc/errors.h"
#include "qrc/gates.h"

using namespace qrc;

namespace {

QuantumChannel gate(std::string_view word, int n = 1) {
    return gates::word_channel(word, n);
}

SamplePair z(const char *x, const char *y) {
    return {BitString::parse(x), BitString::parse(y)};
}

}  // namespace

TEST(loss, examples) {
    QuantumChannel id = QuantumChannel::identity(1);
    EXPECT_EQ(loss(z("0", "0"), id), 0.0);
    EXPECT_EQ(loss(z("0", "1"), id), 1.0);
    EXPECT_NEAR(loss(z("0", "0"), gate("H")), 0.5, 1e-15);
}

TEST(empirical_error, examples) {
    QuantumChannel id = QuantumChannel::identity(1);
    EXPECT_EQ(empirical_error(SampleSet({z("0", "0"), z("1", "1")}), id), 0.0);
    EXPECT_EQ(empirical_error(SampleSet({z("0", "1")}), id), 1.0);
    EXPECT_NEAR(empirical_error(SampleSet({z("0", "1"), z("1", "1"), z("0", "0")}), gate("H")), 0.5, 1e-15);
}

TEST(expected_error, examples) {
    QuantumChannel id = QuantumChannel::identity(1);
    EXPECT_EQ(expected_error(SampleDistribution(1, {{z("0", "0"), 1.0}}), id), 0.0);
    EXPECT_EQ(expected_error(SampleDistribution(1, {{z("0", "0"), 0.5}, {z("1", "1"), 0.5}}), id), 0.0);
    EXPECT_NEAR(expected_error(SampleDistribution::uniform(1), id), 0.5, 1e-15);
}

TEST(expected_error, consistent_task_closed_form) {
    // er_D(target) = 1 - E_x sum_y p(y|x)^2.
    QuantumChannel target = gate("H.T.H");
    LearningTask task = LearningTask::consistent(target, 4, 0.1);
    double c = std::cos(std::acos(-1.0) / 8);
    double p = c * c;
    EXPECT_NEAR(expected_error(task.dist, target), 1 - (p * p + (1 - p) * (1 - p)), 1e-12);
}

TEST(expected_error, limit_of_empirical_error) {
    QuantumChannel target = gate("H.T.H");
    LearningTask task = LearningTask::consistent(target, 4, 0.1);
    QuantumChannel h = gate("H.S");
    Rng rng = make_rng(5, 0);
    const size_t m = 10000;
    SampleSet s = task.dist.draw(m, rng);
    double mean = empirical_error(s, h);
    double var = 0;
    for (const auto &pair : s) {
        var += std::pow(loss(pair, h) - mean, 2);
    }
    var /= static_cast<double>(m - 1);
    EXPECT_LE(std::abs(mean - expected_error(task.dist, h)), 3 * std::sqrt(var / m));
}

TEST(erm, examples) {
    CircuitClass c = clifford_class(1);
    SampleSet s({z("0", "0"), z("1", "1"), z("0", "0")});
    ErmResult r = erm(c, s);
    EXPECT_EQ(r.empirical_error, 0.0);
    EXPECT_EQ(r.index, 0u);

    CircuitClass only_h = dedupe({gate("H")});
    ErmResult rh = erm(only_h, SampleSet({z("0", "1"), z("1", "1")}));
    EXPECT_EQ(rh.label, "H");
    EXPECT_NEAR(rh.empirical_error, 0.5, 1e-15);
}

TEST(erm, no_worse_than_target_in_class) {
    CircuitClass c = augment(clifford_class(1), gate("T"), 1, 3);
    QuantumChannel target = gate("H.T.H");
    ASSERT_TRUE(c.contains(target));
    LearningTask task = LearningTask::consistent(target, 6, 0.1);
    for (uint64_t t = 0; t < 30; ++t) {
        Rng rng = make_rng(8, t);
        SampleSet s = task.dist.draw(6, rng);
        EXPECT_LE(erm(c, s).empirical_error, empirical_error(s, target) + 1e-15);
    }
}

TEST(generalization_bound, worked_value) {
    double b = generalization_bound(0.1, 0.05, 1.0, 0.05, 100);
    EXPECT_NEAR(b, 0.1 + 0.1 + 3 * std::sqrt(std::log(40.0) / 200.0), 1e-15);
    EXPECT_NEAR(b, 0.60743, 1e-5);
    EXPECT_LT(generalization_bound(0.1, 0.05, 1.0, 0.05, 100000000) - 0.2, 1e-3);
    EXPECT_THROW(generalization_bound(0.1, 0.05, 1.0, 1.5, 100), std::exception);
    EXPECT_THROW(generalization_bound(0.1, 0.05, 1.0, 0.1, 0), std::exception);
}

TEST(loss_vectors, complexity_equals_function_class_complexity) {
    CircuitClass c = augment(clifford_class(1), gate("T"), 1, 3);
    SampleDistribution u = SampleDistribution::uniform(1);
    for (uint64_t d = 0; d < 40; ++d) {
        Rng rng = make_rng(13, d);
        SampleSet s = u.draw(1 + d % 8, rng);
        EXPECT_NEAR(rademacher_set_exact(loss_vectors(c, s)), rademacher_set_exact(class_vectors(c, s)), 1e-12);
    }
}

TEST(check_proposition, trivial_identity_class) {
    CircuitClass id = dedupe({QuantumChannel::identity(1)});
    LearningTask task = LearningTask::consistent(QuantumChannel::identity(1), 5, 0.1);
    PropositionReport r = check_proposition(id, QuantumChannel::identity(1), 0, 1, task, 50, 2);
    EXPECT_EQ(r.satisfied, 50u);
    for (const auto &row : r.rows) {
        EXPECT_EQ(row.er_s, 0.0);
        EXPECT_EQ(row.er_d, 0.0);
    }
    EXPECT_TRUE(r.holds);
}

TEST(check_proposition, clifford_plus_t) {
    CircuitClass c = clifford_class(1);
    LearningTask task = LearningTask::consistent(gate("H.T.H"), 8, 0.1);
    PropositionReport r = check_proposition(c, gate("T"), 1, 3, task, 60, 4);
    EXPECT_TRUE(r.holds);
    EXPECT_GE(r.fraction, r.threshold);
    EXPECT_EQ(r.rows.size(), 60u);
    PropositionReport again = check_proposition(c, gate("T"), 1, 3, task, 60, 4);
    EXPECT_EQ(again.satisfied, r.satisfied);
    EXPECT_EQ(again.rows.back().bound, r.rows.back().bound);
}
