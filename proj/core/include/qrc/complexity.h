#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrc/classes.h"
#include "qrc/qcore.h"

namespace qrc {

using VectorSet = std::vector<rvector>;

/// Largest m for which the 2^m sign vectors are enumerated exactly.
inline constexpr int kMaxExactSamples = 22;

/// Slack allowed before an inequality check is reported as violated.
inline constexpr double kInequalitySlack = 1e-9;

enum class Method { exact, monte_carlo };

struct Variant {
    enum class Weights { rademacher, gaussian };
    Weights weights = Weights::rademacher;
    /// Take |<eps, f>| inside the supremum.
    bool absolute = false;

    std::string str() const;
    bool operator==(const Variant &) const = default;
};

std::string method_name(Method m);

struct ComplexityEstimate {
    double value = 0;
    Method method = Method::exact;
    Variant variant;
    std::optional<uint64_t> mc_samples;
    std::optional<double> ci95_halfwidth;
    std::optional<uint64_t> seed;
};

/// Explicit probability table over sample pairs (x, y).
class SampleDistribution {
   public:
    SampleDistribution(int n, std::vector<std::pair<SamplePair, double>> table);

    /// Uniform over all 4^n pairs.
    static SampleDistribution uniform(int n);

    /// x drawn from `x_marginal` (indexed by basis index), y from the
    /// channel's output distribution p_{target,x}(y). Zero-probability pairs
    /// are dropped.
    static SampleDistribution from_channel(const QuantumChannel &target,
                                           const std::vector<double> &x_marginal);

    int num_qubits() const { return n_; }
    size_t support_size() const { return table_.size(); }
    const SamplePair &pair(size_t i) const { return table_[i].first; }
    double probability(size_t i) const { return table_[i].second; }

    /// Index into the support, by inverse CDF.
    size_t draw_index(Rng &rng) const;
    SampleSet draw(size_t m, Rng &rng) const;

   private:
    int n_;
    std::vector<std::pair<SamplePair, double>> table_;
    std::vector<double> cdf_;
};

/// Exact E_eps sup_{v in A} (1/m) sum_i eps_i v_i (or |.| inside the sup)
/// over all 2^m sign vectors. Throws guard_error when m > kMaxExactSamples.
double rademacher_set_exact(const VectorSet &set, bool absolute = false);

/// Monte-Carlo estimate with a normal-approximation 95% CI. Draws are split
/// into fixed-size streams seeded from `seed`, so the result depends only on
/// (set, n_samples, seed). Requires n_samples >= 100.
ComplexityEstimate rademacher_set_mc(const VectorSet &set, uint64_t n_samples, uint64_t seed,
                                     bool absolute = false);

/// As rademacher_set_mc with standard normal weights.
ComplexityEstimate gaussian_set_mc(const VectorSet &set, uint64_t n_samples, uint64_t seed,
                                   bool absolute = false);

/// max_{v in A} ||v||_2 sqrt(2 ln |A|) / m; zero for a singleton.
double massart_bound(const VectorSet &set);

/// Removes vectors within `tol` (max-entry) of an earlier one.
VectorSet dedupe_vectors(const VectorSet &set, double tol = 1e-12);

/// {f_Phi : Phi in cls} on `samples`, deduplicated at 1e-12.
VectorSet class_vectors(const CircuitClass &cls, const SampleSet &samples);

struct EstimatorOptions {
    Method method = Method::exact;
    Variant variant;
    uint64_t mc_samples = 20000;
    uint64_t seed = 0;
};

ComplexityEstimate estimate_set(const VectorSet &set, const EstimatorOptions &options);

/// Empirical complexity of F(cls) on `samples`.
ComplexityEstimate empirical_complexity(const CircuitClass &cls, const SampleSet &samples,
                                        const EstimatorOptions &options = {});

/// Mean of empirical_complexity over `repetitions` seeded draws S ~ D^m with a
/// CI over repetitions. Requires repetitions >= 10.
ComplexityEstimate expected_complexity(const CircuitClass &cls, const SampleDistribution &dist,
                                       size_t m, uint64_t repetitions, uint64_t seed,
                                       const EstimatorOptions &options = {});

/// Exact R_D by summing R_S over every ordered sample tuple weighted by its
/// probability. Guarded to support^m <= 2^22 tuples.
double expected_complexity_exact(const CircuitClass &cls, const SampleDistribution &dist, size_t m);

struct Theorem1Report {
    size_t m = 0;
    std::string class_spec;
    std::string resource;
    double gamma = 0;
    double r_free = 0;       // R_S(F(O))
    double r_augmented = 0;  // R_S(F(O + psi))
    double rhs = 0;          // (1 + gamma) R_S(F(O))
    double lower_slack = 0;  // r_augmented - r_free
    double upper_slack = 0;  // rhs - r_augmented
    Method method = Method::exact;
    Variant variant;
    double tolerance = kInequalitySlack;  // slacks must be >= -tolerance
    bool holds = false;
};

/// Check of R(F(O)) <= R(F(O + psi)) <= (1 + gamma) R(F(O)) for any variant.
/// Monte-Carlo estimates share one weight stream, so the lower side is exact
/// and the upper side allows three standard errors per estimate. An infinite
/// gamma makes the upper side vacuous.
Theorem1Report check_theorem1(const CircuitClass &free, const QuantumChannel &psi,
                              const SampleSet &samples, double gamma,
                              const EstimatorOptions &options = {});

/// min{1 + 2 gamma_max, (1 + 2 gamma_psi)^k}; the second term alone without gamma_max.
double gamma_star(double gamma_psi, std::optional<double> gamma_max, int k);

struct Theorem2Report {
    int k = 0;
    int depth = 0;
    size_t m = 0;
    std::string class_spec;
    double gamma_star = 0;
    double r_free = 0;         // R_S(F(O))
    double r_k = 0;            // R_S(F(O^(k)))
    double r_k_next = 0;       // R_S(F(O^(k+1)))
    double bound = 0;          // gamma_star * r_free
    double bound_slack = 0;    // bound - r_k
    double monotone_slack = 0; // r_k_next - r_k
    bool holds = false;
};

/// [O^(0), ..., O^(k_max)] at depth cap L.
std::vector<CircuitClass> resource_hierarchy(const CircuitClass &free, const QuantumChannel &psi,
                                             int k_max, int depth);

/// Checks R(F(O^(k))) <= gamma* R(F(O)) and R(F(O^(k))) <= R(F(O^(k+1))) at fixed L.
Theorem2Report check_theorem2(const CircuitClass &free, const QuantumChannel &psi, int k, int depth,
                              const SampleSet &samples, double gamma_psi,
                              std::optional<double> gamma_max = std::nullopt);

/// Same check against prebuilt classes O^(k) and O^(k+1).
Theorem2Report check_theorem2(const CircuitClass &free, const CircuitClass &level_k,
                              const CircuitClass &level_next, int k, const SampleSet &samples,
                              double gamma_psi, std::optional<double> gamma_max = std::nullopt);

struct ConcentrationReport {
    size_t m = 0;
    double t = 0;
    uint64_t trials = 0;
    uint64_t seed = 0;
    double expected = 0;  // R_D
    Method expected_method = Method::exact;
    double tail_frequency = 0;
    double bound = 0;           // 2 exp(-2 m t^2)
    double standard_error = 0;  // binomial SE at p = min(bound, 1)
    bool holds = false;
};

/// Measures Pr[|R_D - R_S| >= t] over `trials` fresh draws and compares with
/// 2 exp(-2 m t^2) + 3 SE. Functions are [0,1]-valued, so b - a = 1.
/// R_D is exact when the tuple count allows, otherwise averaged over 20000 draws.
ConcentrationReport check_concentration(const CircuitClass &cls, const SampleDistribution &dist,
                                        size_t m, double t, uint64_t trials, uint64_t seed);

}  // namespace qrc
