#include "qrc/complexity.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "qrc/errors.h"

namespace qrc {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr uint64_t kStreamSize = 4096;

// Neumaier-compensated running sum.
class CompensatedSum {
   public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

   private:
    double sum_ = 0;
    double comp_ = 0;
};

// Welford accumulator.
struct RunningStats {
    uint64_t count = 0;
    double mean = 0;
    double m2 = 0;

    void add(double x) {
        ++count;
        double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }
    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double ci95() const { return kZ95 * std::sqrt(variance() / static_cast<double>(count)); }
};

size_t check_set(const VectorSet &set) {
    if (set.empty()) {
        throw guard_error("complexity of an empty set is undefined");
    }
    const auto m = static_cast<size_t>(set.front().size());
    if (m == 0) {
        throw guard_error("vectors must have at least one entry");
    }
    for (const auto &v : set) {
        if (static_cast<size_t>(v.size()) != m) {
            throw guard_error("vector set has mixed lengths");
        }
    }
    return m;
}

double sup_of(const VectorSet &set, const rvector &weights, bool absolute) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto &v : set) {
        double s = v.dot(weights);
        if (absolute) {
            s = std::abs(s);
        }
        best = std::max(best, s);
    }
    return best;
}

template <class Draw>
ComplexityEstimate monte_carlo(const VectorSet &set, uint64_t n_samples, uint64_t seed,
                               bool absolute, Variant::Weights kind, Draw &&draw) {
    const size_t m = check_set(set);
    if (n_samples < 100) {
        throw guard_error("Monte-Carlo estimation needs at least 100 samples");
    }
    RunningStats stats;
    rvector weights(static_cast<Eigen::Index>(m));
    const double inv_m = 1.0 / static_cast<double>(m);
    for (uint64_t start = 0, stream = 0; start < n_samples; start += kStreamSize, ++stream) {
        Rng rng = make_rng(seed, stream);
        const uint64_t count = std::min(kStreamSize, n_samples - start);
        for (uint64_t i = 0; i < count; ++i) {
            for (auto &w : weights) {
                w = draw(rng);
            }
            stats.add(sup_of(set, weights, absolute) * inv_m);
        }
    }
    ComplexityEstimate est;
    est.value = stats.mean;
    est.method = Method::monte_carlo;
    est.variant.weights = kind;
    est.variant.absolute = absolute;
    est.mc_samples = n_samples;
    est.ci95_halfwidth = stats.ci95();
    est.seed = seed;
    return est;
}

// f values of every class element on every support pair.
rmatrix function_table(const CircuitClass &cls, const SampleDistribution &dist) {
    rmatrix table(static_cast<Eigen::Index>(cls.size()),
                  static_cast<Eigen::Index>(dist.support_size()));
    for (size_t c = 0; c < cls.size(); ++c) {
        for (size_t p = 0; p < dist.support_size(); ++p) {
            table(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(p)) =
                eval_f(cls[c], dist.pair(p).x, dist.pair(p).y);
        }
    }
    return table;
}

VectorSet tuple_vectors(const rmatrix &table, const std::vector<size_t> &tuple) {
    VectorSet set;
    set.reserve(static_cast<size_t>(table.rows()));
    for (Eigen::Index c = 0; c < table.rows(); ++c) {
        rvector v(static_cast<Eigen::Index>(tuple.size()));
        for (size_t i = 0; i < tuple.size(); ++i) {
            v[static_cast<Eigen::Index>(i)] = table(c, static_cast<Eigen::Index>(tuple[i]));
        }
        set.push_back(std::move(v));
    }
    return dedupe_vectors(set);
}

double exact_class_complexity(const CircuitClass &cls, const SampleSet &samples) {
    return rademacher_set_exact(class_vectors(cls, samples));
}

}  // namespace

std::string Variant::str() const {
    std::string s = weights == Weights::rademacher ? "rademacher" : "gaussian";
    return s + (absolute ? "_absolute" : "_signed");
}

std::string method_name(Method m) { return m == Method::exact ? "exact" : "monte_carlo"; }

// SampleDistribution ---------------------------------------------------------

SampleDistribution::SampleDistribution(int n, std::vector<std::pair<SamplePair, double>> table)
    : n_(n), table_(std::move(table)) {
    if (table_.empty()) {
        throw guard_error("sample distribution needs a nonempty support");
    }
    double total = 0;
    for (const auto &[pair, p] : table_) {
        if (pair.x.size() != n || pair.y.size() != n) {
            throw guard_error("sample distribution entry has the wrong dimension");
        }
        if (!(p >= 0)) {
            throw guard_error("sample distribution has a negative probability");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw guard_error("sample distribution does not sum to 1");
    }
    cdf_.reserve(table_.size());
    double acc = 0;
    for (const auto &entry : table_) {
        acc += entry.second;
        cdf_.push_back(acc);
    }
}

SampleDistribution SampleDistribution::uniform(int n) {
    const uint64_t d = uint64_t{1} << n;
    std::vector<std::pair<SamplePair, double>> table;
    const double p = 1.0 / static_cast<double>(d * d);
    for (uint64_t x = 0; x < d; ++x) {
        for (uint64_t y = 0; y < d; ++y) {
            table.push_back({{BitString::from_index(x, n), BitString::from_index(y, n)}, p});
        }
    }
    return SampleDistribution(n, std::move(table));
}

SampleDistribution SampleDistribution::from_channel(const QuantumChannel &target,
                                                    const std::vector<double> &x_marginal) {
    const int n = target.num_qubits();
    const uint64_t d = uint64_t{1} << n;
    if (x_marginal.size() != d) {
        throw guard_error("input marginal must have 2^n entries");
    }
    std::vector<std::pair<SamplePair, double>> table;
    for (uint64_t x = 0; x < d; ++x) {
        const auto bx = BitString::from_index(x, n);
        double row = 0;
        std::vector<double> py(d);
        for (uint64_t y = 0; y < d; ++y) {
            py[y] = std::max(0.0, eval_f(target, bx, BitString::from_index(y, n)));
            row += py[y];
        }
        for (uint64_t y = 0; y < d; ++y) {
            double p = x_marginal[x] * py[y] / row;
            if (p > 1e-15) {
                table.push_back({{bx, BitString::from_index(y, n)}, p});
            }
        }
    }
    // Renormalize away the dropped mass and rounding.
    double total = 0;
    for (const auto &e : table) {
        total += e.second;
    }
    for (auto &e : table) {
        e.second /= total;
    }
    return SampleDistribution(n, std::move(table));
}

size_t SampleDistribution::draw_index(Rng &rng) const {
    const double u = uniform01(rng) * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) {
        --it;
    }
    return static_cast<size_t>(it - cdf_.begin());
}

SampleSet SampleDistribution::draw(size_t m, Rng &rng) const {
    std::vector<SamplePair> samples;
    samples.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        samples.push_back(table_[draw_index(rng)].first);
    }
    return SampleSet(std::move(samples));
}

// Set-level estimators -------------------------------------------------------

double rademacher_set_exact(const VectorSet &set, bool absolute) {
    const size_t m = check_set(set);
    if (m > static_cast<size_t>(kMaxExactSamples)) {
        throw guard_error("exact Rademacher enumeration limited to m <= " +
                          std::to_string(kMaxExactSamples) + " (got m = " + std::to_string(m) + ")");
    }
    const size_t count = set.size();
    // Walk sign vectors in Gray-code order so each step flips one sign and
    // updates every dot product in O(1).
    std::vector<int> signs(m, 1);
    std::vector<double> dots(count);
    auto refresh = [&] {
        for (size_t j = 0; j < count; ++j) {
            double s = 0;
            for (size_t i = 0; i < m; ++i) {
                s += signs[i] * set[j][static_cast<Eigen::Index>(i)];
            }
            dots[j] = s;
        }
    };
    refresh();
    CompensatedSum total;
    const uint64_t n_signs = uint64_t{1} << m;
    for (uint64_t g = 0; g < n_signs; ++g) {
        if (g > 0) {
            const auto bit = static_cast<size_t>(std::countr_zero(g));
            signs[bit] = -signs[bit];
            if ((g & 1023U) == 0) {
                refresh();
            } else {
                const double f = 2.0 * signs[bit];
                for (size_t j = 0; j < count; ++j) {
                    dots[j] += f * set[j][static_cast<Eigen::Index>(bit)];
                }
            }
        }
        double best = -std::numeric_limits<double>::infinity();
        for (double d : dots) {
            best = std::max(best, absolute ? std::abs(d) : d);
        }
        total.add(best);
    }
    return total.value() / static_cast<double>(n_signs) / static_cast<double>(m);
}

ComplexityEstimate rademacher_set_mc(const VectorSet &set, uint64_t n_samples, uint64_t seed,
                                     bool absolute) {
    return monte_carlo(set, n_samples, seed, absolute, Variant::Weights::rademacher,
                       [](Rng &rng) { return static_cast<double>(random_sign(rng)); });
}

ComplexityEstimate gaussian_set_mc(const VectorSet &set, uint64_t n_samples, uint64_t seed,
                                   bool absolute) {
    return monte_carlo(set, n_samples, seed, absolute, Variant::Weights::gaussian,
                       [](Rng &rng) { return standard_normal(rng); });
}

double massart_bound(const VectorSet &set) {
    const size_t m = check_set(set);
    if (set.size() == 1) {
        return 0.0;
    }
    double max_norm = 0;
    for (const auto &v : set) {
        max_norm = std::max(max_norm, v.norm());
    }
    return max_norm * std::sqrt(2.0 * std::log(static_cast<double>(set.size()))) /
           static_cast<double>(m);
}

VectorSet dedupe_vectors(const VectorSet &set, double tol) {
    if (set.empty()) {
        return {};
    }
    const auto m = set.front().size();
    rvector weights(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        weights[i] = 1.0 + 0.37 * static_cast<double>(i % 7);
    }
    const double radius = tol * weights.sum() * (1 + 1e-9) + 1e-15 * weights.sum();
    std::multimap<double, size_t> keys;
    VectorSet out;
    for (const auto &v : set) {
        const double key = weights.dot(v);
        bool duplicate = false;
        for (auto it = keys.lower_bound(key - radius); it != keys.end() && it->first <= key + radius;
             ++it) {
            if ((out[it->second] - v).cwiseAbs().maxCoeff() <= tol) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            keys.emplace(key, out.size());
            out.push_back(v);
        }
    }
    return out;
}

VectorSet class_vectors(const CircuitClass &cls, const SampleSet &samples) {
    if (cls.empty()) {
        throw guard_error("complexity of an empty class is undefined");
    }
    if (samples.num_qubits() != cls.num_qubits()) {
        throw guard_error("sample dimension does not match the class");
    }
    VectorSet set;
    set.reserve(cls.size());
    for (const auto &c : cls) {
        set.push_back(function_vector(c, samples).values);
    }
    return dedupe_vectors(set);
}

ComplexityEstimate estimate_set(const VectorSet &set, const EstimatorOptions &options) {
    const bool gaussian = options.variant.weights == Variant::Weights::gaussian;
    if (options.method == Method::exact) {
        if (gaussian) {
            throw guard_error("Gaussian complexity has no exact estimator; use monte_carlo");
        }
        ComplexityEstimate est;
        est.value = rademacher_set_exact(set, options.variant.absolute);
        est.method = Method::exact;
        est.variant = options.variant;
        return est;
    }
    return gaussian ? gaussian_set_mc(set, options.mc_samples, options.seed, options.variant.absolute)
                    : rademacher_set_mc(set, options.mc_samples, options.seed,
                                        options.variant.absolute);
}

ComplexityEstimate empirical_complexity(const CircuitClass &cls, const SampleSet &samples,
                                        const EstimatorOptions &options) {
    return estimate_set(class_vectors(cls, samples), options);
}

ComplexityEstimate expected_complexity(const CircuitClass &cls, const SampleDistribution &dist,
                                       size_t m, uint64_t repetitions, uint64_t seed,
                                       const EstimatorOptions &options) {
    if (repetitions < 10) {
        throw guard_error("expected_complexity needs at least 10 repetitions");
    }
    if (dist.num_qubits() != cls.num_qubits()) {
        throw guard_error("distribution dimension does not match the class");
    }
    const rmatrix table = function_table(cls, dist);
    RunningStats stats;
    for (uint64_t r = 0; r < repetitions; ++r) {
        Rng rng = make_rng(seed, 2 * r);
        std::vector<size_t> tuple(m);
        for (auto &t : tuple) {
            t = dist.draw_index(rng);
        }
        EstimatorOptions inner = options;
        inner.seed = derive_seed(seed, 2 * r + 1);
        stats.add(estimate_set(tuple_vectors(table, tuple), inner).value);
    }
    ComplexityEstimate est;
    est.value = stats.mean;
    est.method = Method::monte_carlo;
    est.variant = options.variant;
    est.mc_samples = repetitions;
    est.ci95_halfwidth = stats.ci95();
    est.seed = seed;
    return est;
}

double expected_complexity_exact(const CircuitClass &cls, const SampleDistribution &dist, size_t m) {
    if (m == 0) {
        throw guard_error("m must be positive");
    }
    const double tuples = std::pow(static_cast<double>(dist.support_size()), static_cast<double>(m));
    if (tuples > static_cast<double>(uint64_t{1} << 22)) {
        throw guard_error("exact expected complexity limited to 2^22 sample tuples");
    }
    const rmatrix table = function_table(cls, dist);
    const size_t support = dist.support_size();
    std::vector<size_t> tuple(m, 0);
    CompensatedSum total;
    while (true) {
        double p = 1.0;
        for (size_t t : tuple) {
            p *= dist.probability(t);
        }
        total.add(p * rademacher_set_exact(tuple_vectors(table, tuple)));
        size_t pos = 0;
        while (pos < m && ++tuple[pos] == support) {
            tuple[pos] = 0;
            ++pos;
        }
        if (pos == m) {
            break;
        }
    }
    return total.value();
}

// Theorem checks -------------------------------------------------------------

Theorem1Report check_theorem1(const CircuitClass &free, const QuantumChannel &psi,
                              const SampleSet &samples, double gamma,
                              const EstimatorOptions &options) {
    if (!(gamma >= 0)) {
        throw guard_error("robustness gamma must be nonnegative");
    }
    CircuitClass augmented = free;
    augmented.insert(psi);

    Theorem1Report r;
    r.m = samples.size();
    r.class_spec = free.spec().str();
    r.resource = psi.label();
    r.gamma = gamma;
    r.method = options.method;
    r.variant = options.variant;
    const ComplexityEstimate e_free = empirical_complexity(free, samples, options);
    const ComplexityEstimate e_aug = empirical_complexity(augmented, samples, options);
    r.r_free = e_free.value;
    r.r_augmented = e_aug.value;
    const bool unbounded = std::isinf(gamma);
    r.rhs = unbounded ? std::numeric_limits<double>::infinity() : (1.0 + gamma) * r.r_free;
    r.lower_slack = r.r_augmented - r.r_free;
    r.upper_slack = r.rhs - r.r_augmented;
    if (options.method == Method::monte_carlo && !unbounded) {
        // 1.96 SE is the reported half-width.
        const double se_free = e_free.ci95_halfwidth.value_or(0) / 1.96;
        const double se_aug = e_aug.ci95_halfwidth.value_or(0) / 1.96;
        r.tolerance += 3.0 * ((1.0 + gamma) * se_free + se_aug);
    }
    r.holds = r.lower_slack >= -r.tolerance && r.upper_slack >= -r.tolerance;
    return r;
}

double gamma_star(double gamma_psi, std::optional<double> gamma_max, int k) {
    if (gamma_psi < 0 || k < 0) {
        throw guard_error("gamma_star needs gamma_psi >= 0 and k >= 0");
    }
    const double hierarchy = std::pow(1.0 + 2.0 * gamma_psi, k);
    if (!gamma_max) {
        return hierarchy;
    }
    return std::min(1.0 + 2.0 * *gamma_max, hierarchy);
}

std::vector<CircuitClass> resource_hierarchy(const CircuitClass &free, const QuantumChannel &psi,
                                             int k_max, int depth) {
    std::vector<CircuitClass> levels;
    for (int k = 0; k <= k_max; ++k) {
        levels.push_back(augment(free, psi, k, depth));
    }
    return levels;
}

Theorem2Report check_theorem2(const CircuitClass &free, const QuantumChannel &psi, int k, int depth,
                              const SampleSet &samples, double gamma_psi,
                              std::optional<double> gamma_max) {
    const CircuitClass level_k = augment(free, psi, k, depth);
    const CircuitClass level_next = augment(free, psi, k + 1, depth);
    return check_theorem2(free, level_k, level_next, k, samples, gamma_psi, gamma_max);
}

Theorem2Report check_theorem2(const CircuitClass &free, const CircuitClass &level_k,
                              const CircuitClass &level_next, int k, const SampleSet &samples,
                              double gamma_psi, std::optional<double> gamma_max) {
    Theorem2Report r;
    r.k = k;
    r.depth = level_k.spec().depth;
    r.m = samples.size();
    r.class_spec = level_k.spec().str();
    r.gamma_star = gamma_star(gamma_psi, gamma_max, k);
    r.r_free = exact_class_complexity(free, samples);
    r.r_k = exact_class_complexity(level_k, samples);
    r.r_k_next = exact_class_complexity(level_next, samples);
    r.bound = r.gamma_star * r.r_free;
    r.bound_slack = r.bound - r.r_k;
    r.monotone_slack = r.r_k_next - r.r_k;
    r.holds = r.bound_slack >= -kInequalitySlack && r.monotone_slack >= -kInequalitySlack;
    return r;
}

ConcentrationReport check_concentration(const CircuitClass &cls, const SampleDistribution &dist,
                                        size_t m, double t, uint64_t trials, uint64_t seed) {
    if (trials < 1000) {
        throw guard_error("check_concentration needs at least 1000 trials");
    }
    if (t <= 0) {
        throw guard_error("deviation t must be positive");
    }
    ConcentrationReport r;
    r.m = m;
    r.t = t;
    r.trials = trials;
    r.seed = seed;

    const double tuples = std::pow(static_cast<double>(dist.support_size()), static_cast<double>(m));
    if (tuples <= static_cast<double>(uint64_t{1} << 20)) {
        r.expected = expected_complexity_exact(cls, dist, m);
        r.expected_method = Method::exact;
    } else {
        r.expected = expected_complexity(cls, dist, m, 20000, derive_seed(seed, 0)).value;
        r.expected_method = Method::monte_carlo;
    }

    const rmatrix table = function_table(cls, dist);
    uint64_t hits = 0;
    for (uint64_t trial = 0; trial < trials; ++trial) {
        Rng rng = make_rng(seed, trial + 1);
        std::vector<size_t> tuple(m);
        for (auto &idx : tuple) {
            idx = dist.draw_index(rng);
        }
        const double r_s = rademacher_set_exact(tuple_vectors(table, tuple));
        if (std::abs(r.expected - r_s) >= t) {
            ++hits;
        }
    }
    r.tail_frequency = static_cast<double>(hits) / static_cast<double>(trials);
    r.bound = 2.0 * std::exp(-2.0 * static_cast<double>(m) * t * t);
    const double p = std::min(r.bound, 1.0);
    r.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    r.holds = r.tail_frequency <= r.bound + 3.0 * r.standard_error;
    return r;
}

}  // namespace qrc
