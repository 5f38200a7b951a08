#include "qrc/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "qrc/classes.h"
#include "qrc/errors.h"
#include "qrc/gates.h"
#include "qrc/learn.h"
#include "qrc/robustness.h"

#ifndef QRC_VERSION
#define QRC_VERSION "0.0.0"
#endif

namespace qrc {

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

class CsvTable {
   public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) {
        if (row.size() != header_.size()) {
            throw std::logic_error("csv row width mismatch");
        }
        rows_.push_back(std::move(row));
    }

    std::string str() const {
        std::string out;
        auto line = [&](const std::vector<std::string> &cells) {
            for (size_t i = 0; i < cells.size(); ++i) {
                if (i) {
                    out += ',';
                }
                out += csv_field(cells[i]);
            }
            out += '\n';
        };
        line(header_);
        for (const auto &r : rows_) {
            line(r);
        }
        return out;
    }

   private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

json summary_header(const ExperimentConfig &config) {
    json j;
    j["tool"] = "qrc";
    j["version"] = QRC_VERSION;
    j["command"] = command_name(config.command);
    j["config_hash"] = config_hash(config);
    j["config"] = json::parse(canonical_config(config));
    j["seed"] = config.seed;
    return j;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw config_error("cannot read file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Sample sets a command iterates over: explicit, exhaustive over the uniform
// support, or `draws` seeded draws from the uniform distribution.
std::vector<SampleSet> sample_sets(const ExperimentConfig &config, int n, size_t m,
                                   uint64_t stream_base) {
    if (!config.samples.empty()) {
        SampleSet s = parse_samples(config.samples);
        if (s.num_qubits() != n) {
            throw config_error("--samples dimension does not match the class");
        }
        return {s};
    }
    const SampleDistribution dist = SampleDistribution::uniform(n);
    std::vector<SampleSet> sets;
    if (config.exhaustive) {
        const double total =
            std::pow(static_cast<double>(dist.support_size()), static_cast<double>(m));
        if (total > static_cast<double>(uint64_t{1} << 20)) {
            throw guard_error("exhaustive enumeration limited to 2^20 sample sets");
        }
        std::vector<size_t> tuple(m, 0);
        while (true) {
            std::vector<SamplePair> pairs;
            // Most significant position first, so sets come out in lexicographic order.
            for (size_t i = m; i-- > 0;) {
                pairs.push_back(dist.pair(tuple[i]));
            }
            sets.emplace_back(std::move(pairs));
            size_t pos = 0;
            while (pos < m && ++tuple[pos] == dist.support_size()) {
                tuple[pos] = 0;
                ++pos;
            }
            if (pos == m) {
                break;
            }
        }
        return sets;
    }
    for (uint64_t d = 0; d < config.draws; ++d) {
        Rng rng = make_rng(config.seed, stream_base + d);
        sets.push_back(dist.draw(m, rng));
    }
    return sets;
}

double resolve_gamma(const ExperimentConfig &config, const QuantumChannel &psi,
                     const CircuitClass &free, json &summary) {
    if (config.gamma) {
        summary["gamma_source"] = "config";
        return *config.gamma;
    }
    const RobustnessResult r = free_robustness(psi, free);
    if (r.status != RobustnessResult::Status::optimal) {
        throw numerical_error("resource channel is not decomposable over the free class");
    }
    summary["gamma_source"] = "lp";
    return r.lambda_star;
}

RunOutput finish(CsvTable table, json summary, int exit_code = 0) {
    RunOutput out;
    out.exit_code = exit_code;
    if (!summary.contains("guard_trips")) {
        summary["guard_trips"] = json::array();
    }
    summary["exit_code"] = exit_code;
    out.csv = table.str();
    out.summary = summary.dump(2) + "\n";
    return out;
}

// Commands -------------------------------------------------------------------

RunOutput run_enumerate(const ExperimentConfig &config) {
    const ClassSpec spec = ClassSpec::parse(config.class_spec, config.n);
    const CircuitClass cls = build_class(spec);
    CsvTable table({"index", "label"});
    for (size_t i = 0; i < cls.size(); ++i) {
        table.add({std::to_string(i), cls[i].label()});
    }
    json summary = summary_header(config);
    summary["class"] = cls.spec().str();
    summary["n"] = cls.num_qubits();
    summary["size"] = cls.size();
    json cross;
    bool ok = true;
    switch (spec.family) {
        case ClassSpec::Family::stabilizer: {
            const uint64_t order = clifford_group_order(spec.n);
            const uint64_t states = stabilizer_state_count(spec.n);
            const uint64_t states_formula = stabilizer_state_count_formula(spec.n);
            cross["clifford_group_order"] = order;
            cross["stabilizer_states"] = states;
            cross["stabilizer_states_formula"] = states_formula;
            ok = cls.size() == order && states == states_formula;
            break;
        }
        case ClassSpec::Family::iqp:
            cross["size_formula"] = class_size_bound_iqp(spec.n, 0);
            ok = cls.size() == class_size_bound_iqp(spec.n, 0);
            break;
        case ClassSpec::Family::iqp_plus_ccz:
            cross["size_bound"] = class_size_bound_iqp(spec.n, spec.k);
            ok = cls.size() <= class_size_bound_iqp(spec.n, spec.k);
            break;
        default:
            break;
    }
    cross["consistent"] = ok;
    summary["cross_check"] = std::move(cross);
    RunOutput out = finish(std::move(table), std::move(summary), ok ? 0 : 4);
    out.extras.push_back({"manifest.json", class_manifest(cls, config.with_payload) + "\n"});
    return out;
}

RunOutput run_robustness(const ExperimentConfig &config) {
    const CircuitClass free = build_class(ClassSpec::parse(config.free_spec, config.n));
    const QuantumChannel target = resolve_channel(config.target, free.num_qubits());
    const RobustnessResult result = free_robustness(target, free);

    CsvTable table({"index", "label", "p", "q", "coefficient"});
    if (result.status == RobustnessResult::Status::optimal) {
        for (size_t i = 0; i < free.size(); ++i) {
            if (result.p[i] != 0.0 || result.q[i] != 0.0) {
                table.add({std::to_string(i), free[i].label(), num(result.p[i]), num(result.q[i]),
                           num(result.p[i] - result.q[i])});
            }
        }
    }
    json summary = summary_header(config);
    summary["result"] = json::parse(robustness_record(result, target, free));
    int exit_code = result.status == RobustnessResult::Status::optimal ? 0 : 4;

    if (!config.certificate.empty()) {
        std::istringstream lines(read_file(config.certificate));
        std::vector<double> coeffs;
        std::vector<QuantumChannel> channels;
        std::string line;
        while (std::getline(lines, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.resize(hash);
            }
            std::istringstream fields(line);
            std::string word;
            double c = 0;
            if (!(fields >> word)) {
                continue;
            }
            if (!(fields >> c)) {
                throw config_error("certificate line '" + line + "' needs '<word> <coefficient>'");
            }
            channels.push_back(resolve_channel(word, free.num_qubits()));
            coeffs.push_back(c);
        }
        if (channels.empty()) {
            throw config_error("certificate file is empty");
        }
        double negative_mass = 0;
        for (double c : coeffs) {
            negative_mass += std::max(0.0, -c);
        }
        const double residual = verify_decomposition(target, coeffs, channels);
        json cert;
        cert["residual"] = residual;
        cert["negative_mass"] = negative_mass;
        cert["valid"] = residual < 1e-8;
        cert["lambda_star_le_certificate"] =
            result.status == RobustnessResult::Status::optimal &&
            result.lambda_star <= negative_mass + kInequalitySlack;
        summary["certificate"] = std::move(cert);
    }
    return finish(std::move(table), std::move(summary), exit_code);
}

RunOutput run_complexity(const ExperimentConfig &config) {
    const CircuitClass cls = build_class(ClassSpec::parse(config.class_spec, config.n));
    CsvTable table({"m", "draw", "samples", "value", "ci95_halfwidth", "method", "variant", "seed"});
    EstimatorOptions options;
    options.method = config.method;
    options.variant = config.variant;
    options.mc_samples = config.mc_samples;
    json summary = summary_header(config);
    summary["class"] = cls.spec().str();
    summary["class_size"] = cls.size();
    json per_m = json::array();
    for (size_t mi = 0; mi < config.m_values.size(); ++mi) {
        const auto m = static_cast<size_t>(config.m_values[mi]);
        const auto sets = sample_sets(config, cls.num_qubits(), m, mi << 32);
        double total = 0;
        for (size_t d = 0; d < sets.size(); ++d) {
            options.seed = derive_seed(config.seed, (mi << 32) + (uint64_t{1} << 31) + d);
            const ComplexityEstimate est = empirical_complexity(cls, sets[d], options);
            total += est.value;
            table.add({std::to_string(m), std::to_string(d), sets[d].str(), num(est.value),
                       est.ci95_halfwidth ? num(*est.ci95_halfwidth) : "",
                       method_name(est.method), est.variant.str(),
                       est.seed ? std::to_string(*est.seed) : ""});
        }
        per_m.push_back({{"m", m},
                         {"sample_sets", sets.size()},
                         {"mean_value", total / static_cast<double>(sets.size())}});
    }
    summary["results"] = std::move(per_m);
    return finish(std::move(table), std::move(summary));
}

RunOutput run_theorem1(const ExperimentConfig &config) {
    const CircuitClass free = build_class(ClassSpec::parse(config.class_spec, config.n));
    const QuantumChannel psi = resolve_channel(config.resource, free.num_qubits());
    json summary = summary_header(config);
    const double gamma = resolve_gamma(config, psi, free, summary);

    CsvTable table({"m", "sample_set", "samples", "lhs", "rhs", "slack", "r_free", "lower_slack",
                    "method", "variant", "tolerance", "holds"});
    EstimatorOptions options;
    options.method = config.method;
    options.variant = config.variant;
    options.mc_samples = config.mc_samples;
    bool all_hold = true;
    double min_upper = std::numeric_limits<double>::infinity();
    double min_lower = std::numeric_limits<double>::infinity();
    uint64_t checked = 0;
    for (size_t mi = 0; mi < config.m_values.size(); ++mi) {
        const auto m = static_cast<size_t>(config.m_values[mi]);
        for (const auto &[i, s] : [&] {
                 std::vector<std::pair<size_t, SampleSet>> v;
                 auto sets = sample_sets(config, free.num_qubits(), m, mi << 32);
                 for (size_t i = 0; i < sets.size(); ++i) {
                     v.emplace_back(i, std::move(sets[i]));
                 }
                 return v;
             }()) {
            // Both classes share this seed, so their weight draws coincide.
            options.seed = config.seed + (mi << 32) + i;
            const Theorem1Report r = check_theorem1(free, psi, s, gamma, options);
            all_hold = all_hold && r.holds;
            min_upper = std::min(min_upper, r.upper_slack);
            min_lower = std::min(min_lower, r.lower_slack);
            ++checked;
            table.add({std::to_string(m), std::to_string(i), s.str(), num(r.r_augmented),
                       num(r.rhs), num(r.upper_slack), num(r.r_free), num(r.lower_slack),
                       method_name(r.method), r.variant.str(), num(r.tolerance), r.holds ? "true" : "false"});
        }
    }
    summary["class"] = free.spec().str();
    summary["resource"] = psi.label();
    summary["gamma"] = gamma;
    summary["sample_sets"] = checked;
    summary["min_upper_slack"] = checked ? min_upper : 0.0;
    summary["min_lower_slack"] = checked ? min_lower : 0.0;
    summary["all_hold"] = all_hold;
    return finish(std::move(table), std::move(summary), all_hold ? 0 : 4);
}

RunOutput run_theorem2(const ExperimentConfig &config) {
    const CircuitClass free = build_class(ClassSpec::parse(config.class_spec, config.n));
    const QuantumChannel psi = resolve_channel(config.resource, free.num_qubits());
    json summary = summary_header(config);
    const double gamma = resolve_gamma(config, psi, free, summary);
    const int k_max = *std::max_element(config.k_values.begin(), config.k_values.end());
    const auto levels = resource_hierarchy(free, psi, k_max + 1, config.depth);

    CsvTable table({"k", "m", "sample_set", "samples", "lhs", "rhs", "slack", "r_free", "r_k_next",
                    "monotone_slack", "gamma_star", "depth", "method", "holds"});
    bool all_hold = true;
    for (size_t ki = 0; ki < config.k_values.size(); ++ki) {
        const int k = config.k_values[ki];
        for (size_t mi = 0; mi < config.m_values.size(); ++mi) {
            const auto m = static_cast<size_t>(config.m_values[mi]);
            const auto sets = sample_sets(config, free.num_qubits(), m, mi << 32);
            for (size_t i = 0; i < sets.size(); ++i) {
                const Theorem2Report r =
                    check_theorem2(free, levels[static_cast<size_t>(k)],
                                   levels[static_cast<size_t>(k) + 1], k, sets[i], gamma,
                                   config.gamma_max);
                all_hold = all_hold && r.holds;
                table.add({std::to_string(k), std::to_string(m), std::to_string(i), sets[i].str(),
                           num(r.r_k), num(r.bound), num(r.bound_slack), num(r.r_free),
                           num(r.r_k_next), num(r.monotone_slack), num(r.gamma_star),
                           std::to_string(config.depth), "exact", r.holds ? "true" : "false"});
            }
        }
    }
    json sizes = json::array();
    for (const auto &l : levels) {
        sizes.push_back(l.size());
    }
    summary["class"] = free.spec().str();
    summary["resource"] = psi.label();
    summary["gamma_psi"] = gamma;
    summary["depth"] = config.depth;
    summary["hierarchy_sizes"] = std::move(sizes);
    summary["all_hold"] = all_hold;
    return finish(std::move(table), std::move(summary), all_hold ? 0 : 4);
}

RunOutput run_concentration(const ExperimentConfig &config) {
    const CircuitClass cls = build_class(ClassSpec::parse(config.class_spec, config.n));
    const SampleDistribution dist = SampleDistribution::uniform(cls.num_qubits());
    CsvTable table({"m", "t", "trials", "expected", "expected_method", "tail_frequency", "bound",
                    "standard_error", "slack", "holds"});
    bool all_hold = true;
    for (int m : config.m_values) {
        for (double t : config.t_values) {
            const ConcentrationReport r = check_concentration(
                cls, dist, static_cast<size_t>(m), t, config.trials, config.seed);
            all_hold = all_hold && r.holds;
            table.add({std::to_string(m), num(t), std::to_string(r.trials), num(r.expected),
                       method_name(r.expected_method), num(r.tail_frequency), num(r.bound),
                       num(r.standard_error),
                       num(r.bound + 3.0 * r.standard_error - r.tail_frequency),
                       r.holds ? "true" : "false"});
        }
    }
    json summary = summary_header(config);
    summary["class"] = cls.spec().str();
    summary["distribution"] = "uniform";
    summary["all_hold"] = all_hold;
    return finish(std::move(table), std::move(summary), all_hold ? 0 : 4);
}

RunOutput run_learn(const ExperimentConfig &config) {
    const CircuitClass free = build_class(ClassSpec::parse(config.class_spec, config.n));
    const QuantumChannel psi = resolve_channel(config.resource, free.num_qubits());
    const QuantumChannel target = resolve_channel(config.target, free.num_qubits());
    const auto m = static_cast<size_t>(config.m_values.front());
    const int k = config.k_values.front();
    const LearningTask task = LearningTask::consistent(target, m, config.delta);
    const PropositionReport r = check_proposition(free, psi, k, config.depth, task, config.trials,
                                                  config.seed, config.gamma, config.gamma_max);

    CsvTable table({"trial", "erm_label", "er_s", "er_d", "r_free", "bound", "slack", "satisfied"});
    for (const auto &row : r.rows) {
        table.add({std::to_string(row.trial), row.erm_label, num(row.er_s), num(row.er_d),
                   num(row.r_free), num(row.bound), num(row.bound - row.er_d),
                   row.satisfied ? "true" : "false"});
    }
    json summary = summary_header(config);
    summary["class"] = r.class_spec;
    summary["class_size"] = r.class_size;
    summary["target"] = target.label();
    summary["resource"] = r.resource;
    summary["k"] = r.k;
    summary["depth"] = r.depth;
    summary["m"] = r.m;
    summary["delta"] = r.delta;
    summary["gamma_psi"] = r.gamma_psi;
    summary["gamma_star"] = r.gamma_star;
    summary["trials"] = r.trials;
    summary["satisfied"] = r.satisfied;
    summary["fraction"] = r.fraction;
    summary["threshold"] = r.threshold;
    summary["holds"] = r.holds;
    return finish(std::move(table), std::move(summary), r.holds ? 0 : 4);
}

}  // namespace

std::string command_name(Command c) {
    switch (c) {
        case Command::enumerate:
            return "enumerate";
        case Command::robustness:
            return "robustness";
        case Command::complexity:
            return "complexity";
        case Command::check_theorem1:
            return "check-theorem1";
        case Command::check_theorem2:
            return "check-theorem2";
        case Command::concentration:
            return "concentration";
        case Command::learn_experiment:
            return "learn-experiment";
        case Command::sweep:
            return "sweep";
    }
    return "unknown";
}

Command parse_command(std::string_view name) {
    for (Command c : {Command::enumerate, Command::robustness, Command::complexity,
                      Command::check_theorem1, Command::check_theorem2, Command::concentration,
                      Command::learn_experiment, Command::sweep}) {
        if (command_name(c) == name) {
            return c;
        }
    }
    throw config_error("unknown command '" + std::string(name) + "'");
}

std::vector<int> parse_int_range(std::string_view text) {
    std::vector<int> out;
    auto parse_one = [&](std::string_view s) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw config_error("malformed integer '" + std::string(s) + "' in range '" +
                               std::string(text) + "'");
        }
        return v;
    };
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find(',', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view item = text.substr(pos, end - pos);
        if (auto colon = item.find(':'); colon != std::string_view::npos) {
            int lo = parse_one(item.substr(0, colon));
            int hi = parse_one(item.substr(colon + 1));
            for (int v = lo; v <= hi; ++v) {
                out.push_back(v);
            }
        } else if (!item.empty()) {
            out.push_back(parse_one(item));
        }
        pos = end + 1;
    }
    return out;
}

QuantumChannel resolve_channel(const std::string &spec, int n) {
    if (spec.empty()) {
        throw config_error("empty channel specification");
    }
    std::error_code ec;
    if (std::filesystem::is_regular_file(spec, ec)) {
        QuantumChannel c = parse_channel(read_file(spec));
        if (c.num_qubits() != n) {
            throw config_error("channel file '" + spec + "' has the wrong qubit count");
        }
        if (c.label().empty()) {
            c = c.with_label(std::filesystem::path(spec).filename().string());
        }
        return c;
    }
    return gates::word_channel(spec, n);
}

SampleSet parse_samples(std::string_view text) {
    std::vector<SamplePair> pairs;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find(',', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view item = text.substr(pos, end - pos);
        auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw config_error("sample '" + std::string(item) + "' must look like x:y");
        }
        try {
            pairs.push_back(
                {BitString::parse(item.substr(0, colon)), BitString::parse(item.substr(colon + 1))});
        } catch (const guard_error &e) {
            throw config_error(e.what());
        }
        pos = end + 1;
    }
    if (pairs.empty()) {
        throw config_error("empty sample list");
    }
    try {
        return SampleSet(std::move(pairs));
    } catch (const guard_error &e) {
        throw config_error(e.what());
    }
}

void validate(const ExperimentConfig &c) {
    auto fail = [](const std::string &msg) { throw config_error(msg); };
    if (c.n && (*c.n < 1 || *c.n > 3)) {
        fail("n must be in [1, 3]");
    }
    for (int k : c.k_values) {
        if (k < 0) {
            fail("k must be >= 0 (got " + std::to_string(k) + ")");
        }
    }
    for (int m : c.m_values) {
        if (m < 1) {
            fail("m must be >= 1 (got " + std::to_string(m) + ")");
        }
        if (c.method == Method::exact && m > kMaxExactSamples) {
            fail("exact method requires m <= " + std::to_string(kMaxExactSamples));
        }
    }
    for (double t : c.t_values) {
        if (!(t > 0)) {
            fail("t must be > 0");
        }
    }
    if (c.depth < 1) {
        fail("depth L must be >= 1");
    }
    if (!(c.delta > 0 && c.delta < 1)) {
        fail("delta must lie in (0, 1)");
    }
    if (c.draws < 1) {
        fail("draws must be >= 1");
    }
    if (c.trials < 1) {
        fail("trials must be >= 1");
    }
    if (c.command == Command::concentration && c.trials < 1000) {
        fail("concentration requires trials >= 1000");
    }
    if (c.method == Method::monte_carlo && c.mc_samples < 100) {
        fail("mc-samples must be >= 100");
    }
    if (c.method == Method::exact && c.variant.weights == Variant::Weights::gaussian) {
        fail("Gaussian complexity is only available with --method monte_carlo");
    }
    if (c.gamma && *c.gamma < 0) {
        fail("gamma must be >= 0");
    }
    if (c.gamma_max && *c.gamma_max < 0) {
        fail("gamma-max must be >= 0");
    }
    if (c.sweep_check != "theorem2" && c.sweep_check != "complexity") {
        fail("sweep check must be 'theorem2' or 'complexity'");
    }
    const bool needs_k = c.command == Command::check_theorem2 || c.command == Command::learn_experiment;
    const bool needs_m = c.command != Command::enumerate && c.command != Command::robustness &&
                         c.command != Command::sweep;
    if (needs_k && c.k_values.empty()) {
        fail("k must be given");
    }
    if (needs_m && c.m_values.empty()) {
        fail("m must be given");
    }
    if (c.command == Command::concentration && c.t_values.empty()) {
        fail("t must be given");
    }
    if (c.command == Command::robustness) {
        ClassSpec::parse(c.free_spec, c.n);
    } else {
        ClassSpec::parse(c.class_spec, c.n);
    }
    if (!c.samples.empty()) {
        parse_samples(c.samples);
    }
}

std::string canonical_config(const ExperimentConfig &c) {
    json j;
    j["command"] = command_name(c.command);
    j["class"] = c.class_spec;
    j["resource"] = c.resource;
    j["target"] = c.target;
    j["free"] = c.free_spec;
    j["certificate"] = c.certificate;
    j["samples"] = c.samples;
    j["n"] = c.n ? json(*c.n) : json(nullptr);
    j["k"] = c.k_values;
    j["depth"] = c.depth;
    j["m"] = c.m_values;
    j["t"] = c.t_values;
    j["method"] = method_name(c.method);
    j["variant"] = c.variant.str();
    j["mc_samples"] = c.mc_samples;
    j["seed"] = c.seed;
    j["draws"] = c.draws;
    j["trials"] = c.trials;
    j["repetitions"] = c.repetitions;
    j["delta"] = c.delta;
    j["exhaustive"] = c.exhaustive;
    j["gamma"] = c.gamma ? json(*c.gamma) : json(nullptr);
    j["gamma_max"] = c.gamma_max ? json(*c.gamma_max) : json(nullptr);
    j["with_payload"] = c.with_payload;
    j["sweep_check"] = c.sweep_check;
    return j.dump();
}

std::string config_hash(const ExperimentConfig &config) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_config(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunOutput run(const ExperimentConfig &config) {
    validate(config);
    switch (config.command) {
        case Command::enumerate:
            return run_enumerate(config);
        case Command::robustness:
            return run_robustness(config);
        case Command::complexity:
            return run_complexity(config);
        case Command::check_theorem1:
            return run_theorem1(config);
        case Command::check_theorem2:
            return run_theorem2(config);
        case Command::concentration:
            return run_concentration(config);
        case Command::learn_experiment:
            return run_learn(config);
        case Command::sweep:
            return sweep(config);
    }
    throw config_error("unhandled command");
}

RunOutput sweep(const ExperimentConfig &config) {
    validate(config);
    CsvTable table({"k", "m", "draws", "lhs", "rhs", "slack", "monotone_slack", "gamma_star",
                    "status", "error"});
    json summary = summary_header(config);
    json trips = json::array();
    size_t failed = 0;
    size_t violated = 0;

    if (!config.k_values.empty() && !config.m_values.empty()) {
        const CircuitClass free = build_class(ClassSpec::parse(config.class_spec, config.n));
        const QuantumChannel psi = resolve_channel(config.resource, free.num_qubits());
        const double gamma = resolve_gamma(config, psi, free, summary);
        summary["gamma_psi"] = gamma;
        std::vector<std::optional<CircuitClass>> levels;
        auto level = [&](int k) -> const CircuitClass & {
            if (static_cast<size_t>(k) >= levels.size()) {
                levels.resize(static_cast<size_t>(k) + 1);
            }
            auto &slot = levels[static_cast<size_t>(k)];
            if (!slot) {
                slot = augment(free, psi, k, config.depth);
            }
            return *slot;
        };

        for (int k : config.k_values) {
            for (size_t mi = 0; mi < config.m_values.size(); ++mi) {
                const int m = config.m_values[mi];
                const uint64_t cell_stream = (static_cast<uint64_t>(k) << 40) + (mi << 32);
                try {
                    const auto sets =
                        sample_sets(config, free.num_qubits(), static_cast<size_t>(m), cell_stream);
                    const double gs = gamma_star(gamma, config.gamma_max, k);
                    double lhs = 0, rhs = 0, slack = 0, mono = 0;
                    bool first = true;
                    if (config.sweep_check == "theorem2") {
                        for (const auto &s : sets) {
                            const Theorem2Report r =
                                check_theorem2(free, level(k), level(k + 1), k, s, gamma,
                                               config.gamma_max);
                            // Keep the draw with the smallest bound slack.
                            if (first || r.bound_slack < slack) {
                                lhs = r.r_k;
                                rhs = r.bound;
                                slack = r.bound_slack;
                            }
                            mono = first ? r.monotone_slack : std::min(mono, r.monotone_slack);
                            first = false;
                        }
                    } else {
                        double sum_k = 0, sum_free = 0;
                        for (const auto &s : sets) {
                            sum_k += rademacher_set_exact(class_vectors(level(k), s));
                            sum_free += rademacher_set_exact(class_vectors(free, s));
                        }
                        lhs = sum_k / static_cast<double>(sets.size());
                        rhs = gs * sum_free / static_cast<double>(sets.size());
                        slack = rhs - lhs;
                        mono = 0;
                    }
                    const bool ok = slack >= -kInequalitySlack && mono >= -kInequalitySlack;
                    violated += ok ? 0 : 1;
                    table.add({std::to_string(k), std::to_string(m), std::to_string(sets.size()),
                               num(lhs), num(rhs), num(slack), num(mono), num(gs),
                               ok ? "ok" : "violated", ""});
                } catch (const std::exception &e) {
                    ++failed;
                    trips.push_back({{"k", k}, {"m", m}, {"error", e.what()}});
                    table.add({std::to_string(k), std::to_string(m), "0", "", "", "", "", "",
                               "error", e.what()});
                }
            }
        }
    }
    summary["check"] = config.sweep_check;
    summary["cells"] = config.k_values.size() * config.m_values.size();
    summary["failed_cells"] = failed;
    summary["violated_cells"] = violated;
    summary["guard_trips"] = std::move(trips);
    return finish(std::move(table), std::move(summary), violated ? 4 : 0);
}

int exit_code_for(const std::exception &e) {
    if (dynamic_cast<const config_error *>(&e)) {
        return 2;
    }
    if (dynamic_cast<const guard_error *>(&e)) {
        return 3;
    }
    return 4;
}

}  // namespace qrc
