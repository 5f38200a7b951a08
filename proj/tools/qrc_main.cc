// qrc: command-line runner for channel classes, robustness LPs, complexity
// estimates and the bound checks built on them.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrc/errors.h"
#include "qrc/experiment.h"

namespace {

using qrc::ExperimentConfig;
using json = nlohmann::json;

struct Flags {
    std::string config_file;
    std::string out;
    std::string class_spec, resource, target, free_spec, certificate, samples;
    int n = 0;
    std::string k, m, t;
    int depth = 0;
    std::string method, variant;
    uint64_t mc_samples = 0, seed = 0, draws = 0, trials = 0, repetitions = 0;
    double delta = 0, gamma = 0, gamma_max = 0;
    bool exhaustive = false, with_payload = false;
    std::string check;
};

std::vector<double> parse_reals(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != item.size()) {
            throw qrc::config_error("malformed number '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

qrc::Method parse_method(const std::string &s) {
    if (s == "exact") {
        return qrc::Method::exact;
    }
    if (s == "monte_carlo" || s == "mc") {
        return qrc::Method::monte_carlo;
    }
    throw qrc::config_error("unknown method '" + s + "' (exact|monte_carlo)");
}

qrc::Variant parse_variant(const std::string &s) {
    qrc::Variant v;
    std::string base = s;
    if (base.starts_with("abs-")) {
        v.absolute = true;
        base = base.substr(4);
    }
    if (base == "rademacher") {
        v.weights = qrc::Variant::Weights::rademacher;
    } else if (base == "gaussian") {
        v.weights = qrc::Variant::Weights::gaussian;
    } else {
        throw qrc::config_error("unknown variant '" + s +
                                "' (rademacher|gaussian, optionally prefixed abs-)");
    }
    return v;
}

std::vector<int> int_list(const json &j) {
    if (j.is_string()) {
        return qrc::parse_int_range(j.get<std::string>());
    }
    if (j.is_number_integer()) {
        return {j.get<int>()};
    }
    return j.get<std::vector<int>>();
}

// Config file: a JSON object using the keys of the canonical config.
void apply_config_file(const std::string &path, ExperimentConfig &c) {
    std::ifstream in(path);
    if (!in) {
        throw qrc::config_error("cannot read config file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception &e) {
        throw qrc::config_error("config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) {
        throw qrc::config_error("config file must hold a JSON object");
    }
    try {
        for (auto &[key, v] : j.items()) {
            if (key == "command") {
                // The subcommand on the command line decides.
            } else if (key == "class") {
                c.class_spec = v.get<std::string>();
            } else if (key == "resource") {
                c.resource = v.get<std::string>();
            } else if (key == "target") {
                c.target = v.get<std::string>();
            } else if (key == "free") {
                c.free_spec = v.get<std::string>();
            } else if (key == "certificate") {
                c.certificate = v.get<std::string>();
            } else if (key == "samples") {
                c.samples = v.get<std::string>();
            } else if (key == "n") {
                if (!v.is_null()) {
                    c.n = v.get<int>();
                }
            } else if (key == "k") {
                c.k_values = int_list(v);
            } else if (key == "depth") {
                c.depth = v.get<int>();
            } else if (key == "m") {
                c.m_values = int_list(v);
            } else if (key == "t") {
                c.t_values = v.is_number() ? std::vector<double>{v.get<double>()}
                                           : v.get<std::vector<double>>();
            } else if (key == "method") {
                c.method = parse_method(v.get<std::string>());
            } else if (key == "variant") {
                c.variant = parse_variant(v.get<std::string>());
            } else if (key == "mc_samples") {
                c.mc_samples = v.get<uint64_t>();
            } else if (key == "seed") {
                c.seed = v.get<uint64_t>();
            } else if (key == "draws") {
                c.draws = v.get<uint64_t>();
            } else if (key == "trials") {
                c.trials = v.get<uint64_t>();
            } else if (key == "repetitions") {
                c.repetitions = v.get<uint64_t>();
            } else if (key == "delta") {
                c.delta = v.get<double>();
            } else if (key == "exhaustive") {
                c.exhaustive = v.get<bool>();
            } else if (key == "gamma") {
                if (!v.is_null()) {
                    c.gamma = v.get<double>();
                }
            } else if (key == "gamma_max") {
                if (!v.is_null()) {
                    c.gamma_max = v.get<double>();
                }
            } else if (key == "with_payload") {
                c.with_payload = v.get<bool>();
            } else if (key == "sweep_check") {
                c.sweep_check = v.get<std::string>();
            } else {
                throw qrc::config_error("unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception &e) {
        throw qrc::config_error("config file '" + path + "': " + e.what());
    }
}

void add_options(CLI::App *sub, Flags &f) {
    sub->add_option("--config", f.config_file, "JSON config file; flags override its values");
    sub->add_option("--out", f.out, "Output directory (default: CSV to stdout, summary to stderr)");
    sub->add_option("--class", f.class_spec, "Class spec: stab:n, iqp:n, stab+T:k:L, iqp+CCZ:k:L");
    sub->add_option("--resource", f.resource, "Resource channel: gate word or channel file");
    sub->add_option("--target", f.target, "Target channel: gate word or channel file");
    sub->add_option("--free", f.free_spec, "Free class spec for robustness");
    sub->add_option("--certificate", f.certificate, "File of '<gate word> <coefficient>' lines");
    sub->add_option("--samples", f.samples, "Explicit sample set x:y,x:y,...");
    sub->add_option("--n", f.n, "Qubit count");
    sub->add_option("--k", f.k, "Resource uses: 2, 1,2,3 or 0:2");
    sub->add_option("--depth,-L", f.depth, "Word length cap L");
    sub->add_option("--m", f.m, "Sample sizes: 4, 1,2,3 or 1:3");
    sub->add_option("--t", f.t, "Deviation thresholds, comma separated");
    sub->add_option("--method", f.method, "exact | monte_carlo");
    sub->add_option("--variant", f.variant, "rademacher | gaussian | abs-rademacher | abs-gaussian");
    sub->add_option("--mc-samples", f.mc_samples, "Monte-Carlo sign draws");
    sub->add_option("--seed", f.seed, "Base seed");
    sub->add_option("--draws", f.draws, "Seeded sample sets per m");
    sub->add_option("--trials", f.trials, "Trials for concentration and learning experiments");
    sub->add_option("--repetitions", f.repetitions, "Repetitions for expected complexity");
    sub->add_option("--delta", f.delta, "Confidence parameter");
    sub->add_option("--gamma", f.gamma, "Use this robustness instead of solving the LP");
    sub->add_option("--gamma-max", f.gamma_max, "Upper bound on the maximal robustness");
    sub->add_flag("--exhaustive", f.exhaustive, "Enumerate every sample set of each size m");
    sub->add_flag("--with-payload", f.with_payload, "Embed superoperators in class manifests");
    sub->add_option("--check", f.check, "Sweep check: theorem2 | complexity");
}

ExperimentConfig build_config(CLI::App *sub, qrc::Command command, const Flags &f) {
    ExperimentConfig c;
    if (sub->count("--config")) {
        apply_config_file(f.config_file, c);
    }
    c.command = command;
    auto given = [&](const char *name) { return sub->count(name) > 0; };
    if (given("--class")) c.class_spec = f.class_spec;
    if (given("--resource")) c.resource = f.resource;
    if (given("--target")) c.target = f.target;
    if (given("--free")) c.free_spec = f.free_spec;
    if (given("--certificate")) c.certificate = f.certificate;
    if (given("--samples")) c.samples = f.samples;
    if (given("--n")) c.n = f.n;
    if (given("--k")) c.k_values = qrc::parse_int_range(f.k);
    if (given("--depth")) c.depth = f.depth;
    if (given("--m")) c.m_values = qrc::parse_int_range(f.m);
    if (given("--t")) c.t_values = parse_reals(f.t);
    if (given("--method")) c.method = parse_method(f.method);
    if (given("--variant")) c.variant = parse_variant(f.variant);
    if (given("--mc-samples")) c.mc_samples = f.mc_samples;
    if (given("--seed")) c.seed = f.seed;
    if (given("--draws")) c.draws = f.draws;
    if (given("--trials")) c.trials = f.trials;
    if (given("--repetitions")) c.repetitions = f.repetitions;
    if (given("--delta")) c.delta = f.delta;
    if (given("--gamma")) c.gamma = f.gamma;
    if (given("--gamma-max")) c.gamma_max = f.gamma_max;
    if (given("--exhaustive")) c.exhaustive = f.exhaustive;
    if (given("--with-payload")) c.with_payload = f.with_payload;
    if (given("--check")) c.sweep_check = f.check;
    return c;
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) {
        throw qrc::guard_error("cannot write '" + path.string() + "'");
    }
}

void emit(const qrc::RunOutput &result, const std::string &out_dir) {
    if (out_dir.empty()) {
        std::cout << result.csv;
        std::cerr << result.summary;
        return;
    }
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw qrc::config_error("cannot create output directory '" + out_dir + "'");
    }
    write_file(dir / "results.csv", result.csv);
    write_file(dir / "summary.json", result.summary);
    for (const auto &a : result.extras) {
        write_file(dir / a.name, a.content);
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Resource-augmented channel classes: enumeration, robustness and complexity bounds"};
    app.set_version_flag("--version", QRC_VERSION_STRING);
    app.require_subcommand(1);

    Flags flags;
    const std::pair<const char *, const char *> commands[] = {
        {"enumerate", "Enumerate a channel class and write its manifest"},
        {"robustness", "Free robustness of a target channel via LP"},
        {"complexity", "Empirical Rademacher or Gaussian complexity of a class"},
        {"check-theorem1", "Check the single-resource sandwich bound"},
        {"check-theorem2", "Check the k-resource bound and monotonicity"},
        {"concentration", "Measure the tail of the empirical complexity"},
        {"learn-experiment", "ERM learning experiment against the generalization bound"},
        {"sweep", "Run a check over the (k, m) grid"},
    };
    std::vector<CLI::App *> subs;
    for (const auto &[name, help] : commands) {
        CLI::App *sub = app.add_subcommand(name, help);
        add_options(sub, flags);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (CLI::App *sub : subs) {
            if (sub->parsed()) {
                const qrc::Command command = qrc::parse_command(sub->get_name());
                const ExperimentConfig config = build_config(sub, command, flags);
                const qrc::RunOutput result = qrc::run(config);
                emit(result, flags.out);
                return result.exit_code;
            }
        }
    } catch (const std::exception &e) {
        std::cerr << "qrc: error: " << e.what() << "\n";
        return qrc::exit_code_for(e);
    }
    return 2;
}
