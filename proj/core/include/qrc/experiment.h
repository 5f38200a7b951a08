#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrc/complexity.h"
#include "qrc/qcore.h"

namespace qrc {

enum class Command {
    enumerate,
    robustness,
    complexity,
    check_theorem1,
    check_theorem2,
    concentration,
    learn_experiment,
    sweep,
};

std::string command_name(Command c);
Command parse_command(std::string_view name);

inline constexpr uint64_t kDefaultSeed = 20240501;

/// Everything a run depends on. Identical configs produce identical bytes.
struct ExperimentConfig {
    Command command = Command::enumerate;

    std::string class_spec = "stab:1";
    /// Resource channel (gate word such as "T" or a channel file path).
    std::string resource = "T";
    /// Robustness target / label-generating channel for learning tasks.
    std::string target = "T";
    /// Free class for robustness queries.
    std::string free_spec = "stab:1";
    /// Optional certificate file: one "<gate word> <coefficient>" per line.
    std::string certificate;
    /// Explicit sample set "x:y,x:y,..." (overrides random draws).
    std::string samples;

    /// Qubit count for the augmented class forms that omit it.
    std::optional<int> n;
    std::vector<int> k_values{1};
    int depth = 3;
    std::vector<int> m_values{4};
    std::vector<double> t_values{0.1};

    Method method = Method::exact;
    Variant variant;
    uint64_t mc_samples = 20000;

    uint64_t seed = kDefaultSeed;
    uint64_t draws = 1;
    uint64_t trials = 100;
    uint64_t repetitions = 100;
    double delta = 0.1;
    bool exhaustive = false;
    std::optional<double> gamma;
    std::optional<double> gamma_max;
    bool with_payload = false;

    /// Which check a sweep runs per (k, m) cell: "theorem2" or "complexity".
    std::string sweep_check = "theorem2";
};

/// Throws config_error naming the first violated constraint.
void validate(const ExperimentConfig &config);

/// Canonical serialized form; hashed into the summary record.
std::string canonical_config(const ExperimentConfig &config);

/// 64-bit FNV-1a of canonical_config, as 16 hex digits.
std::string config_hash(const ExperimentConfig &config);

struct Artifact {
    std::string name;
    std::string content;
};

struct RunOutput {
    /// 0 on success, 4 when the run completed but a numerical check failed
    /// or an LP was infeasible.
    int exit_code = 0;
    std::string csv;
    /// JSON summary record.
    std::string summary;
    /// Additional files (e.g. class manifests).
    std::vector<Artifact> extras;
};

/// Validates, then executes. Config problems throw config_error before any
/// output is produced; guard_error and numerical_error propagate.
RunOutput run(const ExperimentConfig &config);

/// Cartesian product over config.k_values x config.m_values, one CSV row per
/// cell. Cell failures are recorded in the row and the sweep continues.
RunOutput sweep(const ExperimentConfig &config);

/// Exit code for an exception escaping run(): 2 config, 3 guard, 4 numerical.
int exit_code_for(const std::exception &e);

/// Parses "1,2,3", "0:2" (inclusive) or "" (empty).
std::vector<int> parse_int_range(std::string_view text);

/// Resolves a channel argument: an existing file is parsed as a channel
/// record, anything else as a gate word on n qubits.
QuantumChannel resolve_channel(const std::string &spec, int n);

/// Parses "x:y,x:y" into a sample set.
SampleSet parse_samples(std::string_view text);

}  // namespace qrc
