#pragma once

#include "qwindex/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qwindex {

/// Model description read from a JSON scenario file.
///
///   { "model": "split_step" | "weighted_shift" | "generator" | "custom_banded",
///     "params": { ... }, "tolerances": { "rank_tol", "grid_n", "margin" },
///     "truncation": L, "seed": s }
struct Scenario {
    std::string model;
    json params;
    Tolerances tolerances;
    long truncation = 0;
    std::uint64_t seed = 0;
};

Scenario parse_scenario(const json& j);
Scenario load_scenario(const std::string& path);
json read_json_file(const std::string& path);

/// Coefficient profile: a number, or { profile: step|table|tanh, left, right, at, table, width }.
CoefficientFunctioncd parse_profile(const json& j, const std::string& where);

SplitStepParams parse_split_step(const json& params);

struct Model {
    enum Kind { Lattice, Finite, Banded, Unitary } kind = Lattice;
    std::optional<ChiralPair> pair;      // Lattice
    std::optional<BandedOperatorcd> op;  // Banded, Unitary
    MatrixXc u, gamma0, h;               // Finite (h only for generator models)
    std::optional<GeneratorWalk> generator;
};

Model build_model(const Scenario& s);

struct CommandResult {
    int exit_code = 0;
    std::string output;
};

CommandResult run_index(const Scenario& s);
CommandResult run_spectrum(const Scenario& s);
CommandResult run_winding(const Scenario& s, std::optional<Side> side);

struct SweepAxis {
    std::string path;  // dotted path into the scenario, e.g. params.a.right
    std::vector<json> values;
};

struct SweepSpec {
    json scenario;
    std::vector<SweepAxis> axes;
    std::string output;
};

SweepSpec parse_sweep(const json& j);

/// One CSV row per grid point, in lexicographic axis order (first axis slowest).
CommandResult run_sweep(const SweepSpec& spec, const std::optional<Tolerances>& override_tol, int threads = 0);

struct VerifyOptions {
    std::string suite = "all";  // finite | lattice | all
    std::uint64_t seed = 1;
    int trials = 1000;
    int lattice_models = 20;
    Tolerances tolerances;
};

struct SuiteSummary {
    std::string name;
    int trials = 0;
    int passed = 0;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
};

struct VerifySummary {
    std::vector<SuiteSummary> suites;
    std::vector<std::string> warnings;
    bool ok() const;
};

VerifySummary run_verify(const VerifyOptions& opts);
json verify_to_json(const VerifySummary& v);

/// Set a dotted path inside a JSON document, creating objects as needed.
void set_path(json& doc, const std::string& path, const json& value);

}  // namespace qwindex
