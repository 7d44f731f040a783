#include "qwindex/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace qwindex;

namespace {

struct Globals {
    double rank_tol = 1e-8;
    int grid = 4096;
    double margin = 1e-6;
    std::uint64_t seed = 1;
    std::string out;
    std::string format;
    CLI::Option* rank_tol_opt = nullptr;
    CLI::Option* grid_opt = nullptr;
    CLI::Option* margin_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
};

void apply_overrides(const Globals& g, Tolerances& t) {
    if (g.rank_tol_opt->count()) t.rank_tol = g.rank_tol;
    if (g.grid_opt->count()) t.grid_n = g.grid;
    if (g.margin_opt->count()) t.margin = g.margin;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    } else {
        out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
    }
}

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string json_as_csv(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(json::parse(text), "", rows);
    std::string out = "key,value\n";
    for (const auto& [k, v] : rows) out += quote(k) + "," + quote(v) + "\n";
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

std::string csv_as_json(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    auto header = split_csv_line(line);
    json rows = json::array();
    while (std::getline(in, line)) {
        auto cells = split_csv_line(line);
        json row = json::object();
        for (std::size_t k = 0; k < header.size() && k < cells.size(); ++k) row[header[k]] = cells[k];
        rows.push_back(row);
    }
    return rows.dump(2) + "\n";
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot write " + path);
    f << text;
}

// native is "json" or "csv"
std::string formatted(const std::string& text, const std::string& native, const std::string& format) {
    if (format.empty() || format == native) return text;
    return native == "json" ? json_as_csv(text) : csv_as_json(text);
}

Scenario scenario_from(const std::string& path, const Globals& g) {
    Scenario s = load_scenario(path);
    apply_overrides(g, s.tolerances);
    if (g.seed_opt->count()) s.seed = g.seed;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetry indices and winding numbers of chiral unitaries on the lattice"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    g.rank_tol_opt = app.add_option("--rank-tol", g.rank_tol, "relative singular value cutoff for kernels")
                         ->check(CLI::PositiveNumber);
    g.grid_opt = app.add_option("--grid", g.grid, "circle grid size (power of two)")->check(CLI::PositiveNumber);
    g.margin_opt = app.add_option("--margin", g.margin, "certification margin")->check(CLI::PositiveNumber);
    g.seed_opt = app.add_option("--seed", g.seed, "random seed");
    app.add_option("--out", g.out, "write output to this file instead of stdout");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));

    std::string scenario_file, sweep_file, suite = "all", side;
    int trials = 1000, lattice_models = 20, threads = 0;

    auto* index = app.add_subcommand("index", "compute every applicable index of a scenario");
    index->add_option("scenario", scenario_file)->required()->check(CLI::ExistingFile);

    auto* sweep = app.add_subcommand("sweep", "evaluate a scenario over a parameter grid (CSV)");
    sweep->add_option("sweep", sweep_file)->required()->check(CLI::ExistingFile);
    sweep->add_option("--threads", threads, "worker threads (0: all cores)");

    auto* verify = app.add_subcommand("verify", "run the randomized property suites");
    verify->add_option("--suite", suite)->check(CLI::IsMember({"finite", "lattice", "all"}));
    verify->add_option("--trials", trials, "finite trials per suite")->check(CLI::NonNegativeNumber);
    verify->add_option("--lattice-models", lattice_models, "lattice models per suite")->check(CLI::NonNegativeNumber);

    auto* spectrum = app.add_subcommand("spectrum", "sampled eigenvalues of the limit symbols (CSV)");
    spectrum->add_option("scenario", scenario_file)->required()->check(CLI::ExistingFile);

    auto* winding = app.add_subcommand("winding", "determinant winding of the limit symbols");
    winding->add_option("scenario", scenario_file)->required()->check(CLI::ExistingFile);
    winding->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        CommandResult r;
        std::string native = "json";
        if (*index) {
            r = run_index(scenario_from(scenario_file, g));
        } else if (*sweep) {
            SweepSpec spec = parse_sweep(read_json_file(sweep_file));
            std::optional<Tolerances> tol;
            if (g.rank_tol_opt->count() || g.grid_opt->count() || g.margin_opt->count()) {
                Scenario base = parse_scenario(spec.scenario);
                apply_overrides(g, base.tolerances);
                tol = base.tolerances;
            }
            r = run_sweep(spec, tol, threads);
            native = "csv";
            if (g.out.empty() && !spec.output.empty()) g.out = spec.output;
        } else if (*verify) {
            VerifyOptions opts;
            opts.suite = suite;
            opts.seed = g.seed;
            opts.trials = trials;
            opts.lattice_models = lattice_models;
            apply_overrides(g, opts.tolerances);
            VerifySummary v = run_verify(opts);
            json j;
            j["seed"] = opts.seed;
            j["suite"] = suite;
            json body = verify_to_json(v);
            for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
            for (const auto& w : v.warnings) std::cerr << "warning: " << w << "\n";
            r.output = j.dump(2) + "\n";
            r.exit_code = v.ok() ? 0 : 2;
        } else if (*spectrum) {
            r = run_spectrum(scenario_from(scenario_file, g));
            native = "csv";
        } else if (*winding) {
            std::optional<Side> s;
            if (side == "left") s = Side::Left;
            if (side == "right") s = Side::Right;
            r = run_winding(scenario_from(scenario_file, g), s);
        }
        emit(formatted(r.output, native, g.format), g.out);
        return r.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
