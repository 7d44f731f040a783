#include "qwindex/scenario.hpp"

#include "qwindex/indices.hpp"
#include "qwindex/random.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace qwindex {

namespace {

template <typename F>
void parallel_for(std::size_t n, int threads, F f) {
    unsigned hw = threads > 0 ? unsigned(threads) : std::max(1u, std::thread::hardware_concurrency());
    hw = unsigned(std::min<std::size_t>(hw, n));
    if (hw <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < hw; ++t)
        pool.emplace_back([&]() {
            for (std::size_t i = next++; i < n; i = next++) f(i);
        });
    for (auto& th : pool) th.join();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw PreconditionError(where + ": expected a number, got " + j.dump());
    return j.get<double>();
}

long integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw PreconditionError(where + ": expected an integer, got " + j.dump());
    return j.get<long>();
}

MatrixXc matrix_at(const json& params, const char* key, const std::string& where) {
    if (!params.contains(key)) throw PreconditionError(where + ": missing key '" + key + "'");
    try {
        return matrix_from_json(params.at(key));
    } catch (const PreconditionError& e) {
        throw PreconditionError(where + "." + key + ": " + e.what());
    }
}

Tolerances parse_tolerances(const json& j) {
    require_keys(j, {"rank_tol", "grid_n", "margin"}, "tolerances");
    Tolerances t;
    if (j.contains("rank_tol")) t.rank_tol = number(j["rank_tol"], "tolerances.rank_tol");
    if (j.contains("grid_n")) t.grid_n = int(integer(j["grid_n"], "tolerances.grid_n"));
    if (j.contains("margin")) t.margin = number(j["margin"], "tolerances.margin");
    if (!(t.rank_tol > 0) || !(t.margin > 0) || t.grid_n <= 0)
        throw PreconditionError("tolerances: values must be positive");
    if (t.grid_n < 16 || (t.grid_n & (t.grid_n - 1)) != 0)
        throw PreconditionError("tolerances.grid_n: must be a power of two and at least 16");
    return t;
}

BandedOperatorcd symbol_source(const Model& m) {
    switch (m.kind) {
        case Model::Lattice: return m.pair->u;
        case Model::Banded:
        case Model::Unitary: return *m.op;
        default: throw PreconditionError("a lattice model is required (finite-dimensional scenario given)");
    }
}

json truncation_diagnostic(const ChiralPair& pair, long l) {
    json d;
    d["L"] = l;
    const auto one = identity_op(pair.u.fiber_dim());
    for (int sign : {+1, -1}) {
        MatrixXc m = truncate(subtract(pair.u, scale(cplx(sign), one)), l).matrix;
        const Eigen::VectorXd s = svd(m, false).values;
        int small = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i) small += s(i) < 1e-6;
        d[sign > 0 ? "small_singular_values_u_minus_one" : "small_singular_values_u_plus_one"] = small;
    }
    return d;
}

IndexReport make_report(const Scenario& s, const Model& m) {
    switch (m.kind) {
        case Model::Lattice: {
            IndexReport r = lattice_report(*m.pair, s.tolerances);
            if (s.truncation > 0) r.details = json{{"truncation", truncation_diagnostic(*m.pair, s.truncation)}};
            return r;
        }
        case Model::Banded: return banded_report(*m.op, s.tolerances);
        case Model::Unitary: return unitary_winding_report(*m.op, s.tolerances);
        case Model::Finite: {
            IndexReport r = finite_report(m.u, m.gamma0, s.tolerances);
            r.model = "generator";
            if (!r.gates_passed()) return r;
            GeneratorIndex gi = generator_index(m.h, m.gamma0, s.tolerances.rank_tol);
            r.generator_index = gi.index;
            SymmetryIndices eta = symmetry_index_pm(m.generator->u_eta, m.gamma0, s.tolerances.rank_tol);
            json d;
            d["convention"] = m.generator->convention;
            d["regularized"] = m.generator->regularized;
            d["norm_h"] = m.generator->norm_h;
            d["graded_signature_ker_h"] = gi.graded_signature;
            d["eta_convention"] = "-exp(i pi eta(H))";
            d["eta"] = m.generator->eta;
            d["si_plus_eta"] = eta.si_plus;
            d["si_minus_eta"] = eta.si_minus;
            r.details = d;
            return r;
        }
    }
    throw Error("unknown model kind");
}

const char* const kModels[] = {"split_step", "weighted_shift", "generator", "custom_banded"};

}  // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw PreconditionError(path + ": " + e.what());
    }
}

Scenario parse_scenario(const json& j) {
    require_keys(j, {"model", "params", "tolerances", "truncation", "seed"}, "scenario");
    if (!j.contains("model") || !j["model"].is_string()) throw PreconditionError("scenario: missing string key 'model'");
    Scenario s;
    s.model = j["model"].get<std::string>();
    if (std::find(std::begin(kModels), std::end(kModels), s.model) == std::end(kModels))
        throw PreconditionError("scenario.model: unknown model '" + s.model + "'");
    s.params = j.value("params", json::object());
    if (!s.params.is_object()) throw PreconditionError("scenario.params: expected an object");
    if (j.contains("tolerances")) s.tolerances = parse_tolerances(j["tolerances"]);
    if (j.contains("truncation")) {
        s.truncation = integer(j["truncation"], "scenario.truncation");
        if (s.truncation < 0) throw PreconditionError("scenario.truncation: must be non-negative");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw PreconditionError("scenario.seed: expected a non-negative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    json j = read_json_file(path);
    try {
        return parse_scenario(j);
    } catch (const PreconditionError& e) {
        throw PreconditionError(path + ": " + e.what());
    }
}

CoefficientFunctioncd parse_profile(const json& j, const std::string& where) {
    if (j.is_number() || j.is_array()) {
        cplx v;
        try {
            v = complex_from_json(j);
        } catch (const PreconditionError& e) {
            throw PreconditionError(where + ": " + e.what());
        }
        return CoefficientFunctioncd::scalar(v, v);
    }
    require_keys(j, {"profile", "left", "right", "at", "table", "center", "width"}, where);
    if (!j.contains("profile") || !j["profile"].is_string()) throw PreconditionError(where + ": missing key 'profile'");
    const std::string kind = j["profile"].get<std::string>();
    auto value = [&](const char* key) {
        if (!j.contains(key)) throw PreconditionError(where + ": missing key '" + key + "'");
        try {
            return complex_from_json(j[key]);
        } catch (const PreconditionError& e) {
            throw PreconditionError(where + "." + key + ": " + e.what());
        }
    };
    const cplx left = value("left"), right = value("right");
    const MatrixXc lm = MatrixXc::Constant(1, 1, left), rm = MatrixXc::Constant(1, 1, right);
    if (kind == "step") {
        long at = j.contains("at") ? integer(j["at"], where + ".at") : 0;
        return CoefficientFunctioncd(lm, rm, at);
    }
    if (kind == "table") {
        if (!j.contains("table") || !j["table"].is_array()) throw PreconditionError(where + ": missing array 'table'");
        std::vector<std::pair<long, MatrixXc>> table;
        for (const auto& e : j["table"]) {
            require_keys(e, {"x", "value"}, where + ".table");
            if (!e.contains("x") || !e.contains("value"))
                throw PreconditionError(where + ".table: entries need 'x' and 'value'");
            table.emplace_back(integer(e["x"], where + ".table.x"), MatrixXc::Constant(1, 1, complex_from_json(e["value"])));
        }
        try {
            return CoefficientFunctioncd::from_table(lm, rm, table);
        } catch (const PreconditionError& e) {
            throw PreconditionError(where + ".table: " + e.what());
        }
    }
    if (kind == "tanh") {
        const double center = j.contains("center") ? number(j["center"], where + ".center") : 0.0;
        const double width = j.contains("width") ? number(j["width"], where + ".width") : 1.0;
        if (!(width > 0)) throw PreconditionError(where + ".width: must be positive");
        // beyond 20 widths tanh equals +-1 in double precision
        const long lo = long(std::floor(center - 20 * width)), hi = long(std::ceil(center + 20 * width));
        std::vector<MatrixXc> bulk;
        for (long x = lo; x <= hi; ++x) {
            double t = 0.5 * (1 + std::tanh((double(x) - center) / width));
            bulk.push_back(MatrixXc::Constant(1, 1, left + (right - left) * t));
        }
        return CoefficientFunctioncd(lm, rm, lo, std::move(bulk));
    }
    throw PreconditionError(where + ".profile: unknown profile '" + kind + "' (step, table, tanh)");
}

SplitStepParams parse_split_step(const json& params) {
    require_keys(params, {"a", "b", "c", "d", "n"}, "params");
    SplitStepParams p;
    if (!params.contains("a")) throw PreconditionError("params: missing key 'a'");
    p.a = parse_profile(params["a"], "params.a");
    if (params.contains("b")) {
        p.b = parse_profile(params["b"], "params.b");
    } else {
        p.b = p.a.map([](const MatrixXc& m) -> MatrixXc {
            double a = m(0, 0).real();
            return MatrixXc::Constant(1, 1, std::sqrt(std::max(0.0, 1 - a * a)));
        });
    }
    p.c = params.contains("c") ? number(params["c"], "params.c") : 1.0;
    if (params.contains("d")) {
        p.d_coin = complex_from_json(params["d"]);
    } else {
        p.d_coin = std::sqrt(std::max(0.0, 1 - p.c * p.c));
    }
    if (std::abs(p.c * p.c + std::norm(p.d_coin) - 1) > 1e-12)
        throw PreconditionError("params: c^2 + |d|^2 must equal 1");
    p.n = params.contains("n") ? int(integer(params["n"], "params.n")) : 1;
    if (p.n < 1) throw PreconditionError("params.n: must be at least 1");
    return p;
}

Model build_model(const Scenario& s) {
    Model m;
    const json& p = s.params;
    try {
        if (s.model == "split_step") {
            m.kind = Model::Lattice;
            m.pair = build_walk(parse_split_step(p));
        } else if (s.model == "weighted_shift") {
            require_keys(p, {"m", "n", "C"}, "params");
            int mm = p.contains("m") ? int(integer(p["m"], "params.m")) : 0;
            int nn = p.contains("n") ? int(integer(p["n"], "params.n")) : 0;
            MatrixXc c = p.contains("C") ? matrix_at(p, "C", "params") : MatrixXc(eye(2));
            if (c.rows() != 2 || c.cols() != 2) throw PreconditionError("params.C: expected a 2x2 matrix");
            if (unitarity_defect(c) > 1e-10) throw PreconditionError("params.C: not unitary");
            m.kind = Model::Unitary;
            m.op = build_weighted_shift_walk(mm, nn, c);
        } else if (s.model == "generator") {
            require_keys(p, {"H", "gamma0"}, "params");
            m.kind = Model::Finite;
            m.h = matrix_at(p, "H", "params");
            m.gamma0 = matrix_at(p, "gamma0", "params");
            if (m.h.rows() != m.h.cols() || m.gamma0.rows() != m.h.rows() || m.gamma0.cols() != m.h.cols())
                throw PreconditionError("params: H and gamma0 must be square of equal size");
            m.generator = build_generator_walk(m.h, m.gamma0);
            m.u = m.generator->u_exp;
        } else {
            require_keys(p, {"operator", "gamma0", "gamma1"}, "params");
            if (p.contains("operator")) {
                if (p.contains("gamma0") || p.contains("gamma1"))
                    throw PreconditionError("params: give either 'operator' or 'gamma0' and 'gamma1'");
                m.kind = Model::Banded;
                m.op = operator_from_json(p["operator"]);
            } else {
                if (!p.contains("gamma0") || !p.contains("gamma1"))
                    throw PreconditionError("params: custom_banded needs 'operator' or both 'gamma0' and 'gamma1'");
                auto g0 = operator_from_json(p["gamma0"]);
                auto g1 = operator_from_json(p["gamma1"]);
                if (g0.fiber_dim() != g1.fiber_dim()) throw PreconditionError("params: gamma0 and gamma1 fiber_dim differ");
                m.kind = Model::Lattice;
                m.pair = make_chiral_pair(g0, g1);
            }
        }
    } catch (const json::exception& e) {
        throw PreconditionError("params: " + std::string(e.what()));
    }
    return m;
}

CommandResult run_index(const Scenario& s) {
    Model m = build_model(s);
    IndexReport r = make_report(s, m);
    CommandResult out;
    out.exit_code = r.gates_passed() ? 0 : 2;
    out.output = report_to_json(r).dump(2) + "\n";
    return out;
}

CommandResult run_spectrum(const Scenario& s) {
    Model m = build_model(s);
    BandedOperatorcd u = symbol_source(m);
    const int n = s.tolerances.grid_n;
    std::ostringstream os;
    os << "side,theta,eigenvalue_re,eigenvalue_im\n";
    for (Side side : {Side::Left, Side::Right}) {
        auto loop = symbol_at(u, side);
        for (int k = 0; k < n; ++k) {
            const double theta = 2 * kPi * k / n;
            Eigen::ComplexEigenSolver<MatrixXc> es(loop(circle_point(k, n)), false);
            std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
            std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
                return std::arg(a) != std::arg(b) ? std::arg(a) < std::arg(b) : std::abs(a) < std::abs(b);
            });
            for (cplx e : ev)
                os << to_string(side) << ',' << fmt(theta) << ',' << fmt(e.real()) << ',' << fmt(e.imag()) << '\n';
        }
    }
    return CommandResult{0, os.str()};
}

CommandResult run_winding(const Scenario& s, std::optional<Side> side) {
    Model m = build_model(s);
    BandedOperatorcd u = symbol_source(m);
    Certification inv = invertibility(u, s.tolerances.grid_n, s.tolerances.margin);
    json out;
    for (Side sd : {Side::Left, Side::Right}) {
        if (side && *side != sd) continue;
        auto loop = symbol_at(u, sd);
        WindingResult w = winding_det(loop, s.tolerances.grid_n);
        NcWinding nc = nc_winding(loop, s.tolerances.grid_n);
        json j;
        j["raw_phase"] = w.raw_phase;
        j["rounded"] = w.rounded;
        j["grid_n"] = w.grid_n;
        j["certified"] = inv.certified();
        j["nc_winding"] = nc.rational.str();
        out[to_string(sd)] = j;
    }
    CommandResult r;
    r.exit_code = inv.certified() ? 0 : 2;
    r.output = out.dump(2) + "\n";
    return r;
}

void set_path(json& doc, const std::string& path, const json& value) {
    if (path.empty()) throw PreconditionError("sweep axis: empty path");
    json* cur = &doc;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = path.find('.', start);
        std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw PreconditionError("sweep axis: malformed path '" + path + "'");
        json* next;
        if (cur->is_array()) {
            std::size_t idx = std::stoul(key);
            if (idx >= cur->size()) throw PreconditionError("sweep axis: index out of range in '" + path + "'");
            next = &(*cur)[idx];
        } else {
            if (cur->is_null()) *cur = json::object();
            if (!cur->is_object()) throw PreconditionError("sweep axis: '" + path + "' does not name an object member");
            next = &(*cur)[key];
        }
        if (dot == std::string::npos) {
            *next = value;
            return;
        }
        cur = next;
        start = dot + 1;
    }
}

SweepSpec parse_sweep(const json& j) {
    require_keys(j, {"scenario", "axes", "output"}, "sweep");
    SweepSpec s;
    if (!j.contains("scenario") || !j["scenario"].is_object()) throw PreconditionError("sweep: missing object 'scenario'");
    s.scenario = j["scenario"];
    if (!j.contains("axes") || !j["axes"].is_array() || j["axes"].empty())
        throw PreconditionError("sweep.axes: at least one axis is required");
    for (const auto& a : j["axes"]) {
        require_keys(a, {"path", "values", "linspace"}, "sweep.axes");
        SweepAxis axis;
        if (!a.contains("path") || !a["path"].is_string()) throw PreconditionError("sweep.axes: missing string 'path'");
        axis.path = a["path"].get<std::string>();
        if (a.contains("values")) {
            if (!a["values"].is_array()) throw PreconditionError("sweep.axes." + axis.path + ": 'values' must be an array");
            for (const auto& v : a["values"]) axis.values.push_back(v);
        } else if (a.contains("linspace")) {
            const json& l = a["linspace"];
            if (!l.is_array() || l.size() != 3) throw PreconditionError("sweep.axes." + axis.path + ": linspace is [start, stop, count]");
            double lo = number(l[0], "linspace"), hi = number(l[1], "linspace");
            long cnt = integer(l[2], "linspace");
            for (long k = 0; k < cnt; ++k) axis.values.push_back(cnt == 1 ? lo : lo + (hi - lo) * double(k) / double(cnt - 1));
        }
        if (axis.values.empty()) throw PreconditionError("sweep.axes." + axis.path + ": empty axis");
        s.axes.push_back(axis);
    }
    if (j.contains("output")) s.output = j["output"].get<std::string>();
    return s;
}

CommandResult run_sweep(const SweepSpec& spec, const std::optional<Tolerances>& override_tol, int threads) {
    if (spec.axes.empty()) throw PreconditionError("sweep.axes: at least one axis is required");
    std::size_t cells = 1;
    for (const auto& a : spec.axes) {
        if (a.values.empty()) throw PreconditionError("sweep.axes." + a.path + ": empty axis");
        cells *= a.values.size();
    }
    std::vector<std::string> rows(cells);
    parallel_for(cells, threads, [&](std::size_t cell) {
        std::vector<std::size_t> idx(spec.axes.size());
        std::size_t rem = cell;
        for (std::size_t k = spec.axes.size(); k-- > 0;) {
            idx[k] = rem % spec.axes[k].values.size();
            rem /= spec.axes[k].values.size();
        }
        std::vector<std::string> cols;
        for (std::size_t k = 0; k < spec.axes.size(); ++k) cols.push_back(spec.axes[k].values[idx[k]].dump());
        std::string gp_status, gp_size, gm_status, gm_size, sip, sim, sit, wl, wr, holds, exit_code, error;
        try {
            json doc = spec.scenario;
            for (std::size_t k = 0; k < spec.axes.size(); ++k) set_path(doc, spec.axes[k].path, spec.axes[k].values[idx[k]]);
            Scenario s = parse_scenario(doc);
            if (override_tol) s.tolerances = *override_tol;
            IndexReport r = make_report(s, build_model(s));
            auto cert = [&](const char* key, std::string& status, std::string& size) {
                auto it = r.certifications.find(key);
                if (it == r.certifications.end()) return;
                status = to_string(it->second.status);
                size = fmt(it->second.value);
            };
            cert("gap_at(+1)", gp_status, gp_size);
            cert("gap_at(-1)", gm_status, gm_size);
            auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
            sip = opt(r.si_plus);
            sim = opt(r.si_minus);
            sit = opt(r.si_total);
            const json& w = r.winding;
            if (w.is_object() && w.contains("records") && !w["records"].empty()) {
                const json& rec = w["records"].back();
                wl = rec["wind_left"].dump();
                wr = rec["wind_right"].dump();
                holds = w["holds"].get<bool>() ? "true" : "false";
            } else if (w.is_object() && w.contains("left")) {
                wl = w["left"]["nc_winding"].dump();
                wr = w["right"]["nc_winding"].dump();
            }
            exit_code = r.gates_passed() ? "0" : "2";
        } catch (const std::exception& e) {
            error = e.what();
            exit_code = "1";
        }
        for (auto* v : {&gp_status, &gp_size, &gm_status, &gm_size, &sip, &sim, &sit, &wl, &wr, &holds, &exit_code, &error})
            cols.push_back(*v);
        std::string line;
        for (std::size_t k = 0; k < cols.size(); ++k) line += (k ? "," : "") + csv_cell(cols[k]);
        rows[cell] = line + "\n";
    });
    std::string out;
    for (std::size_t k = 0; k < spec.axes.size(); ++k) out += (k ? "," : "") + csv_cell(spec.axes[k].path);
    out += ",gap_plus_status,gap_plus,gap_minus_status,gap_minus,si_plus,si_minus,si_total,wind_left,wind_right,"
           "theorem_holds,exit_code,error\n";
    for (const auto& r : rows) out += r;
    return CommandResult{0, out};
}

// ---------------------------------------------------------------------------
// verification suites

namespace {

struct TrialOutcome {
    bool ok = true;
    std::string failure;
    std::string note;
};

int rounded_trace(const MatrixXc& g, bool& ok) {
    double t = g.trace().real();
    double r = std::round(t);
    ok = std::abs(t - r) < 1e-6;
    return int(r);
}

FiniteChiralInstance finite_instance(Rng& rng, std::size_t trial) {
    return trial % 2 == 0 ? random_chiral_instance(40, rng) : random_generic_chiral_instance(40, rng);
}

std::string describe(const char* what, int a, int b) {
    return std::string(what) + " " + std::to_string(a) + " != " + std::to_string(b);
}

TrialOutcome identity_chain_trial(Rng& rng, std::size_t trial, const Tolerances& tol) {
    TrialOutcome o;
    auto inst = finite_instance(rng, trial);
    IndexReport r = finite_report(inst.u(), inst.gamma0, tol);
    bool trace_ok = false;
    const int tr = rounded_trace(inst.gamma0, trace_ok);
    const int si = *r.si_plus + *r.si_minus;
    auto req = [&](bool c, const std::string& msg) {
        if (!c && o.ok) {
            o.ok = false;
            o.failure = msg;
        }
    };
    req(trace_ok, "Tr(Gamma0) not within 1e-6 of an integer");
    req(si == *r.si_total, describe("si_plus + si_minus vs si_total:", si, *r.si_total));
    req(*r.si_total == *r.susy_index, describe("si_total vs susy_index:", *r.si_total, *r.susy_index));
    req(*r.tanaka_plus + *r.tanaka_minus == si, describe("tanaka sum vs si:", *r.tanaka_plus + *r.tanaka_minus, si));
    req(*r.pair_index + *r.pair_index_complement == si,
        describe("pair sum vs si:", *r.pair_index + *r.pair_index_complement, si));
    req(si == tr, describe("si vs Tr(Gamma0):", si, tr));
    req(tr == inst.trace_gamma0(), describe("Tr(Gamma0) vs construction:", tr, inst.trace_gamma0()));
    return o;
}

TrialOutcome componentwise_trial(Rng& rng, std::size_t trial, const Tolerances& tol) {
    TrialOutcome o;
    auto inst = finite_instance(rng, trial);
    IndexReport r = finite_report(inst.u(), inst.gamma0, tol);
    auto req = [&](bool c, const std::string& msg) {
        if (!c && o.ok) {
            o.ok = false;
            o.failure = msg;
        }
    };
    req(*r.si_minus == *r.tanaka_minus, describe("si_minus vs tanaka_minus:", *r.si_minus, *r.tanaka_minus));
    req(*r.si_minus == *r.pair_index, describe("si_minus vs pair_index:", *r.si_minus, *r.pair_index));
    req(*r.si_minus == *r.cayley_minus, describe("si_minus vs cayley_minus:", *r.si_minus, *r.cayley_minus));
    req(*r.si_plus == *r.tanaka_plus, describe("si_plus vs tanaka_plus:", *r.si_plus, *r.tanaka_plus));
    req(*r.si_plus == *r.pair_index_complement,
        describe("si_plus vs pair_index_complement:", *r.si_plus, *r.pair_index_complement));
    req(*r.si_plus == *r.cayley_plus, describe("si_plus vs cayley_plus:", *r.si_plus, *r.cayley_plus));
    req(*r.pair_index == inst.pair_index(), describe("pair_index vs construction:", *r.pair_index, inst.pair_index()));
    req(*r.pair_index_complement == inst.pair_index_complement(),
        describe("pair_index_complement vs construction:", *r.pair_index_complement, inst.pair_index_complement()));
    return o;
}

TrialOutcome trace_formula_trial(Rng& rng, std::size_t trial, const Tolerances& tol) {
    TrialOutcome o;
    auto inst = finite_instance(rng, trial);
    const Eigen::Index n = inst.gamma0.rows();
    MatrixXc p0 = 0.5 * (eye(n) + inst.gamma0), p1 = 0.5 * (eye(n) + inst.gamma1);
    const int ind = pair_index(p0, p1, tol.rank_tol);
    const int comp = pair_index(p0, eye(n) - p1, tol.rank_tol);
    if (ind != inst.pair_index() || comp != inst.pair_index_complement()) {
        o.ok = false;
        o.failure = "pair index disagrees with construction";
        return o;
    }
    for (int m = 0; m <= 2; ++m) {
        double t1 = pair_index_trace(p0, p1, m);
        double t2 = pair_index_trace(p0, eye(n) - p1, m);
        if (std::abs(t1 - ind) >= 1e-8 || std::abs(t2 - comp) >= 1e-8) {
            o.ok = false;
            o.failure = "m=" + std::to_string(m) + " trace " + fmt(t1) + " / " + fmt(t2) + " vs " + std::to_string(ind) +
                        " / " + std::to_string(comp);
            return o;
        }
    }
    return o;
}

TrialOutcome pair_algebra_trial(Rng& rng, std::size_t trial, const Tolerances& tol) {
    TrialOutcome o;
    MatrixXc p0, p1, p2;
    int expected01 = 0;
    if (trial % 2 == 0) {
        auto inst = random_chiral_instance(40, rng);
        const Eigen::Index n = inst.gamma0.rows();
        p0 = 0.5 * (eye(n) + inst.gamma0);
        p1 = 0.5 * (eye(n) + inst.gamma1);
        std::uniform_int_distribution<int> rk(0, int(n));
        p2 = random_projection(n, rk(rng), rng);
        expected01 = inst.pair_index();
    } else {
        std::uniform_int_distribution<int> dim(1, 40);
        const int n = dim(rng);
        std::uniform_int_distribution<int> rk(0, n);
        const int r0 = rk(rng), r1 = rk(rng), r2 = rk(rng);
        p0 = random_projection(n, r0, rng);
        p1 = random_projection(n, r1, rng);
        p2 = random_projection(n, r2, rng);
        expected01 = r0 - r1;
    }
    const Eigen::Index n = p0.rows();
    const MatrixXc one = eye(n);
    const int i01 = pair_index(p0, p1, tol.rank_tol);
    auto req = [&](bool c, const std::string& msg) {
        if (!c && o.ok) {
            o.ok = false;
            o.failure = msg;
        }
    };
    req(i01 == expected01, describe("Ind(P0,P1) vs oracle:", i01, expected01));
    const int i10 = pair_index(p1, p0, tol.rank_tol);
    req(i10 == -i01, describe("antisymmetry:", i10, -i01));
    const int icc = pair_index(one - p0, one - p1, tol.rank_tol);
    req(icc == -i01, describe("complement Ind(1-P0,1-P1):", icc, -i01));
    const int a = pair_index(p0, one - p1, tol.rank_tol), b = pair_index(p1, one - p0, tol.rank_tol);
    req(a == b, describe("complement Ind(P0,1-P1) vs Ind(P1,1-P0):", a, b));
    AdditivityReport add = pair_index_additivity_check(p0, p1, p2, tol.rank_tol);
    req(add.holds, "additivity: " + std::to_string(add.i02) + " != " + std::to_string(add.i01) + " + " +
                       std::to_string(add.i12));
    return o;
}

TrialOutcome kernel_trial(Rng& rng, std::size_t trial, const Tolerances& tol) {
    TrialOutcome o;
    auto inst = finite_instance(rng, trial);
    KernelDecompositionReport d = kernel_decomposition_check(inst.gamma0, inst.gamma1, tol.rank_tol);
    KernelBoundReport b = kernel_bound_check(inst.gamma0, inst.gamma1, tol.rank_tol);
    auto req = [&](bool c, const std::string& msg) {
        if (!c && o.ok) {
            o.ok = false;
            o.failure = msg;
        }
    };
    req(d.holds, "kernel decomposition fails");
    req(b.holds, "kernel bound fails");
    req(d.ker_u_plus_one == inst.n10 + inst.n01, describe("dim Ker(U+1) vs construction:", d.ker_u_plus_one, inst.n10 + inst.n01));
    req(d.ker_u_minus_one == inst.n11 + inst.n00, describe("dim Ker(U-1) vs construction:", d.ker_u_minus_one, inst.n11 + inst.n00));
    return o;
}

TrialOutcome generator_trial(Rng& rng, std::size_t, const Tolerances& tol) {
    TrialOutcome o;
    FiniteGenerator g = random_chiral_generator(40, rng);
    GeneratorIndex gi = generator_index(g.h, g.gamma0, tol.rank_tol);
    if (gi.index != g.expected_index || gi.si_plus_exp != gi.index || gi.graded_signature != gi.index) {
        o.ok = false;
        o.failure = "Index(H+) " + std::to_string(gi.index) + ", si_+(exp) " + std::to_string(gi.si_plus_exp) +
                    ", signature " + std::to_string(gi.graded_signature) + ", expected " +
                    std::to_string(g.expected_index);
    }
    return o;
}

TrialOutcome weighted_shift_trial(Rng& rng, std::size_t, const Tolerances& tol) {
    TrialOutcome o;
    for (int m = 0; m <= 3; ++m)
        for (int n = 0; n <= 3; ++n) {
            MatrixXc c = random_unitary(2, rng);
            auto u = build_weighted_shift_walk(m, n, c);
            for (Side s : {Side::Left, Side::Right}) {
                WindingResult w = winding_det(symbol_at(u, s), tol.grid_n);
                if (w.rounded != m - n || std::abs(w.raw_phase - w.rounded) > 1e-6) {
                    o.ok = false;
                    o.failure = "(m,n)=(" + std::to_string(m) + "," + std::to_string(n) + ") winding " + fmt(w.raw_phase);
                    return o;
                }
            }
        }
    return o;
}

TrialOutcome dichotomy_trial(Rng& rng, std::size_t, const Tolerances& tol) {
    TrialOutcome o;
    ChiralPair pair = build_walk(random_split_step(rng));
    DichotomyReport d = dichotomy_check(pair, tol.grid_n, tol.margin);
    if (!d.holds) {
        o.ok = false;
        o.failure = "||G0-G1||_ess " + fmt(d.norm_difference) + ", ||G0+G1||_ess " + fmt(d.norm_sum);
    }
    return o;
}

TrialOutcome index_theorem_trial(Rng& rng, std::size_t trial, const Tolerances& tol) {
    TrialOutcome o;
    TransferOptions opts;
    opts.rank_tol = tol.rank_tol;
    opts.margin = tol.margin;
    if (trial % 2 == 0) {
        ChiralPair pair = build_walk(random_gapped_split_step(rng));
        ChiralTheoremReport th = verify_index_theorem(pair, tol.grid_n, opts);
        if (!th.holds()) {
            o.ok = false;
            o.failure = "split-step: ";
            for (const auto& r : th.records)
                o.failure += r.label + " index " + r.lhs.str() + " wind_left " + r.wind_left.str() + " wind_right " +
                             r.wind_right.str() + "; ";
        }
        o.note = th.holds_as_stated() ? "as_stated" : "";
    } else {
        BandedOperatorcd f = random_banded_operator(rng);
        IndexTheoremRecord r = verify_index_theorem(f, tol.grid_n, opts);
        if (!r.holds) {
            o.ok = false;
            o.failure = "banded: index " + r.lhs.str() + " wind_left " + r.wind_left.str() + " wind_right " +
                        r.wind_right.str();
        }
        o.note = r.holds_as_stated ? "as_stated" : "";
    }
    return o;
}

typedef TrialOutcome (*TrialFn)(Rng&, std::size_t, const Tolerances&);

SuiteSummary run_suite(const std::string& name, std::uint64_t stream, TrialFn fn, int trials, const VerifyOptions& opts) {
    SuiteSummary s;
    s.name = name;
    s.trials = trials;
    std::vector<TrialOutcome> outcomes(std::size_t(std::max(trials, 0)));
    parallel_for(outcomes.size(), 0, [&](std::size_t t) {
        Rng rng(derive_seed(opts.seed, stream * 1000003ULL + t));
        try {
            outcomes[t] = fn(rng, t, opts.tolerances);
        } catch (const std::exception& e) {
            outcomes[t].ok = false;
            outcomes[t].failure = std::string("exception: ") + e.what();
        }
    });
    int as_stated = 0;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        if (outcomes[t].ok)
            ++s.passed;
        else if (s.failures.size() < 10)
            s.failures.push_back("trial " + std::to_string(t) + ": " + outcomes[t].failure);
        as_stated += outcomes[t].note == "as_stated";
    }
    if (name == "index_theorem")
        s.notes.push_back(std::to_string(as_stated) + " of " + std::to_string(trials) +
                          " models satisfy index = Wind(F_R) - Wind(F_L)");
    return s;
}

}  // namespace

bool VerifySummary::ok() const {
    for (const auto& s : suites)
        if (s.passed != s.trials) return false;
    return true;
}

VerifySummary run_verify(const VerifyOptions& opts) {
    if (opts.suite != "finite" && opts.suite != "lattice" && opts.suite != "all")
        throw PreconditionError("verify: suite must be finite, lattice or all");
    if (opts.trials < 0 || opts.lattice_models < 0) throw PreconditionError("verify: counts must be non-negative");
    VerifySummary v;
    const bool finite = opts.suite != "lattice", lattice = opts.suite != "finite";
    if (finite) {
        if (opts.trials == 0) v.warnings.push_back("trials = 0: finite suites pass vacuously");
        v.suites.push_back(run_suite("identity_chain", 1, identity_chain_trial, opts.trials, opts));
        v.suites.push_back(run_suite("componentwise", 2, componentwise_trial, opts.trials, opts));
        v.suites.push_back(run_suite("trace_formulas", 3, trace_formula_trial, opts.trials, opts));
        v.suites.push_back(run_suite("pair_algebra", 4, pair_algebra_trial, opts.trials, opts));
        v.suites.push_back(run_suite("kernel_decomposition", 5, kernel_trial, opts.trials, opts));
        v.suites.push_back(run_suite("generator", 6, generator_trial, opts.trials, opts));
    }
    if (lattice) {
        if (opts.lattice_models == 0) v.warnings.push_back("lattice_models = 0: lattice suites pass vacuously");
        v.suites.push_back(run_suite("weighted_shift", 7, weighted_shift_trial, opts.lattice_models, opts));
        v.suites.push_back(run_suite("dichotomy", 8, dichotomy_trial, opts.lattice_models, opts));
        v.suites.push_back(run_suite("index_theorem", 9, index_theorem_trial, opts.lattice_models, opts));
    }
    return v;
}

json verify_to_json(const VerifySummary& v) {
    json j;
    json suites = json::array();
    for (const auto& s : v.suites) {
        json e;
        e["name"] = s.name;
        e["trials"] = s.trials;
        e["passed"] = s.passed;
        e["failed"] = s.trials - s.passed;
        e["failures"] = s.failures;
        if (!s.notes.empty()) e["notes"] = s.notes;
        suites.push_back(e);
    }
    j["suites"] = suites;
    j["warnings"] = v.warnings;
    j["ok"] = v.ok();
    return j;
}

}  // namespace qwindex
