#include "qwindex/report.hpp"

#include "qwindex/indices.hpp"

namespace qwindex {

namespace {

json opt(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json rational_json(const Rational& r) { return r.den == 1 ? json(r.num) : json(r.str()); }

json record_json(const IndexTheoremRecord& rec) {
    json j;
    j["label"] = rec.label;
    j["index"] = rational_json(rec.lhs);
    j["wind_left"] = rational_json(rec.wind_left);
    j["wind_right"] = rational_json(rec.wind_right);
    j["holds"] = rec.holds;
    j["holds_as_stated"] = rec.holds_as_stated;
    return j;
}

Certification passed(const std::string& what, double value = 0) {
    Certification c;
    c.status = CertStatus::Certified;
    c.what = what;
    c.value = value;
    return c;
}

Certification failed(const std::string& what, double value) {
    Certification c = passed(what, value);
    c.status = CertStatus::Refuted;
    return c;
}

void append(std::vector<double>& out, const std::vector<double>& more) { out.insert(out.end(), more.begin(), more.end()); }

TransferOptions transfer_options(const Tolerances& tol) {
    TransferOptions o;
    o.rank_tol = tol.rank_tol;
    o.margin = tol.margin;
    return o;
}

}  // namespace

std::vector<std::string> IndexReport::consistency_violations() const {
    std::vector<std::string> out;
    auto check = [&](const char* name, const std::optional<int>& a, const std::optional<int>& b) {
        if (a && b && *a != *b)
            out.push_back(std::string(name) + ": " + std::to_string(*a) + " != " + std::to_string(*b));
    };
    auto sum = [](const std::optional<int>& a, const std::optional<int>& b) -> std::optional<int> {
        if (a && b) return *a + *b;
        return std::nullopt;
    };
    check("si_plus + si_minus = si_total", sum(si_plus, si_minus), si_total);
    check("susy_index = si_total", susy_index, si_total);
    check("tanaka_plus + tanaka_minus = susy_index", sum(tanaka_plus, tanaka_minus), susy_index);
    check("pair_index + pair_index_complement = si_total", sum(pair_index, pair_index_complement), si_total);
    check("si_minus = tanaka_minus", si_minus, tanaka_minus);
    check("si_minus = pair_index", si_minus, pair_index);
    check("si_minus = cayley_minus", si_minus, cayley_minus);
    check("si_plus = tanaka_plus", si_plus, tanaka_plus);
    check("si_plus = pair_index_complement", si_plus, pair_index_complement);
    check("si_plus = cayley_plus", si_plus, cayley_plus);
    check("generator_index = si_plus", generator_index, si_plus);
    return out;
}

bool IndexReport::gates_passed() const {
    for (const auto& [name, c] : certifications)
        if (!c.certified()) return false;
    return true;
}

json certification_to_json(const Certification& c) {
    json j;
    j["status"] = to_string(c.status);
    j["value"] = c.value;
    if (c.grid_n > 0) {
        j["resolution"] = c.resolution;
        j["margin"] = c.margin;
        j["grid_n"] = c.grid_n;
    }
    return j;
}

json report_to_json(const IndexReport& r) {
    json j;
    j["model"] = r.model;
    j["si_plus"] = opt(r.si_plus);
    j["si_minus"] = opt(r.si_minus);
    j["si_total"] = opt(r.si_total);
    j["susy_index"] = opt(r.susy_index);
    j["tanaka_plus"] = opt(r.tanaka_plus);
    j["tanaka_minus"] = opt(r.tanaka_minus);
    j["pair_index"] = opt(r.pair_index);
    j["pair_index_complement"] = opt(r.pair_index_complement);
    j["cayley_plus"] = opt(r.cayley_plus);
    j["cayley_minus"] = opt(r.cayley_minus);
    if (r.generator_index) j["generator_index"] = *r.generator_index;
    json certs = json::object();
    for (const auto& [name, c] : r.certifications) certs[name] = certification_to_json(c);
    j["certifications"] = certs;
    j["winding"] = r.winding;
    if (!r.details.is_null()) j["details"] = r.details;
    j["tolerances"] = json{{"rank_tol", r.tolerances.rank_tol}, {"grid_n", r.tolerances.grid_n},
                           {"margin", r.tolerances.margin}};
    j["borderline_singular_values"] = r.borderline;
    j["consistency_violations"] = r.consistency_violations();
    j["reasons"] = r.reasons;
    return j;
}

IndexReport finite_report(const CRef& u, const CRef& gamma0, const Tolerances& tol) {
    IndexReport r;
    r.model = "finite";
    r.tolerances = tol;
    const double dev = std::max({unitarity_defect(u), involution_defect(gamma0),
                                 max_abs(gamma0 * u * gamma0 - u.adjoint())});
    if (dev > 1e-10) {
        r.certifications["chiral"] = failed("chiral", dev);
        r.reasons.push_back("chiral relation refuted (deviation " + std::to_string(dev) + ")");
        return r;
    }
    r.certifications["chiral"] = passed("chiral", dev);
    r.certifications["finite_dimension"] = passed("finite_dimension");

    const Eigen::Index n = u.rows();
    SymmetryIndices si = symmetry_index_pm(u, gamma0, tol.rank_tol);
    append(r.borderline, si.ker_u_minus_one.borderline);
    append(r.borderline, si.ker_u_plus_one.borderline);
    r.si_plus = si.si_plus;
    r.si_minus = si.si_minus;
    MatrixXc q = (u - u.adjoint()) / cplx(0, 2);
    r.si_total = chiral_selfadjoint_index(q, gamma0, tol.rank_tol);
    r.susy_index = susy_index(u, gamma0, tol.rank_tol);
    TanakaIndices t = tanaka_index_pm(u, gamma0, tol.rank_tol);
    r.tanaka_plus = t.plus;
    r.tanaka_minus = t.minus;
    MatrixXc p0 = 0.5 * (eye(n) + gamma0);
    MatrixXc p1 = 0.5 * (eye(n) + gamma0 * u);
    p1 = hermitian_part(p1);
    r.pair_index = pair_index(p0, p1, tol.rank_tol);
    r.pair_index_complement = pair_index(p0, eye(n) - p1, tol.rank_tol);
    CayleyIndices c = cayley_index(u, gamma0, tol.rank_tol);
    r.cayley_minus = c.minus;
    r.cayley_plus = c.plus;
    r.winding = nullptr;
    return r;
}

LatticeKernels lattice_indices(const ChiralPair& pair, bool gap_plus, bool gap_minus, const TransferOptions& opts,
                               std::vector<double>* borderline) {
    const auto one = identity_op(pair.u.fiber_dim());
    const auto& u = pair.u;
    const auto& p0 = pair.p0;
    const auto& p1 = pair.p1;
    const auto q0 = one - p0;
    const auto re = scale(cplx(0.5), u + adjoint(u));
    const auto q = scale(cplx(0, -0.5), u - adjoint(u));

    auto dim = [&](const BandedOperatorcd& a) {
        ExactKernel k = exact_kernel(a, opts);
        if (borderline) append(*borderline, k.borderline);
        return k.dimension;
    };
    auto sig = [&](const BandedOperatorcd& a) {
        ExactKernel k = exact_kernel(a, pair.gamma0, opts);
        if (borderline) append(*borderline, k.borderline);
        return *k.graded_signature;
    };

    LatticeKernels out;
    if (gap_plus) {
        out.si_plus = sig(u - one);
        out.tanaka_plus = dim(one - p0 * re * p0) - dim(one - q0 * re * q0);
        out.pair_index_complement = dim(scale(cplx(2), one) - p0 - p1) - dim(p0 + p1);
    }
    if (gap_minus) {
        out.si_minus = sig(u + one);
        out.tanaka_minus = dim(one + p0 * re * p0) - dim(one + q0 * re * q0);
        out.pair_index = dim(one - p0 + p1) - dim(one + p0 - p1);
    }
    if (gap_plus && gap_minus) {
        out.si_total = sig(q);
        const auto qq = q * q;
        out.susy_index = dim(p0 * qq * p0 + q0) - dim(q0 * qq * q0 + p0);
    }
    return out;
}

IndexReport lattice_report(const ChiralPair& pair, const Tolerances& tol) {
    IndexReport r;
    r.model = "lattice";
    r.tolerances = tol;
    ChiralCertificate chiral = verify_chiral(pair);
    r.certifications["chiral"] = chiral.chiral() ? passed("chiral", chiral.worst()) : failed("chiral", chiral.worst());
    if (!chiral.chiral()) {
        r.reasons.push_back("chiral relation refuted");
        return r;
    }
    Certification gp = gap_at(pair.u, +1, tol.grid_n, tol.margin);
    Certification gm = gap_at(pair.u, -1, tol.grid_n, tol.margin);
    r.certifications["gap_at(+1)"] = gp;
    r.certifications["gap_at(-1)"] = gm;
    r.certifications["fredholm_type(U)"] = is_fredholm_type(pair.u, tol.grid_n, tol.margin, +1);
    r.certifications["fredholm_type(-U)"] = is_fredholm_type(pair.u, tol.grid_n, tol.margin, -1);
    for (const auto& c : {gp, gm})
        if (!c.certified()) r.reasons.push_back(c.what + " " + to_string(c.status));

    const TransferOptions opts = transfer_options(tol);
    LatticeKernels k = lattice_indices(pair, gp.certified(), gm.certified(), opts, &r.borderline);
    r.si_plus = k.si_plus;
    r.si_minus = k.si_minus;
    r.si_total = k.si_total;
    r.susy_index = k.susy_index;
    r.tanaka_plus = k.tanaka_plus;
    r.tanaka_minus = k.tanaka_minus;
    r.pair_index = k.pair_index;
    r.pair_index_complement = k.pair_index_complement;

    json w = json::object();
    if (gp.certified() && gm.certified()) {
        try {
            ChiralTheoremReport th = verify_index_theorem(pair, tol.grid_n, opts);
            json recs = json::array();
            for (const auto& rec : th.records) recs.push_back(record_json(rec));
            w["records"] = recs;
            w["holds"] = th.holds();
        } catch (const PreconditionError& e) {
            w["skipped"] = e.what();
        }
    } else {
        w["skipped"] = "needs both symbol gaps";
    }
    r.winding = w;
    return r;
}

IndexReport banded_report(const BandedOperatorcd& f, const Tolerances& tol) {
    IndexReport r;
    r.model = "banded";
    r.tolerances = tol;
    Certification inv = invertibility(f, tol.grid_n, tol.margin);
    r.certifications["invertible_symbols"] = inv;
    if (!inv.certified()) {
        r.reasons.push_back(inv.what + " " + to_string(inv.status));
        r.winding = nullptr;
        return r;
    }
    IndexTheoremRecord rec = verify_index_theorem(f, tol.grid_n, transfer_options(tol));
    json w;
    w["det_winding_left"] = winding_det(symbol_at(f, Side::Left), tol.grid_n).rounded;
    w["det_winding_right"] = winding_det(symbol_at(f, Side::Right), tol.grid_n).rounded;
    w["records"] = json::array({record_json(rec)});
    w["holds"] = rec.holds;
    r.winding = w;
    return r;
}

IndexReport unitary_winding_report(const BandedOperatorcd& u, const Tolerances& tol) {
    IndexReport r;
    r.model = "unitary";
    r.tolerances = tol;
    json w;
    for (Side s : {Side::Left, Side::Right}) {
        auto loop = symbol_at(u, s);
        WindingResult det = winding_det(loop, tol.grid_n);
        NcWinding nc = nc_winding(loop, tol.grid_n);
        json side;
        side["det_winding"] = det.rounded;
        side["raw_phase"] = det.raw_phase;
        side["nc_winding"] = rational_json(nc.rational);
        w[to_string(s)] = side;
    }
    r.winding = w;
    return r;
}

}  // namespace qwindex
