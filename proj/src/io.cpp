#include "qwindex/io.hpp"

namespace qwindex {

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
    if (!j.is_object()) throw PreconditionError(what + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw PreconditionError(what + ": unknown key '" + it.key() + "'");
    }
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw PreconditionError("expected a complex number [re, im], got " + j.dump());
}

json matrix_to_json(const MatrixXc& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

MatrixXc matrix_from_json(const json& j) {
    // a scalar is accepted as a 1x1 matrix
    if (j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number()))
        return MatrixXc::Constant(1, 1, complex_from_json(j));
    if (!j.is_array() || j.empty()) throw PreconditionError("expected a matrix (array of rows)");
    const Eigen::Index rows = Eigen::Index(j.size());
    const Eigen::Index cols = Eigen::Index(j[0].size());
    MatrixXc m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || Eigen::Index(j[i].size()) != cols) throw PreconditionError("ragged matrix rows");
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

json coefficient_to_json(const CoefficientFunctioncd& f) {
    json j;
    j["left_limit"] = matrix_to_json(f.left_limit());
    j["right_limit"] = matrix_to_json(f.right_limit());
    json bulk = json::array();
    for (std::size_t i = 0; i < f.bulk().size(); ++i)
        bulk.push_back(json{{"x", f.first_site() + long(i)}, {"value", matrix_to_json(f.bulk()[i])}});
    j["bulk"] = bulk;
    if (f.bulk().empty()) j["jump"] = f.first_site();
    return j;
}

CoefficientFunctioncd coefficient_from_json(const json& j, Eigen::Index d) {
    require_keys(j, {"offset", "left_limit", "right_limit", "bulk", "jump"}, "coefficient");
    MatrixXc left = matrix_from_json(j.at("left_limit"));
    MatrixXc right = matrix_from_json(j.at("right_limit"));
    if (left.rows() != d || left.cols() != d || right.rows() != d || right.cols() != d)
        throw PreconditionError("coefficient limits do not match fiber_dim");
    std::vector<std::pair<long, MatrixXc>> table;
    if (j.contains("bulk")) {
        for (const auto& e : j.at("bulk")) {
            require_keys(e, {"x", "value"}, "bulk entry");
            table.emplace_back(e.at("x").get<long>(), matrix_from_json(e.at("value")));
        }
    }
    if (table.empty() && j.contains("jump"))
        return CoefficientFunctioncd(left, right, j.at("jump").get<long>());
    return CoefficientFunctioncd::from_table(left, right, table);
}

json operator_to_json(const BandedOperatorcd& a) {
    json j;
    j["fiber_dim"] = a.fiber_dim();
    json bands = json::array();
    for (const auto& [n, f] : a.bands()) {
        json b;
        b["offset"] = n;
        json coef = coefficient_to_json(f);
        for (auto& [k, v] : coef.items()) b[k] = v;
        bands.push_back(b);
    }
    j["bands"] = bands;
    return j;
}

BandedOperatorcd operator_from_json(const json& j) {
    require_keys(j, {"fiber_dim", "bands"}, "operator");
    const Eigen::Index d = j.at("fiber_dim").get<Eigen::Index>();
    if (d <= 0) throw PreconditionError("fiber_dim must be positive");
    BandedOperatorcd a(d);
    for (const auto& b : j.at("bands")) {
        int n = b.at("offset").get<int>();
        if (a.bands().count(n)) throw PreconditionError("duplicate band offset " + std::to_string(n));
        a.set_band(n, coefficient_from_json(b, d));
    }
    return a;
}

}  // namespace qwindex
