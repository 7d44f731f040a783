#pragma once

#include "qwindex/operators.hpp"

#include <initializer_list>
#include <json.hpp>
#include <string>

namespace qwindex {

using json = nlohmann::ordered_json;

/// Throws PreconditionError naming `what` when j is not an object or has a key outside `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& what);

// complex numbers are [re, im]; a bare number is read as real
json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

// matrices are arrays of rows
json matrix_to_json(const MatrixXc& m);
MatrixXc matrix_from_json(const json& j);

json coefficient_to_json(const CoefficientFunctioncd& f);
CoefficientFunctioncd coefficient_from_json(const json& j, Eigen::Index d);

/// { fiber_dim, bands: [ { offset, left_limit, right_limit, bulk: [ {x, value} ] } ] }
json operator_to_json(const BandedOperatorcd& a);
BandedOperatorcd operator_from_json(const json& j);

}  // namespace qwindex
