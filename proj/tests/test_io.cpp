#include <doctest.h>

#include "helpers.hpp"
#include "qwindex/io.hpp"

using namespace qwindex;

TEST_CASE("operator json round trip") {
    Rng rng(21);
    auto a = testing_helpers::random_op(rng, 2, 2, 3);
    auto b = operator_from_json(json::parse(operator_to_json(a).dump()));
    REQUIRE(b.fiber_dim() == 2);
    CHECK(max_abs(truncate(a, 8).matrix - truncate(b, 8).matrix) == 0.0);
}

TEST_CASE("unknown keys and malformed numbers are rejected") {
    CHECK_THROWS_AS(operator_from_json(json::parse(R"({"fiber_dim":1,"bands":[],"extra":1})")), PreconditionError);
    CHECK_THROWS_AS(complex_from_json(json::parse(R"("1+i")")), PreconditionError);
    CHECK(complex_from_json(json::parse("2.5")) == cplx(2.5, 0));
    CHECK(complex_from_json(json::parse("[0, -1]")) == cplx(0, -1));
}

TEST_CASE("jump-only coefficient") {
    auto f = coefficient_from_json(json::parse(R"({"left_limit": 1, "right_limit": [0, 1], "jump": 3})"), 1);
    CHECK(f(2)(0, 0) == cplx(1));
    CHECK(f(3)(0, 0) == cplx(0, 1));
}
