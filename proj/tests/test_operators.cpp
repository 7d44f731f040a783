#include <doctest.h>

#include "helpers.hpp"

using namespace qwindex;
using testing_helpers::random_op;

TEST_CASE("compose agrees with dense products away from the window edge") {
    Rng rng(11);
    for (Eigen::Index d : {1, 2}) {
        auto a = random_op(rng, d, 2, 3);
        auto b = random_op(rng, d, 1, 2, 0);
        const long L = 12;
        auto ab = truncate(compose(a, b), L);
        MatrixXc dense = truncate(a, L).matrix * truncate(b, L).matrix;
        const long lo = -L + 3, hi = L - 3;
        const Eigen::Index r0 = ab.index_of(lo), rows = (hi - lo + 1) * d;
        CHECK(max_abs(ab.matrix.middleRows(r0, rows) - dense.middleRows(r0, rows)) < 1e-12);
    }
}

TEST_CASE("adjoint truncates to the conjugate transpose") {
    Rng rng(12);
    auto a = random_op(rng, 2, 2, 4);
    auto t = truncate_window(adjoint(a), -7, 9).matrix;
    auto s = truncate_window(a, -7, 9).matrix;
    CHECK(max_abs(t - s.adjoint()) == 0.0);
}

TEST_CASE("shift convention") {
    auto s = shift_power<cplx>(1, 1);
    auto t = truncate(s, 3);
    // (S psi)(x) = psi(x - 1)
    CHECK(t.matrix(t.index_of(1), t.index_of(0)) == cplx(1));
    CHECK(t.matrix(t.index_of(0), t.index_of(1)) == cplx(0));
    cplx z = std::polar(1.0, 0.3);
    CHECK(std::abs(symbol_at(s, Side::Left)(z)(0, 0) - z) < 1e-15);
    auto s2 = compose(s, s);
    CHECK(s2.bands().count(2) == 1);
    CHECK(s2.bands().size() == 1);
}

TEST_CASE("coefficient tables are trimmed to the true bulk") {
    MatrixXc one = MatrixXc::Constant(1, 1, 1.0), two = MatrixXc::Constant(1, 1, 2.0),
             three = MatrixXc::Constant(1, 1, 3.0);
    CoefficientFunctioncd f(one, two, 0, {one, one, three, two});
    CHECK(f.first_site() == 2);
    CHECK(f.last_site() == 2);
    CHECK(f(-5)(0, 0) == cplx(1));
    CHECK(f(2)(0, 0) == cplx(3));
    CHECK(f(100)(0, 0) == cplx(2));

    CoefficientFunctioncd g(one, one, 4, {one});
    CHECK(g.bulk().empty());
}

TEST_CASE("from_table rejects gaps") {
    MatrixXc v = MatrixXc::Constant(1, 1, 0.5);
    std::vector<std::pair<long, MatrixXc>> table{{0, v}, {2, v}};
    CHECK_THROWS_AS(CoefficientFunctioncd::from_table(v, v, table), PreconditionError);
}

TEST_CASE("pointwise combination covers both tables") {
    auto f = CoefficientFunctioncd(MatrixXc::Constant(1, 1, 1.0), MatrixXc::Constant(1, 1, 1.0), -3,
                                   {MatrixXc::Constant(1, 1, 5.0)});
    auto g = CoefficientFunctioncd(MatrixXc::Constant(1, 1, 0.0), MatrixXc::Constant(1, 1, 2.0), 4);
    auto h = CoefficientFunctioncd::combine(f, g, [](const MatrixXc& x, const MatrixXc& y) -> MatrixXc { return x + y; });
    for (long x = -6; x <= 7; ++x) CHECK(std::abs(h(x)(0, 0) - f(x)(0, 0) - g(x)(0, 0)) == 0.0);
}

TEST_CASE("symbol derivative matches a difference quotient") {
    Rng rng(13);
    auto a = random_op(rng, 2, 2, 0);
    auto loop = symbol_at(a, Side::Right);
    cplx z = std::polar(1.0, 0.7);
    MatrixXc fd = (loop(z * std::exp(cplx(0, 1e-6))) - loop(z * std::exp(cplx(0, -1e-6)))) / (2e-6);
    // d/dtheta = i z F'(z)
    CHECK(max_abs(fd - cplx(0, 1) * z * loop.derivative(z)) < 1e-6);
}
