#include <doctest.h>

#include "helpers.hpp"
#include "qwindex/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

using namespace qwindex;

namespace {

MatrixXc exp_i_pi(const MatrixXc& h) {
    MatrixXc a = cplx(0, kPi) * h;
    return a.exp();
}

MatrixXc random_chiral_h(Rng& rng, int np, int nm, MatrixXc& gamma0) {
    const int n = np + nm;
    MatrixXc b = random_gaussian(nm, np, rng);
    MatrixXc h = MatrixXc::Zero(n, n);
    h.block(np, 0, nm, np) = b;
    h.block(0, np, np, nm) = b.adjoint();
    h /= svd(h, false).values(0);
    MatrixXc v = random_unitary(n, rng);
    VectorXc s = VectorXc::Constant(n, -1.0);
    s.head(np).setOnes();
    gamma0 = v * s.asDiagonal() * v.adjoint();
    MatrixXc out = v * h * v.adjoint();
    return 0.5 * (out + out.adjoint());
}

}  // namespace

TEST_CASE("split-step walks are chiral") {
    Rng rng(41);
    for (int i = 0; i < 10; ++i) {
        ChiralPair pair = build_walk(random_split_step(rng));
        CHECK(verify_chiral(pair).worst() < 1e-12);
    }
    auto trivial = testing_helpers::step_walk(1, 1, 0.6);
    CHECK(verify_chiral(trivial).chiral());
}

TEST_CASE("coin normalisation is enforced per site") {
    SplitStepParams p;
    p.a = CoefficientFunctioncd(MatrixXc::Constant(1, 1, 1.0), MatrixXc::Constant(1, 1, 1.0), 3,
                                {MatrixXc::Constant(1, 1, 0.9)});
    p.b = CoefficientFunctioncd::scalar(0.0, 0.0);
    try {
        build_walk(p);
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    p.a = CoefficientFunctioncd::scalar(cplx(0, 1), cplx(0, 1));
    CHECK_THROWS_AS(build_walk(p), PreconditionError);
}

TEST_CASE("generator walk matches the matrix exponential") {
    MatrixXc sx(2, 2), g(2, 2);
    sx << 0, 1, 1, 0;
    g << 1, 0, 0, -1;
    GeneratorWalk w = build_generator_walk(sx, g);
    CHECK(max_abs(w.u_exp + eye(2)) < 1e-12);
    CHECK_FALSE(w.regularized);

    Rng rng(42);
    for (int i = 0; i < 5; ++i) {
        MatrixXc g0;
        MatrixXc h = random_chiral_h(rng, 4, 4, g0);
        GeneratorWalk gw = build_generator_walk(h, g0);
        CHECK(max_abs(gw.u_exp - exp_i_pi(h)) < 1e-10);
        CHECK(max_abs(g0 * gw.u_exp * g0 - gw.u_exp.adjoint()) < 1e-10);
        CHECK(max_abs(gw.u_eta + gw.u_exp) < 1e-14);
    }
}

TEST_CASE("large generators are regularised") {
    MatrixXc sx(2, 2), g(2, 2);
    sx << 0, 2, 2, 0;
    g << 1, 0, 0, -1;
    GeneratorWalk w = build_generator_walk(sx, g);
    CHECK(w.regularized);
    CHECK(w.norm_h == doctest::Approx(2.0));
    CHECK(svd(w.h_used, false).values(0) == doctest::Approx(2.0 / std::sqrt(5.0)));
}

TEST_CASE("weighted shift symbol") {
    Rng rng(43);
    MatrixXc c = random_unitary(2, rng);
    auto u = build_weighted_shift_walk(2, 1, c);
    cplx z = std::polar(1.0, 1.1);
    MatrixXc d = MatrixXc::Zero(2, 2);
    d(0, 0) = z * z;
    d(1, 1) = 1.0 / z;
    CHECK(max_abs(symbol_at(u, Side::Left)(z) - d * c) < 1e-14);
}
