#include <doctest.h>

#include "qwindex/indices.hpp"
#include "qwindex/random.hpp"

using namespace qwindex;

TEST_CASE("diagonal example") {
    MatrixXc g0 = MatrixXc::Zero(2, 2), g1 = MatrixXc::Zero(2, 2);
    g0.diagonal() << 1, -1;
    g1.diagonal() << -1, -1;
    MatrixXc u = g0 * g1;
    SymmetryIndices si = symmetry_index_pm(u, g0);
    CHECK(si.si_minus == 1);
    CHECK(si.si_plus == -1);
    MatrixXc p0 = 0.5 * (eye(2) + g0), p1 = 0.5 * (eye(2) + g1);
    CHECK(pair_index(p0, p1) == 1);
    CHECK(pair_index(p0, eye(2) - p1) == -1);
}

TEST_CASE("canonical instances carry known indices") {
    Rng rng(51);
    for (int i = 0; i < 40; ++i) {
        auto inst = random_chiral_instance(16, rng);
        MatrixXc u = inst.u();
        SymmetryIndices si = symmetry_index_pm(u, inst.gamma0);
        CHECK(si.si_minus == inst.n10 - inst.n01);
        CHECK(si.si_plus == inst.n11 - inst.n00);
        TanakaIndices t = tanaka_index_pm(u, inst.gamma0);
        CHECK(t.minus == si.si_minus);
        CHECK(t.plus == si.si_plus);
        CayleyIndices c = cayley_index(u, inst.gamma0);
        CHECK(c.minus == si.si_minus);
        CHECK(c.plus == si.si_plus);
        CHECK(susy_index(u, inst.gamma0) == inst.trace_gamma0());
        MatrixXc q = (u - u.adjoint()) / cplx(0, 2);
        CHECK(chiral_selfadjoint_index(q, inst.gamma0) == inst.trace_gamma0());
    }
}

TEST_CASE("trace formula") {
    Rng rng(52);
    auto inst = random_chiral_instance(20, rng);
    const Eigen::Index n = inst.gamma0.rows();
    MatrixXc p0 = 0.5 * (eye(n) + inst.gamma0), p1 = 0.5 * (eye(n) + inst.gamma1);
    for (int m = 0; m <= 3; ++m) CHECK(std::abs(pair_index_trace(p0, p1, m) - inst.pair_index()) < 1e-8);
}

TEST_CASE("generator index of a zero generator") {
    MatrixXc h = MatrixXc::Zero(3, 3), g = MatrixXc::Zero(3, 3);
    g.diagonal() << 1, 1, -1;
    GeneratorIndex gi = generator_index(h, g);
    CHECK(gi.index == 1);
    CHECK(gi.si_plus_exp == 1);
    CHECK(gi.graded_signature == 1);
    CHECK(gi.consistent);
}

TEST_CASE("random generators") {
    Rng rng(53);
    for (int i = 0; i < 30; ++i) {
        FiniteGenerator g = random_chiral_generator(12, rng);
        GeneratorIndex gi = generator_index(g.h, g.gamma0);
        CHECK(gi.index == g.expected_index);
        CHECK(gi.si_plus_exp == g.expected_index);
    }
}

TEST_CASE("kernel decomposition on generic and canonical pairs") {
    Rng rng(54);
    for (int i = 0; i < 20; ++i) {
        auto inst = i % 2 ? random_generic_chiral_instance(12, rng) : random_chiral_instance(12, rng);
        KernelDecompositionReport d = kernel_decomposition_check(inst.gamma0, inst.gamma1);
        CHECK(d.holds);
        CHECK(d.ker_u_plus_one == inst.n10 + inst.n01);
        CHECK(kernel_bound_check(inst.gamma0, inst.gamma1).holds);
    }
}

TEST_CASE("additivity of the pair index") {
    Rng rng(55);
    MatrixXc p0 = random_projection(9, 5, rng), p1 = random_projection(9, 2, rng), p2 = random_projection(9, 7, rng);
    AdditivityReport r = pair_index_additivity_check(p0, p1, p2);
    CHECK(r.i01 == 3);
    CHECK(r.i12 == -5);
    CHECK(r.i02 == -2);
    CHECK(r.holds);
}

TEST_CASE("preconditions") {
    MatrixXc g = MatrixXc::Zero(2, 2);
    g.diagonal() << 1, -1;
    MatrixXc notu = MatrixXc::Identity(2, 2) * 2.0;
    CHECK_THROWS_AS(check_chiral_data(notu, g), PreconditionError);
    MatrixXc ph = MatrixXc::Identity(2, 2) * cplx(0, 1);
    CHECK_THROWS_AS(check_chiral_data(ph, g), PreconditionError);
    CHECK_THROWS_AS(pair_index(notu, g), PreconditionError);
}
