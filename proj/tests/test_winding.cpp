#include <doctest.h>

#include "helpers.hpp"
#include "qwindex/linalg.hpp"
#include "qwindex/winding.hpp"

using namespace qwindex;

namespace {

// (1 - p) + S p with p = 0 on x < 0 and 1 on x >= 0
BandedOperatorcd half_shift() {
    auto p = mult_op(CoefficientFunctioncd(MatrixXc::Constant(1, 1, 0.0), MatrixXc::Constant(1, 1, 1.0), 0));
    auto one = identity_op(1);
    return (one - p) + shift_power<cplx>(1, 1) * p;
}

}  // namespace

TEST_CASE("det winding and quadrature winding agree") {
    SymbolLoopcd loop(2);
    MatrixXc a = MatrixXc::Zero(2, 2), b = MatrixXc::Zero(2, 2);
    a(0, 0) = 1;
    b(1, 1) = 1;
    loop.set(2, a);
    loop.set(-1, b);
    WindingResult w = winding_det(loop);
    CHECK(w.rounded == 1);
    NcWinding nc = nc_winding(loop);
    CHECK(nc.rational == Rational::make(1, 2));
    CHECK(std::abs(nc.value * 2 - w.raw_phase) < 1e-8);
}

TEST_CASE("random loops: quadrature times d equals det winding") {
    Rng rng(81);
    for (int i = 0; i < 10; ++i) {
        BandedOperatorcd f = random_banded_operator(rng);
        auto loop = symbol_at(f, Side::Right);
        WindingResult w = winding_det(loop);
        NcWinding nc = nc_winding(loop);
        CHECK(std::abs(nc.value * double(f.fiber_dim()) - w.raw_phase) < 1e-8);
    }
}

TEST_CASE("half shift index orientation") {
    BandedOperatorcd f = half_shift();
    IndexTheoremRecord r = verify_index_theorem(f);
    // behaves like the unilateral right shift on the right half-line
    CHECK(r.lhs == Rational::make(-1, 1));
    CHECK(r.wind_left == Rational::make(0, 1));
    CHECK(r.wind_right == Rational::make(1, 1));
    CHECK(r.holds);
    CHECK_FALSE(r.holds_as_stated);
}

TEST_CASE("compressed winding does not depend on the starting frame") {
    Rng rng(82);
    for (int i = 0; i < 4; ++i) {
        ChiralPair pair = build_walk(random_gapped_split_step(rng));
        for (auto block : {CompressedBlock::CayleyMinus, CompressedBlock::Supersymmetric}) {
            WindingResult a = compressed_winding(pair, Side::Right, 1024, block);
            MatrixXc rp = random_unitary(1, rng), rm = random_unitary(1, rng);
            WindingResult b = compressed_winding(pair, Side::Right, 1024, block, &rp, &rm);
            CHECK(a.rounded == b.rounded);
        }
    }
}

TEST_CASE("chiral theorem on the defect walk") {
    ChiralPair pair = testing_helpers::step_walk(1, 0.6, 0.8);
    ChiralTheoremReport th = verify_index_theorem(pair, 1024);
    CHECK(th.si_plus == 1);
    CHECK(th.si_minus == 0);
    CHECK(th.holds());
    for (const auto& rec : th.records) CHECK(rec.lhs == Rational::make(1, 1));
}

TEST_CASE("gapless pairs are rejected") {
    ChiralPair pair = testing_helpers::step_walk(1, -0.8, 0.8);
    CHECK_THROWS_AS(verify_index_theorem(pair, 256), NotFredholmError);
}
