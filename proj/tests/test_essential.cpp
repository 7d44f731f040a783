#include <doctest.h>

#include "helpers.hpp"
#include "qwindex/essential.hpp"

using namespace qwindex;
using testing_helpers::step_walk;

TEST_CASE("gap sizes of a homogeneous walk") {
    // with b = 0 the symbol eigenvalues are exp(+-i w), cos w = c
    const double c = 0.6;
    ChiralPair pair = step_walk(1, 1, c);
    Certification gp = gap_at(pair.u, +1, 1024);
    Certification gm = gap_at(pair.u, -1, 1024);
    CHECK(gp.certified());
    CHECK(gm.certified());
    CHECK(gp.value == doctest::Approx(std::sqrt(2 - 2 * c)).epsilon(1e-9));
    CHECK(gm.value == doctest::Approx(std::sqrt(2 + 2 * c)).epsilon(1e-9));
    CHECK(is_fredholm_type(pair.u, 1024, 1e-6, +1).certified());
}

TEST_CASE("closed gap is refuted") {
    ChiralPair pair = step_walk(1, -0.8, 0.8);
    Certification gm = gap_at(pair.u, -1, 256);
    CHECK(gm.status == CertStatus::Refuted);
    CHECK(gap_at(pair.u, +1, 256).certified());
    CHECK(is_fredholm_type(pair.u, 256, 1e-6, +1).status == CertStatus::Refuted);
}

TEST_CASE("root between grid points stays inconclusive") {
    // symbol z - e^{i}: singular at an angle that no dyadic grid hits
    BandedOperatorcd a(1);
    a.set_band(1, CoefficientFunctioncd::scalar(1.0, 1.0));
    cplx w = std::exp(cplx(0, 1));
    a.set_band(0, CoefficientFunctioncd::scalar(-w, -w));
    Certification c = invertibility(a, 1024, 1e-6);
    CHECK(c.status == CertStatus::Inconclusive);
    CHECK(c.grid_n == 1 << 16);
}

TEST_CASE("essential norm refines") {
    Rng rng(61);
    auto a = testing_helpers::random_op(rng, 2, 3, 2);
    EssentialNorm coarse = essential_norm(a, 1024, false);
    EssentialNorm fine = essential_norm(a, 4096, true);
    CHECK(fine.value >= coarse.value - 1e-12);
    CHECK(std::abs(fine.value - essential_norm(a, fine.grid_n, false).value) < 1e-12);
}

TEST_CASE("dichotomy on random walks") {
    Rng rng(62);
    for (int i = 0; i < 10; ++i) {
        ChiralPair pair = build_walk(random_split_step(rng));
        CHECK(dichotomy_check(pair, 1024).holds);
    }
}

TEST_CASE("grid must be a power of two") {
    ChiralPair pair = step_walk(1, 1, 0.5);
    CHECK_THROWS_AS(gap_at(pair.u, 1, 100), PreconditionError);
    CHECK_THROWS_AS(gap_at(pair.u, 0, 128), PreconditionError);
}
