#pragma once

#include "qwindex/random.hpp"
#include "qwindex/walks.hpp"

namespace testing_helpers {

using namespace qwindex;

// random banded operator with bands -r..r and a bulk of len sites starting at first
inline BandedOperatorcd random_op(Rng& rng, Eigen::Index d, int r, int len, long first = -1) {
    BandedOperatorcd a(d);
    for (int n = -r; n <= r; ++n) {
        std::vector<MatrixXc> bulk;
        for (int i = 0; i < len; ++i) bulk.push_back(random_gaussian(d, d, rng));
        a.set_band(n, CoefficientFunctioncd(random_gaussian(d, d, rng), random_gaussian(d, d, rng), first, bulk));
    }
    return a;
}

// split-step walk with a step in a at x = 0
inline ChiralPair step_walk(double a_left, double a_right, double c, int n = 1) {
    SplitStepParams p;
    auto bval = [](double a) { return std::sqrt(1 - a * a); };
    p.a = CoefficientFunctioncd(MatrixXc::Constant(1, 1, a_left), MatrixXc::Constant(1, 1, a_right), 0);
    p.b = CoefficientFunctioncd(MatrixXc::Constant(1, 1, bval(a_left)), MatrixXc::Constant(1, 1, bval(a_right)), 0);
    p.c = c;
    p.d_coin = std::sqrt(1 - c * c);
    p.n = n;
    return build_walk(p);
}

}  // namespace testing_helpers
