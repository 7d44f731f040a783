#pragma once

#include "qwindex/operators.hpp"

#include <string>

namespace qwindex {

/// Split-step coins: a, b site dependent (1x1), c, d constant.
struct SplitStepParams {
    CoefficientFunctioncd a = CoefficientFunctioncd::scalar(1.0, 1.0);
    CoefficientFunctioncd b = CoefficientFunctioncd::scalar(0.0, 0.0);
    double c = 1.0;
    cplx d_coin = 0.0;
    int n = 1;
};

struct ChiralPair {
    BandedOperatorcd gamma0, gamma1, u, p0, p1;
};

/// [[c, (S^n)* conj(d)], [d S^n, -c]]
BandedOperatorcd build_gamma0(double c, cplx d_coin, int n = 1);

/// [[a, conj(b)], [b, -a]] as a multiplication operator
BandedOperatorcd build_gamma1(const CoefficientFunctioncd& a, const CoefficientFunctioncd& b);

ChiralPair make_chiral_pair(const BandedOperatorcd& gamma0, const BandedOperatorcd& gamma1);

ChiralPair build_walk(const SplitStepParams& p);

/// diag(S^m, (S*)^n) C for a 2x2 unitary C.
BandedOperatorcd build_weighted_shift_walk(int m, int n, const MatrixXc& c);

struct GeneratorWalk {
    MatrixXc u_exp;    // e^{i pi H'}
    MatrixXc u_eta;    // -e^{i pi eta(H')}, eta = identity
    MatrixXc h_used;   // H' (H itself unless regularised)
    bool regularized = false;
    double norm_h = 0;
    std::string convention = "exp(i pi H)";
    std::string eta = "identity";
};

GeneratorWalk build_generator_walk(const CRef& h, const CRef& gamma0);

struct ChiralCertificate {
    long window = 0;
    double gamma0_selfadjoint = 0, gamma0_involution = 0;
    double gamma1_selfadjoint = 0, gamma1_involution = 0;
    double chiral_relation = 0;
    double symbol_involution = 0;   // worst of both gammas, both sides
    double symbol_chiral = 0;
    double symbol_unitarity = 0;
    int symbol_points = 64;

    double worst() const;
    bool chiral(double tol = 1e-10) const { return worst() < tol; }
};

ChiralCertificate verify_chiral(const ChiralPair& pair, int symbol_points = 64);

}  // namespace qwindex
