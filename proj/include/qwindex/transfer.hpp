#pragma once

#include "qwindex/linalg.hpp"
#include "qwindex/operators.hpp"

#include <vector>

namespace qwindex {

/// Square-summable germs of the constant-coefficient recurrence of one limit symbol.
///
/// The recurrence is written for states s(y) = (psi(y), ..., psi(y + 2r - 1)).
/// Right: states that continue to a solution decaying at +inf (forward step `step`).
/// Left: states that continue to a solution decaying at -inf (backward step `step`).
struct DecayingSolutionSpace {
    Side side = Side::Right;
    int order = 0;                  // band radius r used for the state space
    Eigen::Index fiber_dim = 1;
    int dimension = 0;
    MatrixXc basis;                 // orthonormal columns in C^{2 r d}
    MatrixXc step;                  // dimension x dimension
    std::vector<cplx> ratios;       // psi(y+1) = ratio psi(y); infinite entries for finitely supported germs
    std::vector<cplx> roots;        // symbol roots 1/ratio (0 for infinite ratio, inf for zero ratio)
    double spectral_radius = 0;     // of step
};

/// Uses the loop's own radius as the recurrence order.
DecayingSolutionSpace decaying_space(const SymbolLoopcd& loop, Side side, double margin = 1e-6);
DecayingSolutionSpace decaying_space(const SymbolLoopcd& loop, Side side, int order, double margin);

struct TransferOptions {
    double rank_tol = 1e-8;
    double margin = 1e-6;
    double tail_tol = 1e-10;
    long max_tail = 200000;
};

/// Kernel on l^2(Z, C^d) with the kernel vectors sampled on sites [first_site, first_site + sites).
struct ExactKernel : KernelSummary {
    long first_site = 0;
    long sites = 0;
    double tail_mass = 0;  // estimate of the norm left outside the sampled window
};

ExactKernel exact_kernel(const BandedOperatorcd& a, const TransferOptions& opts = {});
ExactKernel exact_kernel(const BandedOperatorcd& a, const BandedOperatorcd& gamma0, const TransferOptions& opts = {});

struct ExactIndex {
    int kernel = 0, cokernel = 0, index = 0;
    Rational normalized;  // index / d
};

ExactIndex exact_index(const BandedOperatorcd& a, const TransferOptions& opts = {});

/// Move the selected diagonal entries of a complex Schur form (T, Q) to the leading block.
/// Returns the number selected.
int reorder_schur(MatrixXc& t, MatrixXc& q, const std::vector<bool>& select);

}  // namespace qwindex
