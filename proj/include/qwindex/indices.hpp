#pragma once

#include "qwindex/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qwindex {

struct SymmetryIndices {
    int si_plus = 0, si_minus = 0;
    KernelSummary ker_u_minus_one;  // Ker(U - 1)
    KernelSummary ker_u_plus_one;   // Ker(U + 1)
};

/// si_pm = signature of Gamma0 on Ker(U -+ 1).
SymmetryIndices symmetry_index_pm(const CRef& u, const CRef& gamma0, double rank_tol = 1e-8);

/// si(Q) = signature of Gamma0 on Ker Q for Q = Q*, Gamma0 Q = -Q Gamma0.
int chiral_selfadjoint_index(const CRef& q, const CRef& gamma0, double rank_tol = 1e-8);

/// Index of Q_+ = (1 - P0) Q P0 : Ran P0 -> Ran(1 - P0), Q = (U - U*)/2i.
int susy_index(const CRef& u, const CRef& gamma0, double rank_tol = 1e-8);

struct TanakaIndices {
    int plus = 0, minus = 0;
};
TanakaIndices tanaka_index_pm(const CRef& u, const CRef& gamma0, double rank_tol = 1e-8);

/// dim(Ran P0 n Ker P1) - dim(Ker P0 n Ran P1)
int pair_index(const CRef& p0, const CRef& p1, double rank_tol = 1e-8);

/// Tr((P0 - P1)^{2m+1}), real part.
double pair_index_trace(const CRef& p0, const CRef& p1, int m);

struct AdditivityReport {
    int i01 = 0, i12 = 0, i02 = 0;
    bool holds = false;
};
AdditivityReport pair_index_additivity_check(const CRef& p0, const CRef& p1, const CRef& p2,
                                             double rank_tol = 1e-8);

struct KernelDecompositionReport {
    int ker_u_plus_one = 0, ran_p0_ker_p1 = 0, ker_p0_ran_p1 = 0;
    int ker_u_minus_one = 0, ran_p0_ran_p1 = 0, ker_p0_ker_p1 = 0;
    bool holds = false;
};
KernelDecompositionReport kernel_decomposition_check(const CRef& gamma0, const CRef& gamma1,
                                                     double rank_tol = 1e-8);

struct KernelBoundReport {
    int ker_u_plus_one = 0, pair = 0;
    int ker_u_minus_one = 0, pair_complement = 0;
    bool holds = false;
};
KernelBoundReport kernel_bound_check(const CRef& gamma0, const CRef& gamma1, double rank_tol = 1e-8);

struct CayleyIndices {
    int minus = 0;  // si(C(U))
    int plus = 0;   // si(C(-U))
};
CayleyIndices cayley_index(const CRef& u, const CRef& gamma0, double rank_tol = 1e-8);

struct GeneratorIndex {
    int index = 0;             // Index(H_+)
    int graded_signature = 0;  // signature of Gamma0 on Ker H
    int si_plus_exp = 0;       // si_+(e^{i pi H})
    bool regularized = false;
    bool consistent = false;
};
GeneratorIndex generator_index(const CRef& h, const CRef& gamma0, double rank_tol = 1e-8);

/// Dimensions of the two intersections, computed from the stacked constraint matrices.
int dim_intersection_ran_ker(const CRef& p0, const CRef& p1, double rank_tol);

/// Throws PreconditionError unless U is unitary, Gamma0 an involution and Gamma0 U Gamma0 = U*.
void check_chiral_data(const CRef& u, const CRef& gamma0, double tol = 1e-10);

/// Index of a rectangular matrix: dim Ker M - dim Ker M*.
int matrix_index(const CRef& m, double rank_tol);

}  // namespace qwindex
