#pragma once

#include "qwindex/core.hpp"

#include <optional>
#include <vector>

namespace qwindex {

struct KernelSummary {
    int dimension = 0;
    MatrixXc basis;                          // orthonormal columns
    std::optional<int> graded_signature;     // set when a grading was supplied
    std::vector<double> singular_values_near_zero;
    std::vector<double> borderline;          // singular values in [tol, 10 tol]
    double rank_tolerance_used = 0;
};

struct Svd {
    Eigen::VectorXd values;  // descending, min(rows, cols) entries
    MatrixXc v;              // all cols x cols right singular vectors (empty unless requested)
};

/// LAPACK zgesvd.
Svd svd(const CRef& m, bool want_v = true);

/// Null space of M from the right singular vectors below rank_tol * max(sigma_max, 1).
KernelSummary kernel_basis(const CRef& m, double rank_tol = 1e-8);

/// Eigenvalues of the compressed matrix K* G K above 1/2 minus those below -1/2.
/// Throws when an eigenvalue sits in (-1/2, 1/2).
int graded_signature(const CRef& k, const CRef& grading);

/// Same, with the compression K* G K already formed.
int compressed_signature(const CRef& compressed);

/// Orthonormal basis of Ran P for an orthogonal projection P.
MatrixXc range_basis(const CRef& p);

/// Unitary polar factor of a full-column-rank matrix.
MatrixXc polar_factor(const CRef& x);

MatrixXc hermitian_part(const CRef& m);

double unitarity_defect(const CRef& u);            // max|U*U - 1|
double involution_defect(const CRef& g);           // max of |G - G*|, |G^2 - 1|
double projection_defect(const CRef& p);           // max of |P - P*|, |P^2 - P|

}  // namespace qwindex
