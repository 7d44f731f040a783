#include "qwindex/indices.hpp"

#include "qwindex/walks.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace qwindex {

namespace {

MatrixXc stack(const MatrixXc& a, const MatrixXc& b) {
    MatrixXc s(a.rows() + b.rows(), a.cols());
    s << a, b;
    return s;
}

int kernel_dim(const CRef& m, double rank_tol) { return kernel_basis(m, rank_tol).dimension; }

struct Frames {
    MatrixXc even, odd;  // orthonormal bases of Ran P0 and Ran(1 - P0)
};

Frames chiral_frames(const CRef& gamma0) {
    const Eigen::Index n = gamma0.rows();
    MatrixXc p0 = 0.5 * (eye(n) + gamma0);
    return Frames{range_basis(p0), range_basis(eye(n) - p0)};
}

void check_projection(const CRef& p, const char* name) {
    if (p.rows() != p.cols()) throw PreconditionError(std::string(name) + " is not square");
    if (projection_defect(p) > 1e-10) throw PreconditionError(std::string(name) + " is not an orthogonal projection");
}

void check_grading(const CRef& gamma0) {
    if (gamma0.rows() != gamma0.cols()) throw PreconditionError("grading is not square");
    if (involution_defect(gamma0) > 1e-10) throw PreconditionError("grading is not a self-adjoint unitary");
}

int graded_kernel_signature(const CRef& q, const CRef& gamma0, double rank_tol) {
    KernelSummary k = kernel_basis(q, rank_tol);
    return graded_signature(k.basis, gamma0);
}

}  // namespace

void check_chiral_data(const CRef& u, const CRef& gamma0, double tol) {
    if (u.rows() != u.cols() || gamma0.rows() != u.rows() || gamma0.cols() != u.cols())
        throw PreconditionError("U and the grading must be square of equal size");
    if (unitarity_defect(u) > tol) throw PreconditionError("U is not unitary");
    check_grading(gamma0);
    if (max_abs(gamma0 * u * gamma0 - u.adjoint()) > tol)
        throw PreconditionError("chiral relation Gamma0 U Gamma0 = U* fails");
}

int matrix_index(const CRef& m, double rank_tol) {
    MatrixXc adj = m.adjoint();
    return kernel_dim(m, rank_tol) - kernel_dim(adj, rank_tol);
}

SymmetryIndices symmetry_index_pm(const CRef& u, const CRef& gamma0, double rank_tol) {
    check_chiral_data(u, gamma0);
    const Eigen::Index n = u.rows();
    SymmetryIndices out;
    out.ker_u_minus_one = kernel_basis(u - eye(n), rank_tol);
    out.ker_u_plus_one = kernel_basis(u + eye(n), rank_tol);
    out.si_plus = graded_signature(out.ker_u_minus_one.basis, gamma0);
    out.si_minus = graded_signature(out.ker_u_plus_one.basis, gamma0);
    out.ker_u_minus_one.graded_signature = out.si_plus;
    out.ker_u_plus_one.graded_signature = out.si_minus;
    return out;
}

int chiral_selfadjoint_index(const CRef& q, const CRef& gamma0, double rank_tol) {
    check_grading(gamma0);
    if (q.rows() != gamma0.rows() || q.cols() != gamma0.cols()) throw PreconditionError("size mismatch");
    double scale = std::max(1.0, max_abs(q));
    if (max_abs(q - q.adjoint()) > 1e-10 * scale) throw PreconditionError("Q is not self-adjoint");
    if (max_abs(gamma0 * q + q * gamma0) > 1e-10 * scale)
        throw PreconditionError("Q does not anticommute with the grading");
    return graded_kernel_signature(q, gamma0, rank_tol);
}

int susy_index(const CRef& u, const CRef& gamma0, double rank_tol) {
    check_chiral_data(u, gamma0);
    MatrixXc q = (u - u.adjoint()) / cplx(0, 2);
    Frames f = chiral_frames(gamma0);
    MatrixXc q_plus = f.odd.adjoint() * q * f.even;
    return matrix_index(q_plus, rank_tol);
}

TanakaIndices tanaka_index_pm(const CRef& u, const CRef& gamma0, double rank_tol) {
    check_chiral_data(u, gamma0);
    MatrixXc re = 0.5 * (u + u.adjoint());
    Frames f = chiral_frames(gamma0);
    MatrixXc r1 = f.even.adjoint() * re * f.even;
    MatrixXc r2 = f.odd.adjoint() * re * f.odd;
    const Eigen::Index n1 = r1.rows(), n2 = r2.rows();
    TanakaIndices t;
    t.plus = kernel_dim(r1 - eye(n1), rank_tol) - kernel_dim(r2 - eye(n2), rank_tol);
    t.minus = kernel_dim(r1 + eye(n1), rank_tol) - kernel_dim(r2 + eye(n2), rank_tol);
    return t;
}

int dim_intersection_ran_ker(const CRef& p0, const CRef& p1, double rank_tol) {
    const Eigen::Index n = p0.rows();
    return kernel_dim(stack(eye(n) - p0, p1), rank_tol);
}

int pair_index(const CRef& p0, const CRef& p1, double rank_tol) {
    check_projection(p0, "P0");
    check_projection(p1, "P1");
    if (p0.rows() != p1.rows()) throw PreconditionError("projections act on different spaces");
    const Eigen::Index n = p0.rows();
    int ran_ker = kernel_dim(stack(eye(n) - p0, p1), rank_tol);
    int ker_ran = kernel_dim(stack(p0, eye(n) - p1), rank_tol);
    return ran_ker - ker_ran;
}

double pair_index_trace(const CRef& p0, const CRef& p1, int m) {
    check_projection(p0, "P0");
    check_projection(p1, "P1");
    if (m < 0) throw PreconditionError("trace power must be non-negative");
    MatrixXc d = p0 - p1;
    MatrixXc d2 = d * d;
    MatrixXc acc = d;
    for (int i = 0; i < m; ++i) acc = acc * d2;
    return acc.trace().real();
}

AdditivityReport pair_index_additivity_check(const CRef& p0, const CRef& p1, const CRef& p2, double rank_tol) {
    AdditivityReport r;
    r.i01 = pair_index(p0, p1, rank_tol);
    r.i12 = pair_index(p1, p2, rank_tol);
    r.i02 = pair_index(p0, p2, rank_tol);
    r.holds = r.i01 + r.i12 == r.i02;
    return r;
}

KernelDecompositionReport kernel_decomposition_check(const CRef& gamma0, const CRef& gamma1, double rank_tol) {
    check_grading(gamma0);
    check_grading(gamma1);
    const Eigen::Index n = gamma0.rows();
    MatrixXc u = gamma0 * gamma1;
    MatrixXc p0 = 0.5 * (eye(n) + gamma0), p1 = 0.5 * (eye(n) + gamma1);
    MatrixXc q0 = eye(n) - p0, q1 = eye(n) - p1;
    KernelDecompositionReport r;
    r.ker_u_plus_one = kernel_dim(u + eye(n), rank_tol);
    r.ker_u_minus_one = kernel_dim(u - eye(n), rank_tol);
    r.ran_p0_ker_p1 = kernel_dim(stack(q0, p1), rank_tol);
    r.ker_p0_ran_p1 = kernel_dim(stack(p0, q1), rank_tol);
    r.ran_p0_ran_p1 = kernel_dim(stack(q0, q1), rank_tol);
    r.ker_p0_ker_p1 = kernel_dim(stack(p0, p1), rank_tol);
    r.holds = r.ker_u_plus_one == r.ran_p0_ker_p1 + r.ker_p0_ran_p1 &&
              r.ker_u_minus_one == r.ran_p0_ran_p1 + r.ker_p0_ker_p1;
    return r;
}

KernelBoundReport kernel_bound_check(const CRef& gamma0, const CRef& gamma1, double rank_tol) {
    check_grading(gamma0);
    check_grading(gamma1);
    const Eigen::Index n = gamma0.rows();
    MatrixXc u = gamma0 * gamma1;
    MatrixXc p0 = 0.5 * (eye(n) + gamma0), p1 = 0.5 * (eye(n) + gamma1);
    KernelBoundReport r;
    r.ker_u_plus_one = kernel_dim(u + eye(n), rank_tol);
    r.ker_u_minus_one = kernel_dim(u - eye(n), rank_tol);
    r.pair = pair_index(p0, p1, rank_tol);
    r.pair_complement = pair_index(p0, eye(n) - p1, rank_tol);
    r.holds = r.ker_u_plus_one >= std::abs(r.pair) && r.ker_u_minus_one >= std::abs(r.pair_complement);
    return r;
}

namespace {

// si of the Cayley transform of V restricted to Ker(1 - V)^perp
int cayley_si(const MatrixXc& v, const CRef& gamma0, double rank_tol) {
    const Eigen::Index n = v.rows();
    if (n == 0) return 0;
    MatrixXc a = eye(n) - v;
    const Svd dec = svd(a);
    const Eigen::VectorXd& s = dec.values;
    const double tol = rank_tol * std::max(s(0), 1.0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) >= tol) ++rank;
    if (rank == 0) return 0;
    MatrixXc w = dec.v.leftCols(rank);
    MatrixXc gw = w.adjoint() * gamma0 * w;
    if (max_abs(gamma0 * w - w * gw) > 1e-8)
        throw NumericalError("Cayley restriction is not grading-invariant within tolerance");
    MatrixXc vw = w.adjoint() * v * w;
    MatrixXc one = eye(rank);
    MatrixXc c = (one - vw).partialPivLu().solve(cplx(0, 1) * (one + vw));
    c = hermitian_part(c);
    double scale = std::max(1.0, max_abs(c));
    if (max_abs(gw * c + c * gw) > 1e-8 * scale)
        throw NumericalError("Cayley transform does not anticommute with the grading");
    return graded_kernel_signature(c, gw, rank_tol);
}

}  // namespace

CayleyIndices cayley_index(const CRef& u, const CRef& gamma0, double rank_tol) {
    check_chiral_data(u, gamma0);
    CayleyIndices out;
    out.minus = cayley_si(u, gamma0, rank_tol);
    out.plus = cayley_si(-u, gamma0, rank_tol);
    return out;
}

GeneratorIndex generator_index(const CRef& h, const CRef& gamma0, double rank_tol) {
    GeneratorWalk w = build_generator_walk(h, gamma0);
    GeneratorIndex out;
    out.regularized = w.regularized;
    Frames f = chiral_frames(gamma0);
    MatrixXc h_plus = f.odd.adjoint() * w.h_used * f.even;
    out.index = matrix_index(h_plus, rank_tol);
    out.graded_signature = graded_kernel_signature(w.h_used, gamma0, rank_tol);
    out.si_plus_exp = symmetry_index_pm(w.u_exp, gamma0, rank_tol).si_plus;
    out.consistent = out.index == out.graded_signature && out.index == out.si_plus_exp;
    return out;
}

}  // namespace qwindex
