#include "qwindex/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace qwindex {

Svd svd(const CRef& m, bool want_v) {
    const lapack_int rows = lapack_int(m.rows()), cols = lapack_int(m.cols());
    Svd out;
    const lapack_int k = std::min(rows, cols);
    out.values.resize(k);
    if (want_v) out.v = eye(cols);
    if (k == 0) return out;
    MatrixXc a = m;
    MatrixXc vt(want_v ? cols : 1, want_v ? cols : 1);
    std::vector<double> superb(std::size_t(std::max<lapack_int>(k - 1, 1)));
    lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', want_v ? 'A' : 'N', rows, cols, a.data(), rows,
                                     out.values.data(), nullptr, 1, vt.data(), lapack_int(vt.rows()), superb.data());
    if (info != 0) throw NumericalError("zgesvd failed (info " + std::to_string(info) + ")");
    if (want_v) out.v = vt.adjoint();
    return out;
}

KernelSummary kernel_basis(const CRef& m, double rank_tol) {
    if (!m.allFinite()) throw NumericalError("kernel_basis: non-finite matrix entries");
    KernelSummary out;
    const Eigen::Index n = m.cols();
    if (n == 0) {
        out.basis = MatrixXc::Zero(0, 0);
        return out;
    }
    if (m.rows() == 0) {
        out.dimension = int(n);
        out.basis = eye(n);
        out.rank_tolerance_used = rank_tol;
        return out;
    }
    const Svd dec = svd(m);
    const Eigen::VectorXd& s = dec.values;
    const double smax = s.size() ? s(0) : 0.0;
    const double tol = rank_tol * std::max(smax, 1.0);
    out.rank_tolerance_used = tol;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) >= tol) {
            ++rank;
            if (s(i) <= 10 * tol) out.borderline.push_back(s(i));
        } else {
            out.singular_values_near_zero.push_back(s(i));
        }
    }
    out.dimension = int(n - rank);
    out.basis = dec.v.rightCols(n - rank);
    return out;
}

int compressed_signature(const CRef& c) {
    if (c.rows() == 0) return 0;
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(hermitian_part(c), Eigen::EigenvaluesOnly);
    int sig = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double e = es.eigenvalues()(i);
        if (e > 0.5)
            ++sig;
        else if (e < -0.5)
            --sig;
        else
            throw NumericalError("kernel not grading-invariant within tolerance (compressed eigenvalue " +
                                 std::to_string(e) + ")");
    }
    return sig;
}

int graded_signature(const CRef& k, const CRef& grading) {
    if (k.cols() == 0) return 0;
    MatrixXc c = k.adjoint() * grading * k;
    return compressed_signature(c);
}

MatrixXc range_basis(const CRef& p) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(hermitian_part(p));
    const Eigen::VectorXd& ev = es.eigenvalues();
    Eigen::Index first = 0;
    while (first < ev.size() && ev(first) <= 0.5) ++first;
    return es.eigenvectors().rightCols(ev.size() - first);
}

MatrixXc polar_factor(const CRef& x) {
    Eigen::JacobiSVD<MatrixXc> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

MatrixXc hermitian_part(const CRef& m) { return 0.5 * (m + m.adjoint()); }

double unitarity_defect(const CRef& u) { return max_abs(u.adjoint() * u - eye(u.cols())); }

double involution_defect(const CRef& g) {
    return std::max(max_abs(g - g.adjoint()), max_abs(g * g - eye(g.rows())));
}

double projection_defect(const CRef& p) { return std::max(max_abs(p - p.adjoint()), max_abs(p * p - p)); }

}  // namespace qwindex
