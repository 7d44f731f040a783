#include "qwindex/transfer.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace qwindex {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

void swap_adjacent(MatrixXc& t, MatrixXc& q, Eigen::Index k) {
    const cplx a = t(k, k), b = t(k, k + 1), c = t(k + 1, k + 1);
    Eigen::Vector2cd x(b, c - a);
    const double nx = x.norm();
    if (nx == 0) return;
    x /= nx;
    Eigen::Matrix2cd g;
    g << x(0), -std::conj(x(1)), x(1), std::conj(x(0));
    t.middleRows(k, 2) = (g.adjoint() * t.middleRows(k, 2)).eval();
    t.middleCols(k, 2) = (t.middleCols(k, 2) * g).eval();
    q.middleCols(k, 2) = (q.middleCols(k, 2) * g).eval();
    t(k + 1, k) = 0;
}

// Linearisation E s(y+1) = A s(y) of sum_k B_k psi(y+k) = 0 with B_k = a_{r-k}.
struct Pencil {
    MatrixXc e, a;
};

Pencil companion(const SymbolLoopcd& loop, int r) {
    const Eigen::Index d = loop.fiber_dim();
    const Eigen::Index n = 2 * r * d;
    Pencil p{eye(n), MatrixXc::Zero(n, n)};
    auto coeff = [&](int k) -> MatrixXc {
        auto it = loop.coefficients().find(r - k);
        return it == loop.coefficients().end() ? MatrixXc::Zero(d, d) : it->second;
    };
    for (int i = 0; i + 1 < 2 * r; ++i) p.a.block(i * d, (i + 1) * d, d, d) = eye(d);
    const Eigen::Index last = (2 * r - 1) * d;
    p.e.block(last, last, d, d) = coeff(2 * r);
    for (int k = 0; k < 2 * r; ++k) p.a.block(last, k * d, d, d) = -coeff(k);
    return p;
}

}  // namespace

int reorder_schur(MatrixXc& t, MatrixXc& q, const std::vector<bool>& select) {
    std::vector<bool> sel = select;
    const Eigen::Index n = t.rows();
    Eigen::Index next = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!sel[std::size_t(i)]) continue;
        for (Eigen::Index k = i; k > next; --k) {
            swap_adjacent(t, q, k - 1);
            std::swap(sel[std::size_t(k)], sel[std::size_t(k - 1)]);
        }
        ++next;
    }
    return int(next);
}

DecayingSolutionSpace decaying_space(const SymbolLoopcd& loop, Side side, double margin) {
    return decaying_space(loop, side, loop.radius(), margin);
}

DecayingSolutionSpace decaying_space(const SymbolLoopcd& loop, Side side, int order, double margin) {
    if (order < loop.radius()) throw PreconditionError("recurrence order below the symbol radius");
    DecayingSolutionSpace out;
    out.side = side;
    out.order = order;
    out.fiber_dim = loop.fiber_dim();
    const Eigen::Index d = loop.fiber_dim();
    const Eigen::Index n = 2 * Eigen::Index(order) * d;

    // a regular pencil needs det(loop) not identically zero; check it at a few circle points
    {
        double best = 0;
        for (double t : {0.31, 1.7, 2.9, 4.4, 5.6}) {
            auto s = Eigen::JacobiSVD<MatrixXc>(loop(std::polar(1.0, t))).singularValues();
            best = std::max(best, s(s.size() - 1) / std::max(s(0), 1e-300));
        }
        if (best < 1e-13) throw NotFredholmError("symbol determinant vanishes identically");
    }
    if (n == 0) {
        // order 0: the symbol is a constant matrix, invertible or not
        auto s = Eigen::JacobiSVD<MatrixXc>(loop(1.0)).singularValues();
        if (s(s.size() - 1) <= margin) throw NotFredholmError("unit-circle root (singular constant symbol)");
        out.basis = MatrixXc::Zero(0, 0);
        out.step = MatrixXc::Zero(0, 0);
        return out;
    }

    Pencil p = companion(loop, order);
    // Moebius transform: mu = (sigma + lambda) / (sigma - lambda) maps |lambda| < 1 to Re mu > 0
    cplx sigma;
    Eigen::PartialPivLU<MatrixXc> lu;
    double best_rcond = -1;
    for (double phi : {0.7, 2.3, -1.9, 1.3, -0.4, 2.9}) {
        cplx s = std::polar(1.0, phi);
        Eigen::PartialPivLU<MatrixXc> f(s * p.e - p.a);
        double rc = f.rcond();
        if (rc > best_rcond) {
            best_rcond = rc;
            sigma = s;
            lu = f;
        }
        if (rc > 1e-3) break;
    }
    if (!(best_rcond > 1e-14)) throw NotFredholmError("unit-circle root (transfer pencil is singular)");
    MatrixXc m = lu.solve(sigma * p.e + p.a);

    Eigen::ComplexSchur<MatrixXc> schur(m, true);
    if (schur.info() != Eigen::Success) throw NumericalError("Schur decomposition failed");
    MatrixXc t = schur.matrixT();
    MatrixXc q = schur.matrixU();

    std::vector<bool> select(std::size_t(n), false);
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx mu = t(i, i);
        const cplx denom = mu + 1.0;
        const double lam = std::abs(denom) < 1e-300 ? kInf : std::abs(sigma * (mu - 1.0) / denom);
        if (std::abs(lam - 1.0) < margin)
            throw NotFredholmError("unit-circle root of the " + std::string(to_string(side)) + " symbol");
        select[std::size_t(i)] = side == Side::Right ? mu.real() > 0 : mu.real() < 0;
    }
    const int k = reorder_schur(t, q, select);
    out.dimension = k;
    out.basis = q.leftCols(k);
    MatrixXc tk = t.topLeftCorner(k, k);
    MatrixXc ik = eye(k);
    if (side == Side::Right) {
        // forward step sigma (T - 1)(T + 1)^{-1}
        out.step = sigma * (tk - ik) * (tk + ik).inverse();
    } else {
        // backward step (T + 1)(T - 1)^{-1} / sigma
        out.step = (tk + ik) * (tk - ik).inverse() / sigma;
    }
    for (Eigen::Index i = 0; i < k; ++i) {
        const cplx mu = tk(i, i);
        cplx ratio = std::abs(mu + 1.0) < 1e-12 ? cplx(kInf, 0) : sigma * (mu - 1.0) / (mu + 1.0);
        cplx root = std::isinf(ratio.real()) ? cplx(0, 0) : (std::abs(ratio) < 1e-300 ? cplx(kInf, 0) : 1.0 / ratio);
        out.ratios.push_back(ratio);
        out.roots.push_back(root);
    }
    if (k > 0) {
        Eigen::ComplexEigenSolver<MatrixXc> es(out.step, false);
        out.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    return out;
}

namespace {

struct Matching {
    ExactKernel kernel;
    MatrixXc psi;  // raw (non-orthonormal) kernel vectors on the sampled window
};

Matching solve_matching(const BandedOperatorcd& a, const TransferOptions& opts) {
    const Eigen::Index d = a.fiber_dim();
    const int r = a.band_radius();
    auto [x_lo, x_hi] = a.bulk_extent();
    const long bulk_rows = std::max(0L, x_hi - x_lo + 1);

    DecayingSolutionSpace left = decaying_space(symbol_at(a, Side::Left), Side::Left, r, opts.margin);
    DecayingSolutionSpace right = decaying_space(symbol_at(a, Side::Right), Side::Right, r, opts.margin);

    // unknowns: psi on [x_lo - r, x_hi + r], then alpha (left), beta (right)
    const long y0 = x_lo - r;
    const long sites = bulk_rows + 2 * r;
    const Eigen::Index npsi = sites * d;
    const Eigen::Index nstate = 2 * r * d;
    const Eigen::Index cols = npsi + left.dimension + right.dimension;
    const Eigen::Index rows = bulk_rows * d + 2 * nstate;
    MatrixXc sys = MatrixXc::Zero(rows, cols);
    for (long x = x_lo; x <= x_hi; ++x) {
        const Eigen::Index row = (x - x_lo) * d;
        for (const auto& [nb, f] : a.bands()) {
            const long y = x - nb;
            sys.block(row, (y - y0) * d, d, d) = f(x);
        }
    }
    // s(Y_L + 1) starts at site x_lo - r, s(Y_R) at site x_hi + 1 - r
    const Eigen::Index rl = bulk_rows * d;
    const Eigen::Index rr = rl + nstate;
    sys.block(rl, 0, nstate, nstate) = eye(nstate);
    sys.block(rl, npsi, nstate, left.dimension) = -left.basis;
    sys.block(rr, npsi - nstate, nstate, nstate) = eye(nstate);
    sys.block(rr, npsi + left.dimension, nstate, right.dimension) = -right.basis;

    KernelSummary ks = kernel_basis(sys, opts.rank_tol);
    Matching out;
    static_cast<KernelSummary&>(out.kernel) = ks;
    const Eigen::Index k = ks.dimension;
    if (k == 0) {
        out.kernel.first_site = y0;
        out.kernel.sites = 0;
        out.kernel.basis = MatrixXc::Zero(0, 0);
        return out;
    }

    MatrixXc window = ks.basis.topRows(npsi);
    MatrixXc alpha = ks.basis.middleRows(npsi, left.dimension);
    MatrixXc beta = ks.basis.bottomRows(right.dimension);
    const double scale = std::max(1e-300, window.norm());

    auto tail_blocks = [&](const DecayingSolutionSpace& sp, MatrixXc coeff, bool take_first) {
        std::vector<MatrixXc> blocks;
        const double rho = std::min(sp.spectral_radius, 1.0 - 1e-12);
        const double amp = 1.0 / std::sqrt(1.0 - rho * rho);
        double rest = 0;
        for (long j = 0;; ++j) {
            rest = coeff.norm() * amp;
            if (rest < 1e-3 * opts.tail_tol * scale || sp.dimension == 0) break;
            if (j >= opts.max_tail) throw NumericalError("kernel tail decays too slowly to sample");
            coeff = (sp.step * coeff).eval();
            MatrixXc state = sp.basis * coeff;
            blocks.push_back(take_first ? MatrixXc(state.topRows(d)) : MatrixXc(state.bottomRows(d)));
        }
        return std::make_pair(blocks, sp.dimension == 0 ? 0.0 : rest);
    };
    auto [lblocks, lrest] = tail_blocks(left, alpha, true);
    auto [rblocks, rrest] = tail_blocks(right, beta, false);

    const long nl = long(lblocks.size()), nr = long(rblocks.size());
    out.kernel.first_site = y0 - nl;
    out.kernel.sites = sites + nl + nr;
    out.kernel.tail_mass = std::hypot(lrest, rrest) / scale;
    out.psi = MatrixXc::Zero(out.kernel.sites * d, k);
    for (long j = 0; j < nl; ++j) out.psi.middleRows((nl - 1 - j) * d, d) = lblocks[std::size_t(j)];
    out.psi.middleRows(nl * d, npsi) = window;
    for (long j = 0; j < nr; ++j) out.psi.middleRows((nl + sites + j) * d, d) = rblocks[std::size_t(j)];

    Eigen::JacobiSVD<MatrixXc> svd(out.psi, Eigen::ComputeThinU);
    out.kernel.basis = svd.matrixU();
    return out;
}

}  // namespace

ExactKernel exact_kernel(const BandedOperatorcd& a, const TransferOptions& opts) {
    return solve_matching(a, opts).kernel;
}

ExactKernel exact_kernel(const BandedOperatorcd& a, const BandedOperatorcd& gamma0, const TransferOptions& opts) {
    if (gamma0.fiber_dim() != a.fiber_dim()) throw PreconditionError("grading has wrong fiber dimension");
    ExactKernel k = exact_kernel(a, opts);
    if (k.dimension == 0) {
        k.graded_signature = 0;
        return k;
    }
    auto g = truncate_window(gamma0, k.first_site, k.first_site + k.sites - 1);
    k.graded_signature = graded_signature(k.basis, g.matrix);
    return k;
}

ExactIndex exact_index(const BandedOperatorcd& a, const TransferOptions& opts) {
    ExactIndex out;
    out.kernel = exact_kernel(a, opts).dimension;
    out.cokernel = exact_kernel(adjoint(a), opts).dimension;
    out.index = out.kernel - out.cokernel;
    out.normalized = Rational::make(out.index, a.fiber_dim());
    return out;
}

}  // namespace qwindex
