#include "qwindex/winding.hpp"

#include "qwindex/essential.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace qwindex {

namespace {

constexpr int kGridCap = 1 << 16;

void check_grid(int grid_n) {
    if (grid_n < 4 || (grid_n & (grid_n - 1)) != 0) throw PreconditionError("grid size must be a power of two");
}

Rational to_lattice(double v, Eigen::Index d, const char* what) {
    const double scaled = v * double(d);
    const double r = std::round(scaled);
    if (std::abs(scaled - r) > 0.25) throw NumericalError(std::string(what) + ": winding unresolved");
    return Rational::make(std::int64_t(r), std::int64_t(d));
}

MatrixXc sign_of_hermitian(const MatrixXc& h) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(hermitian_part(h));
    const Eigen::VectorXd& ev = es.eigenvalues();
    VectorXc s(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) < 1e-9) throw NotFredholmError("Cayley transform has an eigenvalue at 0 (gap closed)");
        s(i) = ev(i) > 0 ? 1.0 : -1.0;
    }
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

MatrixXc cayley(const MatrixXc& u) {
    const Eigen::Index d = u.rows();
    Eigen::PartialPivLU<MatrixXc> lu(eye(d) - u);
    if (lu.rcond() < 1e-12) throw NotFredholmError("symbol has eigenvalue +1 (Cayley transform undefined)");
    return lu.solve(cplx(0, 1) * (eye(d) + u));
}

MatrixXc block_operator(const MatrixXc& u, CompressedBlock block) {
    switch (block) {
        case CompressedBlock::CayleyMinus: return sign_of_hermitian(cayley(u));
        case CompressedBlock::CayleyPlus: return sign_of_hermitian(cayley(-u));
        default: return (u - u.adjoint()) / cplx(0, 2);
    }
}

// Continuous orthonormal frames of Ran proj(z_k), closed up by the holonomy correction.
std::vector<MatrixXc> propagate_frames(const std::vector<MatrixXc>& proj, MatrixXc start, double& holonomy_phase) {
    const std::size_t n = proj.size();
    std::vector<MatrixXc> frames(n);
    frames[0] = start;
    auto advance = [](const MatrixXc& p, const MatrixXc& prev) {
        MatrixXc x = p * prev;
        auto s = Eigen::JacobiSVD<MatrixXc>(x).singularValues();
        if (s(s.size() - 1) < 0.5) throw NumericalError("frame propagation degenerate (grid too coarse)");
        return polar_factor(x);
    };
    for (std::size_t k = 1; k < n; ++k) frames[k] = advance(proj[k], frames[k - 1]);
    MatrixXc closing = advance(proj[0], frames[n - 1]);
    MatrixXc h = frames[0].adjoint() * closing;
    holonomy_phase = std::arg(h.determinant());
    // h = V diag(e^{i phi}) V*, corrected by V diag(e^{-i phi k/n}) V*
    Eigen::ComplexSchur<MatrixXc> schur(polar_factor(h));
    const MatrixXc& v = schur.matrixU();
    Eigen::VectorXd phi(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) phi(i) = std::arg(schur.matrixT()(i, i));
    for (std::size_t k = 1; k < n; ++k) {
        VectorXc c(h.rows());
        for (Eigen::Index i = 0; i < h.rows(); ++i) c(i) = std::polar(1.0, -phi(i) * double(k) / double(n));
        frames[k] = frames[k] * (v * c.asDiagonal() * v.adjoint());
    }
    return frames;
}

}  // namespace

WindingResult winding_of_samples(const std::vector<cplx>& dets) {
    WindingResult w;
    w.grid_n = int(dets.size());
    double total = 0;
    w.min_abs_det = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < dets.size(); ++k) {
        w.min_abs_det = std::min(w.min_abs_det, std::abs(dets[k]));
        const cplx next = dets[(k + 1) % dets.size()];
        const double step = std::arg(next / dets[k]);
        w.max_step_phase = std::max(w.max_step_phase, std::abs(step));
        total += step;
    }
    w.raw_phase = total / (2 * kPi);
    w.rounded = int(std::lround(w.raw_phase));
    return w;
}

WindingResult winding_det(const SymbolLoopcd& loop, int grid_n) {
    check_grid(grid_n);
    for (int n = grid_n;; n *= 2) {
        std::vector<cplx> dets(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) dets[std::size_t(k)] = loop(circle_point(k, n)).determinant();
        WindingResult w = winding_of_samples(dets);
        if (w.min_abs_det <= 1e-10) throw NotFredholmError("loop not invertible on the circle grid");
        if (w.max_step_phase < kPi / 2) {
            if (std::abs(w.raw_phase - w.rounded) >= 0.25) throw NumericalError("winding unresolved");
            return w;
        }
        if (n >= kGridCap) throw NumericalError("winding unresolved at the grid cap");
    }
}

NcWinding nc_winding(const SymbolLoopcd& loop, int grid_n) {
    check_grid(grid_n);
    const Eigen::Index d = loop.fiber_dim();
    auto quadrature = [&](int n) {
        cplx acc = 0;
        for (int k = 0; k < n; ++k) {
            const cplx z = circle_point(k, n);
            Eigen::PartialPivLU<MatrixXc> lu(loop(z));
            if (std::abs(lu.determinant()) <= 1e-10) throw NotFredholmError("loop not invertible on the circle grid");
            acc += lu.solve(loop.derivative(z)).trace() * z;
        }
        // (1/2 pi i) oint f dz with dz = i z dtheta, normalised trace
        return acc.real() / double(n) / double(d);
    };
    int n = grid_n;
    double v = quadrature(n);
    while (n < kGridCap) {
        double w = quadrature(2 * n);
        n *= 2;
        bool settled = std::abs(w - v) < 1e-10;
        v = w;
        if (settled) break;
    }
    NcWinding out;
    out.value = v;
    out.grid_n = n;
    out.rational = to_lattice(v, d, "nc_winding");
    return out;
}

const char* to_string(CompressedBlock b) {
    switch (b) {
        case CompressedBlock::CayleyMinus: return "cayley_minus";
        case CompressedBlock::CayleyPlus: return "cayley_plus";
        default: return "supersymmetric";
    }
}

SampledLoop chiral_flat_band_symbol(const ChiralPair& pair, Side side, int grid_n, CompressedBlock block,
                                    const MatrixXc* start_plus, const MatrixXc* start_minus) {
    check_grid(grid_n);
    const Eigen::Index d = pair.gamma0.fiber_dim();
    if (d % 2 != 0) throw PreconditionError("fiber dimension must be even");
    auto g_left = symbol_at(pair.gamma0, Side::Left);
    auto g_right = symbol_at(pair.gamma0, Side::Right);
    for (int k = 0; k < 16; ++k) {
        const cplx z = circle_point(k, 16);
        if (max_abs(g_left(z) - g_right(z)) > 1e-12)
            throw PreconditionError("grading symbol differs between the two sides");
    }
    const auto g0 = g_left;
    const auto u = symbol_at(pair.u, side);
    const Eigen::Index h = d / 2;

    std::vector<MatrixXc> p_plus(static_cast<std::size_t>(grid_n)), p_minus(static_cast<std::size_t>(grid_n));
    for (int k = 0; k < grid_n; ++k) {
        MatrixXc g = hermitian_part(g0(circle_point(k, grid_n)));
        MatrixXc p = 0.5 * (eye(d) + g);
        Eigen::Index rank = 0;
        Eigen::SelfAdjointEigenSolver<MatrixXc> es(g, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < d; ++i) rank += es.eigenvalues()(i) > 0 ? 1 : 0;
        if (rank != h) throw PreconditionError("grading symbol does not have rank d/2 projections");
        p_plus[std::size_t(k)] = p;
        p_minus[std::size_t(k)] = eye(d) - p;
    }

    Eigen::SelfAdjointEigenSolver<MatrixXc> es0(hermitian_part(g0(1.0)));
    MatrixXc e_plus0 = es0.eigenvectors().rightCols(h);
    MatrixXc e_minus0 = es0.eigenvectors().leftCols(h);
    if (start_plus) e_plus0 = e_plus0 * (*start_plus);
    if (start_minus) e_minus0 = e_minus0 * (*start_minus);

    SampledLoop out;
    out.grid_n = grid_n;
    out.dim = h;
    double hol_minus = 0;
    auto e_plus = propagate_frames(p_plus, e_plus0, out.holonomy_phase);
    auto e_minus = propagate_frames(p_minus, e_minus0, hol_minus);
    out.values.resize(static_cast<std::size_t>(grid_n));
    for (int k = 0; k < grid_n; ++k) {
        const std::size_t i = std::size_t(k);
        MatrixXc x = block_operator(u(circle_point(k, grid_n)), block);
        out.values[i] = e_minus[i].adjoint() * x * e_plus[i];
        out.unitarity_defect = std::max(out.unitarity_defect, unitarity_defect(out.values[i]));
    }
    return out;
}

WindingResult compressed_winding(const ChiralPair& pair, Side side, int grid_n, CompressedBlock block,
                                 const MatrixXc* start_plus, const MatrixXc* start_minus) {
    check_grid(grid_n);
    for (int n = grid_n;; n *= 2) {
        bool refine = false;
        WindingResult w;
        try {
            SampledLoop loop = chiral_flat_band_symbol(pair, side, n, block, start_plus, start_minus);
            std::vector<cplx> dets;
            dets.reserve(loop.values.size());
            for (const auto& v : loop.values) dets.push_back(v.determinant());
            w = winding_of_samples(dets);
            if (w.min_abs_det <= 1e-10) throw NotFredholmError("compressed loop not invertible on the grid");
            refine = w.max_step_phase >= kPi / 2;
        } catch (const NumericalError&) {
            if (n >= kGridCap) throw;
            refine = true;
        }
        if (!refine) {
            if (std::abs(w.raw_phase - w.rounded) >= 0.25) throw NumericalError("winding unresolved");
            return w;
        }
        if (n >= kGridCap) throw NumericalError("winding unresolved at the grid cap");
    }
}

IndexTheoremRecord verify_index_theorem(const BandedOperatorcd& f, int grid_n, const TransferOptions& opts) {
    IndexTheoremRecord rec;
    rec.label = "banded";
    rec.lhs = exact_index(f, opts).normalized;
    rec.wind_left = nc_winding(symbol_at(f, Side::Left), grid_n).rational;
    rec.wind_right = nc_winding(symbol_at(f, Side::Right), grid_n).rational;
    rec.holds = rec.lhs == rec.wind_left - rec.wind_right;
    rec.holds_as_stated = rec.lhs == rec.wind_right - rec.wind_left;
    return rec;
}

bool ChiralTheoremReport::holds() const {
    for (const auto& r : records)
        if (!r.holds) return false;
    return !records.empty();
}

bool ChiralTheoremReport::holds_as_stated() const {
    for (const auto& r : records)
        if (!r.holds_as_stated) return false;
    return !records.empty();
}

ChiralTheoremReport verify_index_theorem(const ChiralPair& pair, int grid_n, const TransferOptions& opts) {
    for (int target : {+1, -1}) {
        auto cert = gap_at(pair.u, target, grid_n, opts.margin);
        if (!cert.certified())
            throw NotFredholmError(std::string(cert.what) + " " + to_string(cert.status));
    }
    const auto one = identity_op(pair.u.fiber_dim());
    ChiralTheoremReport rep;
    rep.si_plus = *exact_kernel(pair.u - one, pair.gamma0, opts).graded_signature;
    rep.si_minus = *exact_kernel(pair.u + one, pair.gamma0, opts).graded_signature;
    auto q = scale(cplx(0, -0.5), pair.u - adjoint(pair.u));
    rep.si_total = *exact_kernel(q, pair.gamma0, opts).graded_signature;

    const Eigen::Index h = pair.u.fiber_dim() / 2;
    const Rational lhs = Rational::make(rep.si_total, h);
    for (CompressedBlock b : {CompressedBlock::CayleyMinus, CompressedBlock::CayleyPlus, CompressedBlock::Supersymmetric}) {
        IndexTheoremRecord rec;
        rec.label = to_string(b);
        rec.lhs = lhs;
        rec.wind_left = Rational::make(compressed_winding(pair, Side::Left, grid_n, b).rounded, h);
        rec.wind_right = Rational::make(compressed_winding(pair, Side::Right, grid_n, b).rounded, h);
        rec.holds = rec.lhs == rec.wind_left - rec.wind_right;
        rec.holds_as_stated = rec.lhs == rec.wind_right - rec.wind_left;
        rep.records.push_back(rec);
    }
    return rep;
}

}  // namespace qwindex
