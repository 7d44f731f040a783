#include "qwindex/walks.hpp"

#include "qwindex/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace qwindex {

namespace {

constexpr double kNormTol = 1e-12;

void check_unit_pair(cplx a, cplx b, const std::string& where) {
    if (std::abs(a.imag()) > kNormTol) throw PreconditionError("coin a is not real at " + where);
    double dev = std::abs(a.real() * a.real() + std::norm(b) - 1.0);
    if (dev > kNormTol) {
        std::ostringstream os;
        os << "coin normalisation a^2 + |b|^2 = 1 violated at " << where << " (deviation " << dev << ")";
        throw PreconditionError(os.str());
    }
}

MatrixXc coin_block(const MatrixXc& a, const MatrixXc& b) {
    MatrixXc g(2, 2);
    g << a(0, 0).real(), std::conj(b(0, 0)), b(0, 0), -a(0, 0).real();
    return g;
}

}  // namespace

BandedOperatorcd build_gamma0(double c, cplx d_coin, int n) {
    if (n < 1) throw PreconditionError("shift exponent must be positive");
    double dev = std::abs(c * c + std::norm(d_coin) - 1.0);
    if (dev > kNormTol) throw PreconditionError("coin normalisation c^2 + |d|^2 = 1 violated");
    MatrixXc diag(2, 2), lower = MatrixXc::Zero(2, 2), upper = MatrixXc::Zero(2, 2);
    diag << c, 0, 0, -c;
    lower(1, 0) = d_coin;
    upper(0, 1) = std::conj(d_coin);
    BandedOperatorcd g(2);
    g.set_band(0, CoefficientFunctioncd::constant(diag));
    g.set_band(n, CoefficientFunctioncd::constant(lower));
    g.set_band(-n, CoefficientFunctioncd::constant(upper));
    return g;
}

BandedOperatorcd build_gamma1(const CoefficientFunctioncd& a, const CoefficientFunctioncd& b) {
    if (a.dim() != 1 || b.dim() != 1) throw PreconditionError("coins a, b must be scalar functions");
    check_unit_pair(a.left_limit()(0, 0), b.left_limit()(0, 0), "the left limit");
    check_unit_pair(a.right_limit()(0, 0), b.right_limit()(0, 0), "the right limit");
    long lo = std::min(a.first_site(), b.first_site());
    long hi = std::max(a.last_site(), b.last_site());
    for (long x = lo; x <= hi; ++x) check_unit_pair(a(x)(0, 0), b(x)(0, 0), "site " + std::to_string(x));
    BandedOperatorcd g(2);
    g.set_band(0, CoefficientFunctioncd::combine(a, b, coin_block));
    return g;
}

ChiralPair make_chiral_pair(const BandedOperatorcd& gamma0, const BandedOperatorcd& gamma1) {
    if (gamma0.fiber_dim() != gamma1.fiber_dim()) throw PreconditionError("gamma fiber dimensions differ");
    ChiralPair p;
    p.gamma0 = gamma0;
    p.gamma1 = gamma1;
    p.u = compose(gamma0, gamma1);
    auto one = identity_op(gamma0.fiber_dim());
    p.p0 = scale(cplx(0.5), add(one, gamma0));
    p.p1 = scale(cplx(0.5), add(one, gamma1));
    return p;
}

ChiralPair build_walk(const SplitStepParams& p) {
    ChiralPair pair = make_chiral_pair(build_gamma0(p.c, p.d_coin, p.n), build_gamma1(p.a, p.b));
    auto cert = verify_chiral(pair);
    if (!cert.chiral()) throw NumericalError("split-step walk failed the chiral validation");
    return pair;
}

BandedOperatorcd build_weighted_shift_walk(int m, int n, const MatrixXc& c) {
    if (c.rows() != 2 || c.cols() != 2) throw PreconditionError("weighted shift coin must be 2x2");
    if (unitarity_defect(c) > kNormTol) throw PreconditionError("weighted shift coin is not unitary");
    MatrixXc top = MatrixXc::Zero(2, 2), bottom = MatrixXc::Zero(2, 2);
    top.row(0) = c.row(0);
    bottom.row(1) = c.row(1);
    BandedOperatorcd first(2), second(2);
    first.set_band(m, CoefficientFunctioncd::constant(top));
    second.set_band(-n, CoefficientFunctioncd::constant(bottom));
    return add(first, second);
}

GeneratorWalk build_generator_walk(const CRef& h, const CRef& gamma0) {
    if (h.rows() != h.cols() || gamma0.rows() != h.rows() || gamma0.cols() != h.cols())
        throw PreconditionError("generator and grading must be square of equal size");
    if (max_abs(h - h.adjoint()) > 1e-10) throw PreconditionError("generator is not self-adjoint");
    if (involution_defect(gamma0) > 1e-10) throw PreconditionError("grading is not a self-adjoint unitary");
    if (max_abs(gamma0 * h + h * gamma0) > 1e-10)
        throw PreconditionError("generator does not anticommute with the grading");

    Eigen::SelfAdjointEigenSolver<MatrixXc> es(hermitian_part(h));
    Eigen::VectorXd ev = es.eigenvalues();
    GeneratorWalk w;
    w.norm_h = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
    if (w.norm_h > 1.0 + 1e-12) {
        w.regularized = true;
        for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) / std::sqrt(1.0 + ev(i) * ev(i));
    }
    const MatrixXc& v = es.eigenvectors();
    VectorXc phase(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) phase(i) = std::polar(1.0, kPi * ev(i));
    w.h_used = v * ev.cast<cplx>().asDiagonal() * v.adjoint();
    w.u_exp = v * phase.asDiagonal() * v.adjoint();
    w.u_eta = -w.u_exp;
    return w;
}

double ChiralCertificate::worst() const {
    return std::max({gamma0_selfadjoint, gamma0_involution, gamma1_selfadjoint, gamma1_involution, chiral_relation,
                     symbol_involution, symbol_chiral, symbol_unitarity});
}

ChiralCertificate verify_chiral(const ChiralPair& pair, int symbol_points) {
    ChiralCertificate cert;
    cert.symbol_points = symbol_points;
    auto [lo0, hi0] = pair.gamma0.bulk_extent();
    auto [lo1, hi1] = pair.gamma1.bulk_extent();
    long extent = std::max({std::abs(lo0), std::abs(hi0), std::abs(lo1), std::abs(hi1)});
    cert.window = pair.u.band_radius() + extent + 4;
    const long L = cert.window;
    const auto one = identity_op(pair.gamma0.fiber_dim());

    auto dev = [L](const BandedOperatorcd& a) { return max_abs(truncate(a, L).matrix); };
    cert.gamma0_selfadjoint = dev(pair.gamma0 - adjoint(pair.gamma0));
    cert.gamma0_involution = dev(pair.gamma0 * pair.gamma0 - one);
    cert.gamma1_selfadjoint = dev(pair.gamma1 - adjoint(pair.gamma1));
    cert.gamma1_involution = dev(pair.gamma1 * pair.gamma1 - one);
    cert.chiral_relation = dev(pair.gamma0 * pair.u * pair.gamma0 - adjoint(pair.u));

    for (Side side : {Side::Left, Side::Right}) {
        auto g0 = symbol_at(pair.gamma0, side);
        auto g1 = symbol_at(pair.gamma1, side);
        auto u = symbol_at(pair.u, side);
        for (int k = 0; k < symbol_points; ++k) {
            cplx z = circle_point(k, symbol_points);
            MatrixXc a = g0(z), b = g1(z), w = u(z);
            cert.symbol_involution = std::max({cert.symbol_involution, involution_defect(a), involution_defect(b)});
            cert.symbol_chiral = std::max(cert.symbol_chiral, max_abs(a * w * a - w.adjoint()));
            cert.symbol_unitarity = std::max(cert.symbol_unitarity, unitarity_defect(w));
        }
    }
    return cert;
}

}  // namespace qwindex
