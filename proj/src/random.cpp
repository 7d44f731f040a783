#include "qwindex/random.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>

namespace qwindex {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 step
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

MatrixXc random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    MatrixXc m(rows, cols);
    for (Eigen::Index k = 0; k < cols; ++k)
        for (Eigen::Index i = 0; i < rows; ++i) {
            double re = g(rng);
            double im = g(rng);
            m(i, k) = cplx(re, im);
        }
    return m;
}

MatrixXc random_unitary(Eigen::Index n, Rng& rng) {
    if (n == 0) return MatrixXc(0, 0);
    MatrixXc z = random_gaussian(n, n, rng);
    Eigen::HouseholderQR<MatrixXc> qr(z);
    MatrixXc q = qr.householderQ() * eye(n);
    MatrixXc r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        cplx d = r(i, i);
        double a = std::abs(d);
        if (a > 0) q.col(i) *= d / a;
    }
    return q;
}

MatrixXc random_grading(Eigen::Index n, Eigen::Index k, Rng& rng) {
    MatrixXc v = random_unitary(n, rng);
    VectorXc s = VectorXc::Constant(n, -1.0);
    s.head(k).setOnes();
    return v * s.asDiagonal() * v.adjoint();
}

MatrixXc random_projection(Eigen::Index n, Eigen::Index rank, Rng& rng) {
    MatrixXc v = random_unitary(n, rng);
    MatrixXc w = v.leftCols(rank);
    return w * w.adjoint();
}

FiniteChiralInstance random_chiral_instance(Eigen::Index max_dim, Rng& rng) {
    std::uniform_int_distribution<int> dim_dist(1, int(max_dim));
    const int n = dim_dist(rng);
    std::uniform_int_distribution<int> gen_dist(0, n / 2);
    FiniteChiralInstance inst;
    inst.generic_blocks = gen_dist(rng);
    int rest = n - 2 * inst.generic_blocks;
    // split the remaining one-dimensional blocks into the four types
    std::uniform_int_distribution<int> type_dist(0, 3);
    for (int i = 0; i < rest; ++i) {
        switch (type_dist(rng)) {
            case 0: ++inst.n11; break;
            case 1: ++inst.n10; break;
            case 2: ++inst.n01; break;
            default: ++inst.n00; break;
        }
    }
    MatrixXc g0 = MatrixXc::Zero(n, n), g1 = MatrixXc::Zero(n, n);
    Eigen::Index pos = 0;
    auto put = [&](double a, double b) {
        g0(pos, pos) = a;
        g1(pos, pos) = b;
        ++pos;
    };
    for (int i = 0; i < inst.n11; ++i) put(1, 1);
    for (int i = 0; i < inst.n10; ++i) put(1, -1);
    for (int i = 0; i < inst.n01; ++i) put(-1, 1);
    for (int i = 0; i < inst.n00; ++i) put(-1, -1);
    std::uniform_real_distribution<double> angle(0.05, kPi / 2 - 0.05);
    for (int i = 0; i < inst.generic_blocks; ++i) {
        double t = angle(rng);
        g0(pos, pos) = 1;
        g0(pos + 1, pos + 1) = -1;
        g1(pos, pos) = std::cos(2 * t);
        g1(pos, pos + 1) = std::sin(2 * t);
        g1(pos + 1, pos) = std::sin(2 * t);
        g1(pos + 1, pos + 1) = -std::cos(2 * t);
        pos += 2;
    }
    MatrixXc v = random_unitary(n, rng);
    inst.gamma0 = v * g0 * v.adjoint();
    inst.gamma1 = v * g1 * v.adjoint();
    return inst;
}

FiniteChiralInstance random_generic_chiral_instance(Eigen::Index max_dim, Rng& rng) {
    std::uniform_int_distribution<int> dim_dist(1, int(max_dim));
    const int n = dim_dist(rng);
    std::uniform_int_distribution<int> rank_dist(0, n);
    const int k0 = rank_dist(rng), k1 = rank_dist(rng);
    FiniteChiralInstance inst;
    inst.gamma0 = random_grading(n, k0, rng);
    inst.gamma1 = random_grading(n, k1, rng);
    // generic position: intersections are as small as the dimensions allow
    inst.n10 = std::max(0, k0 - k1);
    inst.n01 = std::max(0, k1 - k0);
    inst.n11 = std::max(0, k0 + k1 - n);
    inst.n00 = std::max(0, n - k0 - k1);
    inst.generic_blocks = -1;
    return inst;
}

FiniteGenerator random_chiral_generator(Eigen::Index max_dim, Rng& rng) {
    std::uniform_int_distribution<int> dim_dist(1, int(max_dim));
    const int n = dim_dist(rng);
    std::uniform_int_distribution<int> split(0, n);
    const int np = split(rng), nm = n - np;
    std::uniform_int_distribution<int> rank_dist(0, std::min(np, nm));
    const int rank = rank_dist(rng);
    MatrixXc b = MatrixXc::Zero(nm, np);
    if (rank > 0) b = random_gaussian(nm, rank, rng) * random_gaussian(rank, np, rng);
    MatrixXc h0 = MatrixXc::Zero(n, n);
    h0.block(np, 0, nm, np) = b;
    h0.block(0, np, np, nm) = b.adjoint();
    double norm = rank > 0 ? Eigen::JacobiSVD<MatrixXc>(h0).singularValues()(0) : 1.0;
    std::uniform_real_distribution<double> shrink(0.5, 1.0);
    h0 *= shrink(rng) / norm;
    VectorXc s = VectorXc::Constant(n, -1.0);
    s.head(np).setOnes();
    MatrixXc v = random_unitary(n, rng);
    FiniteGenerator out;
    out.h = v * h0 * v.adjoint();
    out.h = 0.5 * (out.h + out.h.adjoint()).eval();
    out.gamma0 = v * s.asDiagonal() * v.adjoint();
    out.expected_index = (np - rank) - (nm - rank);
    return out;
}

}  // namespace qwindex

namespace qwindex {

namespace {

CoefficientFunctioncd scalar_profile(cplx left, cplx right, long first, const std::vector<cplx>& bulk) {
    std::vector<MatrixXc> vals;
    for (cplx v : bulk) vals.push_back(MatrixXc::Constant(1, 1, v));
    return CoefficientFunctioncd(MatrixXc::Constant(1, 1, left), MatrixXc::Constant(1, 1, right), first,
                                 std::move(vals));
}

SplitStepParams split_step_with(double phi, double theta_left, double theta_right, Rng& rng) {
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    std::uniform_real_distribution<double> any_angle(0.0, kPi);
    std::uniform_int_distribution<int> defect_len(0, 3), defect_start(-2, 1), shift(1, 2);
    SplitStepParams p;
    p.c = std::cos(phi);
    p.d_coin = std::polar(std::sin(phi), phase(rng));
    p.n = shift(rng);
    const double bl = phase(rng), br = phase(rng);
    const int len = defect_len(rng);
    const long first = defect_start(rng);
    std::vector<cplx> a_bulk, b_bulk;
    for (int i = 0; i < len; ++i) {
        double t = any_angle(rng);
        a_bulk.push_back(std::cos(t));
        b_bulk.push_back(std::polar(std::sin(t), phase(rng)));
    }
    p.a = scalar_profile(std::cos(theta_left), std::cos(theta_right), first, a_bulk);
    p.b = scalar_profile(std::polar(std::sin(theta_left), bl), std::polar(std::sin(theta_right), br), first, b_bulk);
    return p;
}

}  // namespace

SplitStepParams random_gapped_split_step(Rng& rng) {
    std::uniform_real_distribution<double> angle(0.0, kPi);
    const double phi = std::uniform_real_distribution<double>(0.2, kPi - 0.2)(rng);
    auto draw = [&]() {
        while (true) {
            double t = angle(rng);
            if (std::abs(t - phi) >= 0.15 && std::abs(t + phi - kPi) >= 0.15) return t;
        }
    };
    const double tl = draw();
    const double tr = draw();
    return split_step_with(phi, tl, tr, rng);
}

SplitStepParams random_split_step(Rng& rng) {
    std::uniform_real_distribution<double> angle(0.0, kPi);
    const double phi = angle(rng);
    const double tl = angle(rng);
    const double tr = angle(rng);
    return split_step_with(phi, tl, tr, rng);
}

BandedOperatorcd random_banded_operator(Rng& rng) {
    std::uniform_int_distribution<int> dim_dist(1, 2), radius_dist(1, 2), len_dist(0, 4), start_dist(-3, 1);
    const int d = dim_dist(rng);
    const int r = radius_dist(rng);
    std::uniform_int_distribution<int> power(-r, r);
    std::map<int, MatrixXc> limits[2];
    for (int side = 0; side < 2; ++side) {
        MatrixXc uu = random_unitary(d, rng), vv = random_unitary(d, rng);
        for (int i = 0; i < d; ++i) {
            int m = power(rng);
            MatrixXc term = uu.col(i) * vv.row(i);
            auto it = limits[side].find(m);
            if (it == limits[side].end())
                limits[side][m] = term;
            else
                it->second += term;
        }
        // perturbation with total norm 0.4 keeps the smallest singular value above 0.6
        std::vector<MatrixXc> g;
        double total = 0;
        for (int n = -r; n <= r; ++n) {
            g.push_back(random_gaussian(d, d, rng));
            total += g.back().norm();
        }
        for (int n = -r; n <= r; ++n) {
            MatrixXc add = (0.4 / total) * g[std::size_t(n + r)];
            auto it = limits[side].find(n);
            if (it == limits[side].end())
                limits[side][n] = add;
            else
                it->second += add;
        }
    }
    const int len = len_dist(rng);
    const long first = start_dist(rng);
    BandedOperatorcd a(d);
    for (int n = -r; n <= r; ++n) {
        MatrixXc left = limits[0].count(n) ? limits[0][n] : MatrixXc::Zero(d, d);
        MatrixXc right = limits[1].count(n) ? limits[1][n] : MatrixXc::Zero(d, d);
        std::vector<MatrixXc> bulk;
        for (int i = 0; i < len; ++i) bulk.push_back(random_gaussian(d, d, rng));
        a.set_band(n, CoefficientFunctioncd(left, right, first, bulk));
    }
    return a;
}

}  // namespace qwindex
