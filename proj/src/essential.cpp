#include "qwindex/essential.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>

namespace qwindex {

namespace {

constexpr int kGridCap = 1 << 16;

void check_grid(int grid_n) {
    if (grid_n < 16 || (grid_n & (grid_n - 1)) != 0)
        throw PreconditionError("grid size must be a power of two and at least 16");
}

double spectral_norm(const MatrixXc& m) { return Eigen::JacobiSVD<MatrixXc>(m).singularValues()(0); }

double smallest_singular(const MatrixXc& m) {
    const auto s = Eigen::JacobiSVD<MatrixXc>(m).singularValues();
    return s(s.size() - 1);
}

// Reduce f over the grid points of size n, skipping the even points when only_odd.
double reduce_grid(const std::vector<SymbolLoopcd>& loops, int n, bool only_odd, bool take_max,
                   const std::function<double(const MatrixXc&)>& f) {
    double acc = take_max ? 0.0 : std::numeric_limits<double>::infinity();
    const int step = only_odd ? 2 : 1;
    for (const auto& loop : loops) {
        for (int k = only_odd ? 1 : 0; k < n; k += step) {
            double v = f(loop(circle_point(k, n)));
            acc = take_max ? std::max(acc, v) : std::min(acc, v);
        }
    }
    return acc;
}

std::vector<SymbolLoopcd> both_symbols(const BandedOperatorcd& a) {
    return {symbol_at(a, Side::Left), symbol_at(a, Side::Right)};
}

double lipschitz(const std::vector<SymbolLoopcd>& loops) {
    double l = 0;
    for (const auto& loop : loops) l = std::max(l, loop.lipschitz_bound());
    return l;
}

// Tri-state driver: with take_max the claim is sup f < bound - margin, otherwise inf f > bound + margin.
Certification certify(const std::vector<SymbolLoopcd>& loops, int grid_n, double margin, bool take_max,
                      const std::function<double(const MatrixXc&)>& f, double bound, const std::string& what) {
    check_grid(grid_n);
    Certification c;
    c.margin = margin;
    c.what = what;
    const double lip = lipschitz(loops);
    int n = grid_n;
    double v = reduce_grid(loops, n, false, take_max, f);
    while (true) {
        c.value = v;
        c.grid_n = n;
        c.resolution = lip * kPi / n;
        if (take_max) {
            // sup over the circle lies in [v, v + resolution]
            if (v + c.resolution < bound - margin) {
                c.status = CertStatus::Certified;
                return c;
            }
            if (v >= bound - margin) {
                c.status = CertStatus::Refuted;
                return c;
            }
        } else {
            // inf over the circle lies in [v - resolution, v]
            if (v - c.resolution > bound + margin) {
                c.status = CertStatus::Certified;
                return c;
            }
            if (v <= bound + margin) {
                c.status = CertStatus::Refuted;
                return c;
            }
        }
        if (n >= kGridCap) break;
        double w = reduce_grid(loops, 2 * n, true, take_max, f);
        v = take_max ? std::max(v, w) : std::min(v, w);
        n *= 2;
    }
    c.status = CertStatus::Inconclusive;
    return c;
}

}  // namespace

const char* to_string(CertStatus s) {
    switch (s) {
        case CertStatus::Certified: return "certified";
        case CertStatus::Refuted: return "refuted";
        default: return "inconclusive";
    }
}

EssentialNorm essential_norm(const BandedOperatorcd& a, int grid_n, bool refine) {
    check_grid(grid_n);
    auto loops = both_symbols(a);
    int n = grid_n;
    double v = reduce_grid(loops, n, false, true, spectral_norm);
    while (refine && n < kGridCap) {
        double w = std::max(v, reduce_grid(loops, 2 * n, true, true, spectral_norm));
        n *= 2;
        bool settled = w - v < 1e-6;
        v = w;
        if (settled) break;
    }
    return EssentialNorm{v, n};
}

double min_singular_gap(const BandedOperatorcd& a, cplx target, int grid_n) {
    check_grid(grid_n);
    auto loops = both_symbols(a);
    const Eigen::Index d = a.fiber_dim();
    return reduce_grid(loops, grid_n, false, false,
                       [&](const MatrixXc& m) { return smallest_singular(m - target * eye(d)); });
}

Certification is_fredholm_type(const BandedOperatorcd& u, int grid_n, double margin, int sign) {
    auto shifted = subtract(identity_op(u.fiber_dim()), scale(cplx(sign), u));
    return certify(both_symbols(shifted), grid_n, margin, true, spectral_norm, 2.0,
                   sign > 0 ? "fredholm_type(U)" : "fredholm_type(-U)");
}

Certification gap_at(const BandedOperatorcd& u, int target, int grid_n, double margin) {
    if (target != 1 && target != -1) throw PreconditionError("gap target must be +1 or -1");
    auto shifted = subtract(u, scale(cplx(target), identity_op(u.fiber_dim())));
    return certify(both_symbols(shifted), grid_n, margin, false, smallest_singular, 0.0,
                   target > 0 ? "gap_at(+1)" : "gap_at(-1)");
}

Certification invertibility(const BandedOperatorcd& a, int grid_n, double margin) {
    return certify(both_symbols(a), grid_n, margin, false, smallest_singular, 0.0, "invertible_symbols");
}

DichotomyReport dichotomy_check(const ChiralPair& pair, int grid_n, double margin) {
    DichotomyReport r;
    r.norm_difference = essential_norm(pair.gamma0 - pair.gamma1, grid_n).value;
    r.norm_sum = essential_norm(pair.gamma0 + pair.gamma1, grid_n).value;
    r.holds = std::max(r.norm_difference, r.norm_sum) >= 1.0 - margin;
    return r;
}

}  // namespace qwindex
