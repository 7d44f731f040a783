#pragma once

#include "qwindex/core.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace qwindex {

/// Site-dependent d x d coefficient with exact limits at -inf and +inf.
///
/// The bulk table is contiguous, starting at first_site(). Sites left of the
/// table see the left limit, sites right of it the right limit. An empty table
/// places the jump between first_site()-1 and first_site().
template <typename Scalar>
class CoefficientFunction {
public:
    typedef Mat<Scalar> Matrix;

    CoefficientFunction() = default;

    CoefficientFunction(Matrix left, Matrix right, long first_site = 0, std::vector<Matrix> bulk = {})
        : left_(std::move(left)), right_(std::move(right)), first_(first_site), bulk_(std::move(bulk)) {
        if (left_.rows() != left_.cols() || right_.rows() != left_.rows() || right_.cols() != left_.cols())
            throw PreconditionError("coefficient limits must be square matrices of equal size");
        check_finite(left_);
        check_finite(right_);
        for (const auto& v : bulk_) {
            if (v.rows() != left_.rows() || v.cols() != left_.cols())
                throw PreconditionError("bulk value has wrong dimension");
            check_finite(v);
        }
        trim();
    }

    static CoefficientFunction constant(const Matrix& v) { return CoefficientFunction(v, v); }

    static CoefficientFunction scalar(Scalar left, Scalar right) {
        return CoefficientFunction(Matrix::Constant(1, 1, left), Matrix::Constant(1, 1, right));
    }

    /// Build from (site, value) pairs; sites must be strictly increasing and consecutive.
    static CoefficientFunction from_table(Matrix left, Matrix right,
                                          const std::vector<std::pair<long, Matrix>>& table) {
        if (table.empty()) return CoefficientFunction(std::move(left), std::move(right));
        std::vector<Matrix> vals;
        vals.reserve(table.size());
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (i > 0 && table[i].first <= table[i - 1].first)
                throw PreconditionError("bulk sites must be strictly increasing");
            if (i > 0 && table[i].first != table[i - 1].first + 1)
                throw PreconditionError("bulk sites must be consecutive (site " +
                                        std::to_string(table[i].first) + ")");
            vals.push_back(table[i].second);
        }
        return CoefficientFunction(std::move(left), std::move(right), table.front().first, std::move(vals));
    }

    Eigen::Index dim() const { return left_.rows(); }
    const Matrix& left_limit() const { return left_; }
    const Matrix& right_limit() const { return right_; }
    const Matrix& limit(Side s) const { return s == Side::Left ? left_ : right_; }
    long first_site() const { return first_; }
    long last_site() const { return first_ + long(bulk_.size()) - 1; }
    const std::vector<Matrix>& bulk() const { return bulk_; }

    const Matrix& operator()(long x) const {
        if (x < first_) return left_;
        if (x > last_site()) return right_;
        return bulk_[std::size_t(x - first_)];
    }

    /// g(x) = f(x - n).
    CoefficientFunction shifted(long n) const {
        CoefficientFunction g = *this;
        g.first_ += n;
        return g;
    }

    bool is_zero() const {
        if (!left_.isZero(0) || !right_.isZero(0)) return false;
        for (const auto& v : bulk_)
            if (!v.isZero(0)) return false;
        return true;
    }

    template <typename Op>
    CoefficientFunction map(Op op) const {
        std::vector<Matrix> vals;
        vals.reserve(bulk_.size());
        for (const auto& v : bulk_) vals.push_back(op(v));
        return CoefficientFunction(op(left_), op(right_), first_, std::move(vals));
    }

    /// Pointwise h(x) = op(f(x), g(x)) on the union of both tables.
    template <typename Op>
    static CoefficientFunction combine(const CoefficientFunction& f, const CoefficientFunction& g, Op op) {
        long lo = std::min(f.first_site(), g.first_site());
        long hi = std::max(f.last_site(), g.last_site());
        std::vector<Matrix> vals;
        if (hi >= lo) {
            vals.reserve(std::size_t(hi - lo + 1));
            for (long x = lo; x <= hi; ++x) vals.push_back(op(f(x), g(x)));
        }
        return CoefficientFunction(op(f.left_, g.left_), op(f.right_, g.right_), lo, std::move(vals));
    }

private:
    static void check_finite(const Matrix& m) {
        if (!m.allFinite()) throw PreconditionError("coefficient has non-finite entries");
    }

    // drop table ends that already equal the limits
    void trim() {
        std::size_t a = 0, b = bulk_.size();
        while (a < b && bulk_[a] == left_) ++a;
        while (b > a && bulk_[b - 1] == right_) --b;
        if (a == 0 && b == bulk_.size()) return;
        std::vector<Matrix> kept(bulk_.begin() + long(a), bulk_.begin() + long(b));
        first_ += long(a);
        bulk_ = std::move(kept);
    }

    Matrix left_ = Matrix::Zero(1, 1);
    Matrix right_ = Matrix::Zero(1, 1);
    long first_ = 0;
    std::vector<Matrix> bulk_;
};

/// Laurent polynomial z -> sum_n A_n z^n with matrix coefficients.
template <typename Scalar>
class SymbolLoop {
public:
    typedef Mat<Scalar> Matrix;

    explicit SymbolLoop(Eigen::Index d = 1) : d_(d) {}
    SymbolLoop(Eigen::Index d, std::map<int, Matrix> coeffs) : d_(d) {
        for (auto& [n, a] : coeffs) set(n, a);
    }

    Eigen::Index fiber_dim() const { return d_; }
    const std::map<int, Matrix>& coefficients() const { return coeffs_; }

    void set(int n, const Matrix& a) {
        if (a.rows() != d_ || a.cols() != d_) throw PreconditionError("symbol coefficient has wrong dimension");
        if (a.isZero(0))
            coeffs_.erase(n);
        else
            coeffs_[n] = a;
    }

    int min_degree() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    int max_degree() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }
    int radius() const { return std::max(-min_degree(), max_degree()); }

    MatrixXc operator()(cplx z) const {
        MatrixXc out = MatrixXc::Zero(d_, d_);
        for (const auto& [n, a] : coeffs_) out += std::pow(z, n) * a.template cast<cplx>();
        return out;
    }

    /// d/dz of the Laurent polynomial.
    MatrixXc derivative(cplx z) const {
        MatrixXc out = MatrixXc::Zero(d_, d_);
        for (const auto& [n, a] : coeffs_)
            if (n != 0) out += (double(n) * std::pow(z, n - 1)) * a.template cast<cplx>();
        return out;
    }

    /// Bound on |d/dtheta F(e^{i theta})| in spectral norm.
    double lipschitz_bound() const {
        double s = 0;
        for (const auto& [n, a] : coeffs_) s += std::abs(n) * a.norm();
        return s;
    }

private:
    Eigen::Index d_;
    std::map<int, Matrix> coeffs_;
};

/// Banded operator on l^2(Z, C^d): (A psi)(x) = sum_n a_n(x) psi(x - n).
template <typename Scalar>
class BandedOperator {
public:
    typedef Mat<Scalar> Matrix;
    typedef CoefficientFunction<Scalar> Coefficient;

    explicit BandedOperator(Eigen::Index d = 1) : d_(d) {
        if (d <= 0) throw PreconditionError("fiber dimension must be positive");
    }

    BandedOperator(Eigen::Index d, const std::map<int, Coefficient>& bands) : BandedOperator(d) {
        for (const auto& [n, f] : bands) set_band(n, f);
    }

    Eigen::Index fiber_dim() const { return d_; }
    const std::map<int, Coefficient>& bands() const { return bands_; }

    void set_band(int n, const Coefficient& f) {
        if (f.dim() != d_) throw PreconditionError("band coefficient has wrong fiber dimension");
        if (f.is_zero())
            bands_.erase(n);
        else
            bands_[n] = f;
    }

    int band_radius() const {
        int r = 0;
        for (const auto& [n, f] : bands_) r = std::max(r, std::abs(n));
        return r;
    }

    /// Row-site coefficient a_n(x); zero when the band is absent.
    Matrix coefficient(int n, long x) const {
        auto it = bands_.find(n);
        if (it == bands_.end()) return Matrix::Zero(d_, d_);
        return it->second(x);
    }

    /// Sites [lo, hi] where some row differs from its limit; hi < lo when all tables are empty at one jump.
    std::pair<long, long> bulk_extent() const {
        if (bands_.empty()) return {0, -1};
        long lo = bands_.begin()->second.first_site();
        long hi = bands_.begin()->second.last_site();
        for (const auto& [n, f] : bands_) {
            lo = std::min(lo, f.first_site());
            hi = std::max(hi, f.last_site());
        }
        return {lo, hi};
    }

private:
    Eigen::Index d_;
    std::map<int, Coefficient> bands_;
};

/// Dense compression of a banded operator to the sites [first_site, first_site + sites - 1].
template <typename Scalar>
struct TruncatedOperator {
    long half_width = 0;
    long first_site = 0;  // site of block 0
    long sites = 0;
    Eigen::Index fiber_dim = 1;
    Mat<Scalar> matrix;
    bool fits = true;  // false when some bulk table pokes outside [-L+r, L-r]

    Eigen::Index index_of(long x, Eigen::Index i = 0) const { return Eigen::Index(x - first_site) * fiber_dim + i; }
};

typedef CoefficientFunction<cplx> CoefficientFunctioncd;
typedef BandedOperator<cplx> BandedOperatorcd;
typedef SymbolLoop<cplx> SymbolLoopcd;
typedef TruncatedOperator<cplx> TruncatedOperatorcd;

// ---------------------------------------------------------------------------
// construction

template <typename Scalar = cplx>
BandedOperator<Scalar> identity_op(Eigen::Index d) {
    BandedOperator<Scalar> a(d);
    a.set_band(0, CoefficientFunction<Scalar>::constant(Mat<Scalar>::Identity(d, d)));
    return a;
}

/// S^k tensor 1_d, with (S psi)(x) = psi(x - 1).
template <typename Scalar = cplx>
BandedOperator<Scalar> shift_power(int k, Eigen::Index d) {
    BandedOperator<Scalar> a(d);
    a.set_band(k, CoefficientFunction<Scalar>::constant(Mat<Scalar>::Identity(d, d)));
    return a;
}

template <typename Scalar>
BandedOperator<Scalar> mult_op(const CoefficientFunction<Scalar>& f) {
    BandedOperator<Scalar> a(f.dim());
    a.set_band(0, f);
    return a;
}

// ---------------------------------------------------------------------------
// algebra

template <typename Scalar>
BandedOperator<Scalar> add(const BandedOperator<Scalar>& a, const BandedOperator<Scalar>& b) {
    if (a.fiber_dim() != b.fiber_dim()) throw PreconditionError("add: fiber dimension mismatch");
    typedef Mat<Scalar> M;
    BandedOperator<Scalar> out = a;
    for (const auto& [n, g] : b.bands()) {
        auto it = a.bands().find(n);
        if (it == a.bands().end())
            out.set_band(n, g);
        else
            out.set_band(n, CoefficientFunction<Scalar>::combine(it->second, g,
                                                                 [](const M& x, const M& y) -> M { return x + y; }));
    }
    return out;
}

template <typename Scalar>
BandedOperator<Scalar> scale(Scalar c, const BandedOperator<Scalar>& a) {
    BandedOperator<Scalar> out(a.fiber_dim());
    for (const auto& [n, f] : a.bands())
        out.set_band(n, f.map([c](const Mat<Scalar>& m) -> Mat<Scalar> { return c * m; }));
    return out;
}

template <typename Scalar>
BandedOperator<Scalar> subtract(const BandedOperator<Scalar>& a, const BandedOperator<Scalar>& b) {
    return add(a, scale(Scalar(-1), b));
}

/// (AB)_k(x) = sum_{n+m=k} a_n(x) b_m(x - n).
template <typename Scalar>
BandedOperator<Scalar> compose(const BandedOperator<Scalar>& a, const BandedOperator<Scalar>& b) {
    if (a.fiber_dim() != b.fiber_dim()) throw PreconditionError("compose: fiber dimension mismatch");
    typedef Mat<Scalar> M;
    std::map<int, CoefficientFunction<Scalar>> acc;
    for (const auto& [n, f] : a.bands()) {
        for (const auto& [m, g] : b.bands()) {
            auto term = CoefficientFunction<Scalar>::combine(f, g.shifted(n),
                                                             [](const M& x, const M& y) -> M { return x * y; });
            auto it = acc.find(n + m);
            if (it == acc.end())
                acc.emplace(n + m, term);
            else
                it->second = CoefficientFunction<Scalar>::combine(it->second, term,
                                                                  [](const M& x, const M& y) -> M { return x + y; });
        }
    }
    BandedOperator<Scalar> out(a.fiber_dim());
    for (const auto& [k, f] : acc) out.set_band(k, f);
    return out;
}

/// (A*)_n(x) = a_{-n}(x - n)^*.
template <typename Scalar>
BandedOperator<Scalar> adjoint(const BandedOperator<Scalar>& a) {
    BandedOperator<Scalar> out(a.fiber_dim());
    for (const auto& [n, f] : a.bands())
        out.set_band(-n, f.shifted(-n).map([](const Mat<Scalar>& m) -> Mat<Scalar> { return m.adjoint(); }));
    return out;
}

template <typename Scalar>
BandedOperator<Scalar> operator+(const BandedOperator<Scalar>& a, const BandedOperator<Scalar>& b) {
    return add(a, b);
}
template <typename Scalar>
BandedOperator<Scalar> operator-(const BandedOperator<Scalar>& a, const BandedOperator<Scalar>& b) {
    return subtract(a, b);
}
template <typename Scalar>
BandedOperator<Scalar> operator*(const BandedOperator<Scalar>& a, const BandedOperator<Scalar>& b) {
    return compose(a, b);
}
template <typename Scalar>
BandedOperator<Scalar> operator*(Scalar c, const BandedOperator<Scalar>& a) {
    return scale(c, a);
}

// ---------------------------------------------------------------------------
// symbols and truncation

template <typename Scalar>
SymbolLoop<Scalar> symbol_at(const BandedOperator<Scalar>& a, Side side) {
    SymbolLoop<Scalar> loop(a.fiber_dim());
    for (const auto& [n, f] : a.bands()) loop.set(n, f.limit(side));
    return loop;
}

/// Compression to the sites [x_first, x_last], site-major with the fiber index fastest.
template <typename Scalar>
TruncatedOperator<Scalar> truncate_window(const BandedOperator<Scalar>& a, long x_first, long x_last) {
    if (x_last < x_first) throw PreconditionError("empty truncation window");
    const Eigen::Index d = a.fiber_dim();
    TruncatedOperator<Scalar> t;
    t.first_site = x_first;
    t.sites = x_last - x_first + 1;
    t.fiber_dim = d;
    t.half_width = (x_last - x_first) / 2;
    t.matrix = Mat<Scalar>::Zero(t.sites * d, t.sites * d);
    for (const auto& [n, f] : a.bands()) {
        for (long x = x_first; x <= x_last; ++x) {
            long y = x - n;
            if (y < x_first || y > x_last) continue;
            t.matrix.block(t.index_of(x), t.index_of(y), d, d) = f(x);
        }
    }
    auto [lo, hi] = a.bulk_extent();
    int r = a.band_radius();
    t.fits = hi < lo || (lo >= x_first + r && hi <= x_last - r);
    return t;
}

template <typename Scalar>
TruncatedOperator<Scalar> truncate(const BandedOperator<Scalar>& a, long L) {
    if (L <= 0) throw PreconditionError("truncation half-width must be positive");
    auto t = truncate_window(a, -L, L);
    t.half_width = L;
    if (L < a.band_radius()) t.fits = false;
    return t;
}

}  // namespace qwindex
