#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qwindex {

typedef std::complex<double> cplx;
typedef Eigen::MatrixXcd MatrixXc;
typedef Eigen::VectorXcd VectorXc;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

typedef Eigen::Ref<const MatrixXc> CRef;

enum class Side { Left, Right };

inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

constexpr double kPi = 3.14159265358979323846;

// Defaults shared by every module.
struct Tolerances {
    double rank_tol = 1e-8;
    int grid_n = 4096;
    double margin = 1e-6;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The operator is not Fredholm at the point of interest (gap closed, unit-circle root).
class NotFredholmError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not resolve its answer (grid cap, degenerate frame, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::invalid_argument("zero denominator");
        if (d < 0) { n = -n; d = -d; }
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g == 0) g = 1;
        return Rational{n / g, d / g};
    }
    double value() const { return double(num) / double(den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    Rational operator-(const Rational& o) const { return make(num * o.den - o.num * den, den * o.den); }
    Rational operator+(const Rational& o) const { return make(num * o.den + o.num * den, den * o.den); }
    std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

inline MatrixXc eye(Eigen::Index n) { return MatrixXc::Identity(n, n); }

// max |entry|, the deviation measure used by the validators
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline cplx circle_point(int k, int n) {
    double t = 2.0 * kPi * double(k) / double(n);
    return cplx(std::cos(t), std::sin(t));
}

}  // namespace qwindex
