#ifndef TUBEAP_NUMERIC_HPP
#define TUBEAP_NUMERIC_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

namespace tubeap {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = Vector<double>;
using Mat = Matrix<double>;

/// Left-to-right inner product. Used wherever two code paths must agree bit for bit.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dot_sequential(const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedB>& b) {
    typename DerivedA::Scalar acc(0);
    for (Eigen::Index i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

/// Neumaier compensated accumulator.
template <typename T>
class CompensatedSum {
public:
    void add(T value) {
        T t = sum_ + value;
        if (abs_(sum_) >= abs_(value))
            comp_ += (sum_ - t) + value;
        else
            comp_ += (value - t) + sum_;
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    static auto abs_(const T& v) { return std::abs(v); }
    T sum_{};
    T comp_{};
};

template <typename Scalar>
class CompensatedSum<std::complex<Scalar>> {
public:
    void add(std::complex<Scalar> v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    std::complex<Scalar> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum<Scalar> re_;
    CompensatedSum<Scalar> im_;
};

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Lexicographic strict ordering on vectors, used for deterministic tie-breaks.
template <typename Derived>
bool lex_less(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return false;
}

}  // namespace tubeap

#endif  // TUBEAP_NUMERIC_HPP
