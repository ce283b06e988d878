#ifndef TUBEAP_NNLS_HPP
#define TUBEAP_NNLS_HPP

#include "tubeap/numeric.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <limits>
#include <vector>

namespace tubeap {

template <typename Scalar>
struct NnlsResult {
    Vector<Scalar> x;
    Scalar residual;  // ||A x - b||
    int iterations;
};

/// Lawson-Hanson active-set solver for  min ||A x - b||  subject to  x >= 0.
template <typename DerivedA, typename DerivedB>
NnlsResult<typename DerivedA::Scalar> nnls(const Eigen::MatrixBase<DerivedA>& A,
                                           const Eigen::MatrixBase<DerivedB>& b,
                                           int max_iterations = 0) {
    using Scalar = typename DerivedA::Scalar;
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);

    Vector<Scalar> x = Vector<Scalar>::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    const Scalar tol = Scalar(10) * std::numeric_limits<Scalar>::epsilon() *
                       std::max<Scalar>(A.cwiseAbs().colwise().sum().maxCoeff(), Scalar(1)) *
                       static_cast<Scalar>(std::max(m, n));

    auto solve_passive = [&](Vector<Scalar>& s) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
        s.setZero(n);
        if (idx.empty()) return;
        Matrix<Scalar> Ap(m, static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
        Vector<Scalar> sp = Ap.colPivHouseholderQr().solve(b);
        for (std::size_t k = 0; k < idx.size(); ++k) s[idx[k]] = sp[static_cast<Eigen::Index>(k)];
    };

    int iter = 0;
    Vector<Scalar> w = A.transpose() * (b - A * x);
    Vector<Scalar> s(n);
    while (iter < max_iterations) {
        Eigen::Index t = -1;
        Scalar best = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w[j] > best) {
                best = w[j];
                t = j;
            }
        }
        if (t < 0) break;
        passive[static_cast<std::size_t>(t)] = true;

        for (;;) {
            ++iter;
            solve_passive(s);
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && s[j] <= tol) feasible = false;
            if (feasible) {
                x = s;
                break;
            }
            Scalar alpha = std::numeric_limits<Scalar>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && s[j] <= tol) {
                    Scalar denom = x[j] - s[j];
                    if (denom > Scalar(0)) alpha = std::min(alpha, x[j] / denom);
                }
            }
            if (!std::isfinite(alpha)) alpha = Scalar(0);
            x += alpha * (s - x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && x[j] <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x[j] = Scalar(0);
                }
            }
            if (iter >= max_iterations) break;
        }
        w = A.transpose() * (b - A * x);
    }
    return {x, (A * x - b).norm(), iter};
}

}  // namespace tubeap

#endif  // TUBEAP_NNLS_HPP
