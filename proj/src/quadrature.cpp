#include "tubeap/quadrature.hpp"

#include "tubeap/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace tubeap {

GaussHermite gauss_hermite(int n) {
    require(n >= 1 && n <= 64, Errc::InvalidArgument, "Gauss-Hermite order must be in [1, 64]");
    // Jacobi matrix of the probabilists' Hermite polynomials.
    Mat jacobi = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Mat> eig(jacobi);
    GaussHermite out;
    out.nodes = eig.eigenvalues();
    out.weights = eig.eigenvectors().row(0).array().square().transpose();
    // Symmetrize: the rule is exact on odd functions.
    for (int k = 0; k < n / 2; ++k) {
        const double x = 0.5 * (out.nodes[n - 1 - k] - out.nodes[k]);
        const double w = 0.5 * (out.weights[k] + out.weights[n - 1 - k]);
        out.nodes[k] = -x;
        out.nodes[n - 1 - k] = x;
        out.weights[k] = out.weights[n - 1 - k] = w;
    }
    if (n % 2 == 1) out.nodes[n / 2] = 0.0;
    out.weights /= out.weights.sum();
    return out;
}

}  // namespace tubeap
