#ifndef TUBEAP_QUADRATURE_HPP
#define TUBEAP_QUADRATURE_HPP

#include "tubeap/numeric.hpp"

namespace tubeap {

/// Nodes and weights with sum_k w_k g(x_k) ~ E[g(X)], X standard normal (Golub-Welsch).
struct GaussHermite {
    Vec nodes;
    Vec weights;
};

GaussHermite gauss_hermite(int n);

}  // namespace tubeap

#endif  // TUBEAP_QUADRATURE_HPP
