#ifndef TUBEAP_TEST_SUPPORT_HPP
#define TUBEAP_TEST_SUPPORT_HPP

#include "tubeap/exp_sum.hpp"

#include <complex>
#include <initializer_list>
#include <optional>
#include <random>
#include <vector>

namespace tubeap::test {

inline Vec vec(std::initializer_list<double> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

inline ExpSum sum(const std::vector<Vec>& freqs, const std::vector<std::complex<double>>& coeffs,
                  std::vector<Vec> limits = {}) {
    return make_exp_sum<double>(freqs, coeffs, std::move(limits));
}

inline Cone quadrant() { return make_cone<double>({vec({1, 0}), vec({0, 1})}); }
inline Cone half_line() { return make_cone<double>({vec({1})}); }

template <typename F>
std::optional<Errc> error_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace tubeap::test

#endif
