#ifndef TUBEAP_INDICATOR_HPP
#define TUBEAP_INDICATOR_HPP

// P-indicator h_f(y) = sup_x limsup_r log|f(x + i r y)| / r of exponential sums.

#include "tubeap/exp_sum.hpp"

#include <cstdint>
#include <vector>

namespace tubeap {

struct IndicatorEstimate {
    Vec y;
    double exact = 0.0;
    double empirical = 0.0;
    double r_max = 0.0;
    int x_probes = 0;
    /// (log sum|b_n| + log 2) / r_max, the admissible |empirical - exact| when the dominant
    /// frequency along y is unique and its coefficient is not tiny.
    double gap_bound = 0.0;
};

/// max over terms and limit frequencies of <-y, lambda>.
double p_indicator_exact(const ExpSum& f, const Vec& y);

/// max over seeded probes x in [-100, 100]^p of log|f(x + i r_max y)| / r_max.
IndicatorEstimate p_indicator_empirical(const ExpSum& f, const Vec& y, double r_max, int x_probes,
                                        std::uint64_t seed);

/// F(z) = f(z) e^{i <z, h_f(y0) y0>} / sup_bound. sup_bound <= 0 selects sum |b_n|.
ExpSum normalize(const ExpSum& f, const Vec& y0, double sup_bound = 0.0);

struct PlViolation {
    Vec x;
    double t = 0.0;
    double log_abs = 0.0;
    double bound = 0.0;
};

/// Probes log|F(x + i t y)| <= h_F(y) t + 1e-9 for every t in t_list and seeded x in [-100, 100]^p.
/// Requires sum |b_n| <= 1. Returns the violations.
std::vector<PlViolation> pl_bound_check(const ExpSum& F, const Vec& y, const std::vector<double>& t_list,
                                        int x_probes, std::uint64_t seed);

}  // namespace tubeap

#endif  // TUBEAP_INDICATOR_HPP
