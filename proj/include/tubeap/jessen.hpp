#ifndef TUBEAP_JESSEN_HPP
#define TUBEAP_JESSEN_HPP

// Jessen function J_f(y) = lim (2S)^{-p} int_{[-S,S]^p} log|f(x + i y)| dx, its gradient
// (the secular vector is -grad J), and the mean motion of arg f along horizontal lines.

#include "tubeap/exp_sum.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace tubeap {

inline constexpr int kJessenBatches = 16;
inline constexpr double kClipWarningFraction = 1e-3;

struct QuadratureParams {
    double S = 2000.0;
    int n_samples = 65536;
    std::uint64_t seed = 42;
    double clip = -40.0;
};

struct JessenEstimate {
    Vec y;
    double value = 0.0;
    double S = 0.0;
    int n_samples = 0;
    double clipped_fraction = 0.0;
    double std_error = 0.0;
    /// Means over kJessenBatches contiguous blocks of the sample sequence. Estimates made with the
    /// same seed share sample points, so combinations of them can use paired batch statistics.
    std::vector<double> batch_means;

    bool clip_warning() const { return clipped_fraction > kClipWarningFraction; }
};

/// Mean of max(log|f|, clip) over a seeded Kronecker point set in [-S, S]^p. A sample below clip/2
/// is replaced by the clipped mean over its 2^p refinement children. One-term sums are exact.
JessenEstimate jessen_estimate(const ExpSum& f, const Vec& y, const QuadratureParams& params = {});

/// Standard error of sum_k weight_k * estimate_k computed from paired batch means.
double combined_stderr(std::span<const JessenEstimate* const> estimates, std::span<const double> weights);

struct ProfileRow {
    double R;
    double value;   // J_f(R y) / R
    double std_error;  // stderr of J_f(R y) / R
};

std::vector<ProfileRow> jessen_profile(const ExpSum& f, const Vec& y, std::span<const double> R_schedule,
                                       const QuadratureParams& params = {});

struct SecularVector {
    Vec y;
    Vec value;   // -grad J_f(y)
    Vec std_error;  // per component
    double h = 0.0;
    bool kink_suspected = false;  // mean motion differs across y +- h on some axis
};

/// Gradient noise above this (3 sigma, per unit of y) with a difference inside the noise band
/// raises StepTooSmall.
inline constexpr double kGradientResolution = 1e-2;

/// -grad J_f(y) by central differences with step h on every axis (h <= 0 selects 0.05 |y|).
/// The mean motions along e_j at y +- h e_j (span S) are compared to flag a kink in between.
SecularVector secular_vector(const ExpSum& f, const Vec& y, double h = 0.0,
                             const QuadratureParams& params = {});

struct MeanMotionResult {
    Vec y;
    Vec direction;
    double value = 0.0;  // radians per unit length
    double x_span = 0.0;
    long long n_steps = 0;
};

/// (arg f(end) - arg f(start)) / x_span along the segment of length x_span centred at the origin
/// of the line {t * direction + i y}. initial_step <= 0 selects 0.1 / max |<direction, lambda>|.
MeanMotionResult mean_motion(const ExpSum& f, const Vec& y, const Vec& direction, double x_span,
                             double initial_step = 0.0);

struct ConvexityReport {
    JessenEstimate at_y1;
    JessenEstimate at_y2;
    JessenEstimate at_mid;
    double slack = 0.0;      // J(mid) - (J(y1) + J(y2)) / 2, nonpositive for a convex J
    double tolerance = 0.0;  // 3 * combined stderr
    bool passed = false;
};

ConvexityReport convexity_check(const ExpSum& f, const Vec& y1, const Vec& y2,
                                const QuadratureParams& params = {});

/// Checks g(0) >= alpha^{-1} int_{-alpha}^{alpha} g for samples (t, g(t)) of a convex negative
/// function on [-alpha, alpha] (trapezoid rule, endpoints included). Throws NotNegative if any
/// sample is >= 0.
bool lemma2_bound(std::span<const std::pair<double, double>> samples, double tolerance = 1e-12);

}  // namespace tubeap

#endif  // TUBEAP_JESSEN_HPP
