#ifndef TUBEAP_ZEROS_HPP
#define TUBEAP_ZEROS_HPP

// Zeros and a-points of exponential sums: winding numbers on rectangles of one complex variable,
// zero density of strips, root isolation, and searches in the tail of a tube.

#include "tubeap/exp_sum.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace tubeap {

struct Rect {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double y_lo = 0.0;
    double y_hi = 0.0;

    double width() const { return x_hi - x_lo; }
    double height() const { return y_hi - y_lo; }
    double diameter() const { return std::hypot(width(), height()); }
};

struct ZeroCountResult {
    Rect rect;              // the contour actually used (after a perturbation, if any)
    int count = 0;          // with multiplicity
    double boundary_margin = 0.0;  // min |phi| / term scale on the contour
    bool perturbed = false;
};

/// Winding number of a one-variable sum around the rectangle boundary.
ZeroCountResult count_zeros_rect(const ExpSum& phi, const Rect& rect);

struct ZeroDensity {
    double y1 = 0.0;
    double y2 = 0.0;
    double S = 0.0;
    int count = 0;
    double density = 0.0;          // count / 2S
    double mean_motion_y1 = 0.0;   // c(y1) = -J'(y1)
    double mean_motion_y2 = 0.0;
    double jessen_density = 0.0;   // (J'(y2) - J'(y1)) / 2 pi
    double error = 0.0;            // combined edge-effect bound of both estimates
};

ZeroDensity zero_density_strip(const ExpSum& phi, double y1, double y2, double S);

struct Root {
    std::complex<double> w;
    TubePoint z;
    double residual = 0.0;  // |f(z) - A|
    double scale = 0.0;     // term magnitude scale of f - A at z
    int multiplicity = 1;
};

struct RootSearch {
    std::vector<Root> roots;
    TubePoint base;
    Vec direction;
    int retries = 0;
    long long contour_count = 0;
};

/// Roots of f(base + w direction) = A with w in window: bisection on winding numbers, then
/// damped Newton. Every returned root satisfies residual < 1e-10 * scale.
RootSearch solve_value_on_line(const ExpSum& f, std::complex<double> A, const TubePoint& base,
                               const Vec& direction, const Rect& window, int max_roots,
                               long long max_contours = 20000);

/// The same along the ray z = x0 + w y0. A frequency collision along y0 is retried with a slightly
/// rotated y0, at most three times.
RootSearch solve_value(const ExpSum& f, std::complex<double> A, const Vec& x0, const Vec& y0,
                       const Rect& window, int max_roots);

struct Witness {
    TubePoint z;
    std::complex<double> value;  // the target A
    double residual = 0.0;
    double scale = 0.0;
    Vec ray;                     // real direction of the complex line searched
    std::complex<double> w;
    int attempt = 0;
};

/// Looks for z with f(z) = A, y in the interior of the conjugate cone of gamma and |y| > q.
/// Each attempt starts from a seeded point of that interior beyond radius q, moves along the
/// difference of the two largest terms until they balance, and isolates roots on a short complex
/// line through the balance point. Returns nothing when the budget runs out.
std::optional<Witness> tail_value_search(const ExpSum& f, std::complex<double> A, const Cone& gamma, double q,
                                         int attempt_budget, std::uint64_t seed);

std::optional<Witness> tail_zero_search(const ExpSum& f, const Cone& gamma, double q, int attempt_budget,
                                        std::uint64_t seed);

}  // namespace tubeap

#endif  // TUBEAP_ZEROS_HPP
