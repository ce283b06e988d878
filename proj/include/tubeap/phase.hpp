#ifndef TUBEAP_PHASE_HPP
#define TUBEAP_PHASE_HPP

#include <complex>
#include <functional>

namespace tubeap {

struct PhaseTrack {
    double total = 0.0;      // accumulated continuous change of arg, never reduced mod 2 pi
    long long n_steps = 0;
    double min_ratio = 0.0;  // smallest |value| / scale seen on the path
};

/// Bound on |d value / ds| over [s, s + h].
using DerivativeBound = std::function<double(double s, double h)>;

/// Follows a continuous branch of arg value(s) for s in [0, length]. Without a derivative bound a
/// step is accepted when the phase change is at most pi/2 and agrees with the two half steps;
/// otherwise it is halved, at most 20 times. With a bound every step satisfies h * bound < |value|,
/// so value stays in a disk around its start that excludes 0. Throws ZeroOnPath when
/// |value| < zero_floor * scale(s) at a sampled point.
PhaseTrack track_phase(const std::function<std::complex<double>(double)>& value,
                       const std::function<double(double)>& scale, double length,
                       double initial_step, double zero_floor, const DerivativeBound& bound = {});

}  // namespace tubeap

#endif  // TUBEAP_PHASE_HPP
