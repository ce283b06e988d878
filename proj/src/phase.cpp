#include "tubeap/phase.hpp"

#include "tubeap/error.hpp"
#include "tubeap/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tubeap {

namespace {

constexpr int kMaxHalvings = 20;

}  // namespace

PhaseTrack track_phase(const std::function<std::complex<double>(double)>& value,
                       const std::function<double(double)>& scale, double length,
                       double initial_step, double zero_floor, const DerivativeBound& bound) {
    require(length > 0.0, Errc::InvalidArgument, "path length must be positive");
    require(initial_step > 0.0, Errc::InvalidArgument, "initial step must be positive");

    PhaseTrack out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    auto sample = [&](double s) {
        std::complex<double> v = value(s);
        const double sc = scale(s);
        const double ratio = sc > 0.0 ? std::abs(v) / sc : 0.0;
        out.min_ratio = std::min(out.min_ratio, ratio);
        if (!(ratio >= zero_floor))
            throw Error(Errc::ZeroOnPath, "function vanishes near path parameter " + std::to_string(s));
        return v;
    };

    double s = 0.0;
    std::complex<double> v0 = sample(0.0);
    double h = std::min(initial_step, length);
    CompensatedSum<double> total;
    while (length - s > 1e-15 * length) {
        h = std::min(h, length - s);
        if (bound) {
            const double d = bound(s, h);
            if (h * d >= 0.5 * std::abs(v0)) h = 0.5 * std::abs(v0) / d;
            if (h < 1e-15 * length)
                throw Error(Errc::TrackingFailed, "phase tracking step underflow near " + std::to_string(s));
            const std::complex<double> v1 = sample(s + h);
            total.add(std::arg(v1 / v0));
            s += h;
            v0 = v1;
            ++out.n_steps;
            h = std::min(2.0 * h, initial_step);
            continue;
        }
        bool accepted = false;
        double delta = 0.0;
        std::complex<double> v1;
        for (int halving = 0; halving <= kMaxHalvings; ++halving) {
            v1 = sample(s + h);
            const std::complex<double> vm = sample(s + 0.5 * h);
            delta = std::arg(v1 / v0);
            const double d1 = std::arg(vm / v0);
            const double d2 = std::arg(v1 / vm);
            if (std::abs(delta) <= 0.5 * kPi && std::abs(d1 + d2 - delta) < 1e-9) {
                accepted = true;
                break;
            }
            h *= 0.5;
        }
        if (!accepted)
            throw Error(Errc::TrackingFailed, "phase tracking could not resolve the argument near " +
                                                  std::to_string(s));
        total.add(delta);
        s += h;
        v0 = v1;
        ++out.n_steps;
        h = std::min(2.0 * h, initial_step);
    }
    out.total = total.value();
    return out;
}

}  // namespace tubeap
