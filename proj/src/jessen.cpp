#include "tubeap/jessen.hpp"

#include "tubeap/parallel.hpp"
#include "tubeap/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace tubeap {

namespace {

/// Additive recurrence constants 1/phi_p^{j+1}, phi_p the positive root of x^{p+1} = x + 1.
Vec kronecker_alpha(Eigen::Index p) {
    double g = 1.5;
    for (int it = 0; it < 64; ++it) {
        const double f = std::pow(g, static_cast<double>(p + 1)) - g - 1.0;
        const double df = static_cast<double>(p + 1) * std::pow(g, static_cast<double>(p)) - 1.0;
        g -= f / df;
    }
    Vec alpha(p);
    for (Eigen::Index j = 0; j < p; ++j) alpha[j] = std::fmod(1.0 / std::pow(g, static_cast<double>(j + 1)), 1.0);
    return alpha;
}

double batch_stderr(const std::vector<double>& batches) {
    const double n = static_cast<double>(batches.size());
    double mean = 0.0;
    for (double b : batches) mean += b;
    mean /= n;
    double ss = 0.0;
    for (double b : batches) ss += (b - mean) * (b - mean);
    return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

JessenEstimate jessen_estimate(const ExpSum& f, const Vec& y, const QuadratureParams& params) {
    const Eigen::Index p = f.dimension();
    require(y.size() == p, Errc::DimensionMismatch, "y has the wrong dimension");
    require(params.S > 0.0, Errc::InvalidArgument, "S must be positive");
    require(params.n_samples >= 100, Errc::InvalidArgument, "need at least 100 samples");
    require(params.clip < 0.0, Errc::InvalidArgument, "clip floor must be negative");
    require(f.size() > 0, Errc::EmptySpectrum, "Jessen function of the zero sum");

    JessenEstimate est;
    est.y = y;
    est.S = params.S;
    est.n_samples = params.n_samples;

    if (f.size() == 1) {
        // |f| is constant in x.
        const auto& t = f.terms().front();
        est.value = std::log(std::abs(t.coefficient)) + detail::checked_exponent(y, t.frequency);
        est.std_error = 0.0;
        est.batch_means.assign(kJessenBatches, est.value);
        return est;
    }

    const HorizontalSlice<double> slice(f, y);
    const double floor_abs = 4.0 * std::numeric_limits<double>::epsilon() * slice.scale();
    const Vec alpha = kronecker_alpha(p);
    Vec shift(p);
    {
        std::mt19937_64 rng(params.seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (Eigen::Index j = 0; j < p; ++j) shift[j] = unif(rng);
    }
    const double spacing = 2.0 * params.S / std::pow(static_cast<double>(params.n_samples), 1.0 / static_cast<double>(p));
    const int n_children = 1 << p;
    const double clip = params.clip;

    auto log_abs_at = [&](const Vec& x) {
        const double m = std::abs(slice(x));
        return m <= floor_abs ? -std::numeric_limits<double>::infinity() : std::log(m);
    };

    std::vector<double> batch_sum(kJessenBatches, 0.0);
    std::vector<double> batch_clipped(kJessenBatches, 0.0);
    std::vector<long long> batch_count(kJessenBatches, 0);
    const long long n = params.n_samples;

    parallel_for(kJessenBatches, [&](std::size_t b) {
        const long long begin = n * static_cast<long long>(b) / kJessenBatches;
        const long long end = n * static_cast<long long>(b + 1) / kJessenBatches;
        CompensatedSum<double> acc;
        double clipped = 0.0;
        Vec x(p), child(p);
        for (long long k = begin; k < end; ++k) {
            for (Eigen::Index j = 0; j < p; ++j) {
                const double u = std::fmod(shift[j] + static_cast<double>(k + 1) * alpha[j], 1.0);
                x[j] = params.S * (2.0 * u - 1.0);
            }
            double v = log_abs_at(x);
            if (v < 0.5 * clip) {
                double refined = 0.0;
                for (int c = 0; c < n_children; ++c) {
                    for (Eigen::Index j = 0; j < p; ++j)
                        child[j] = x[j] + (((c >> j) & 1) ? 0.25 : -0.25) * spacing;
                    double cv = log_abs_at(child);
                    if (cv < clip) {
                        cv = clip;
                        clipped += 1.0 / n_children;
                    }
                    refined += cv;
                }
                v = refined / n_children;
            }
            acc.add(v);
        }
        batch_sum[b] = acc.value();
        batch_clipped[b] = clipped;
        batch_count[b] = end - begin;
    });

    CompensatedSum<double> total;
    double clipped = 0.0;
    est.batch_means.resize(kJessenBatches);
    for (int b = 0; b < kJessenBatches; ++b) {
        total.add(batch_sum[b]);
        clipped += batch_clipped[b];
        est.batch_means[b] = batch_sum[b] / static_cast<double>(batch_count[b]);
    }
    est.value = total.value() / static_cast<double>(n);
    est.clipped_fraction = clipped / static_cast<double>(n);
    est.std_error = batch_stderr(est.batch_means);
    if (est.clipped_fraction >= 1.0)
        throw Error(Errc::AllClipped, "every sample fell below the clip floor");
    return est;
}

double combined_stderr(std::span<const JessenEstimate* const> estimates, std::span<const double> weights) {
    require(estimates.size() == weights.size() && !estimates.empty(), Errc::InvalidArgument,
            "estimates and weights must match");
    std::vector<double> combo(kJessenBatches, 0.0);
    for (std::size_t k = 0; k < estimates.size(); ++k) {
        require(estimates[k]->batch_means.size() == static_cast<std::size_t>(kJessenBatches),
                Errc::InvalidArgument, "estimate carries no batch means");
        for (int b = 0; b < kJessenBatches; ++b) combo[b] += weights[k] * estimates[k]->batch_means[b];
    }
    return batch_stderr(combo);
}

std::vector<ProfileRow> jessen_profile(const ExpSum& f, const Vec& y, std::span<const double> R_schedule,
                                       const QuadratureParams& params) {
    require(y.norm() > 0.0, Errc::InvalidArgument, "profile direction must be nonzero");
    require(!R_schedule.empty(), Errc::InvalidArgument, "empty R schedule");
    std::vector<ProfileRow> rows;
    double previous = 0.0;
    for (double R : R_schedule) {
        require(R > previous, Errc::InvalidArgument, "R schedule must be positive and increasing");
        previous = R;
        JessenEstimate e = jessen_estimate(f, Vec(R * y), params);
        rows.push_back({R, e.value / R, e.std_error / R});
    }
    return rows;
}

namespace {

bool kink_between(const ExpSum& f, const Vec& y, double h, double span) {
    const double tolerance = 4.0 * std::numbers::pi * static_cast<double>(f.size() + 1) / span;
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        const Vec e = Vec::Unit(y.size(), j);
        try {
            const double up = mean_motion(f, Vec(y + h * e), e, span).value;
            const double down = mean_motion(f, Vec(y - h * e), e, span).value;
            if (std::abs(up - down) > tolerance) return true;
        } catch (const Error& err) {
            if (err.code() != Errc::ZeroOnPath) throw;
            return true;
        }
    }
    return false;
}

}  // namespace

SecularVector secular_vector(const ExpSum& f, const Vec& y, double h, const QuadratureParams& params) {
    const Eigen::Index p = f.dimension();
    require(y.size() == p, Errc::DimensionMismatch, "y has the wrong dimension");
    if (h <= 0.0) h = y.norm() > 0.0 ? 0.05 * y.norm() : 0.05;

    SecularVector out;
    out.y = y;
    out.h = h;
    out.value.resize(p);
    out.std_error.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        Vec up = y, down = y;
        up[j] += h;
        down[j] -= h;
        const JessenEstimate ju = jessen_estimate(f, up, params);
        const JessenEstimate jd = jessen_estimate(f, down, params);
        const double diff = ju.value - jd.value;
        const JessenEstimate* pair[] = {&ju, &jd};
        const double w[] = {1.0, -1.0};
        const double sigma = combined_stderr(pair, w);
        if (std::abs(diff) < 3.0 * sigma && 3.0 * sigma / (2.0 * h) > kGradientResolution)
            throw Error(Errc::StepTooSmall, "difference along axis " + std::to_string(j) +
                                                " is below the noise level; increase h or samples");
        out.value[j] = -diff / (2.0 * h);
        out.std_error[j] = sigma / (2.0 * h);
    }
    out.kink_suspected = kink_between(f, y, h, params.S);
    return out;
}

MeanMotionResult mean_motion(const ExpSum& f, const Vec& y, const Vec& direction, double x_span,
                             double initial_step) {
    const Eigen::Index p = f.dimension();
    require(y.size() == p && direction.size() == p, Errc::DimensionMismatch,
            "y or direction has the wrong dimension");
    require(std::abs(direction.norm() - 1.0) < 1e-12, Errc::InvalidArgument, "direction must be a unit vector");
    require(x_span > 0.0, Errc::InvalidArgument, "x_span must be positive");

    const HorizontalSlice<double> slice(f, y);
    if (initial_step <= 0.0) {
        double rate = 0.0;
        for (const auto& t : f.terms()) rate = std::max(rate, std::abs(direction.dot(t.frequency)));
        initial_step = rate > 0.0 ? 0.1 / rate : x_span;
    }
    const double scale = slice.scale();
    const Vec start = -0.5 * x_span * direction;
    auto value = [&](double s) { return slice(start + s * direction); };
    auto scale_at = [&](double) { return scale; };
    double lipschitz = 0.0;
    for (const auto& t : f.terms())
        lipschitz += std::abs(direction.dot(t.frequency) * t.coefficient) * std::exp(detail::checked_exponent(y, t.frequency));
    auto bound = [&](double, double) { return lipschitz; };

    PhaseTrack track;
    try {
        track = track_phase(value, scale_at, x_span, initial_step, 1e-12, bound);
    } catch (const Error& e) {
        if (e.code() == Errc::ZeroOnPath)
            throw Error(Errc::ZeroOnPath, "f vanishes on the tracked line; perturb y");
        throw;
    }
    return {y, direction, track.total / x_span, x_span, track.n_steps};
}

ConvexityReport convexity_check(const ExpSum& f, const Vec& y1, const Vec& y2, const QuadratureParams& params) {
    ConvexityReport r;
    r.at_y1 = jessen_estimate(f, y1, params);
    r.at_y2 = jessen_estimate(f, y2, params);
    r.at_mid = jessen_estimate(f, Vec(0.5 * (y1 + y2)), params);
    r.slack = r.at_mid.value - 0.5 * (r.at_y1.value + r.at_y2.value);
    const JessenEstimate* e[] = {&r.at_mid, &r.at_y1, &r.at_y2};
    const double w[] = {1.0, -0.5, -0.5};
    r.tolerance = 3.0 * combined_stderr(e, w);
    r.passed = r.slack <= r.tolerance + 1e-12 * (1.0 + std::abs(r.at_mid.value));
    return r;
}

bool lemma2_bound(std::span<const std::pair<double, double>> samples, double tolerance) {
    require(samples.size() >= 3, Errc::InvalidArgument, "need at least three samples");
    std::vector<std::pair<double, double>> pts(samples.begin(), samples.end());
    std::sort(pts.begin(), pts.end());
    for (const auto& [t, g] : pts)
        if (!(g < 0.0)) throw Error(Errc::NotNegative, "sample at t = " + std::to_string(t) + " is not negative");
    const double alpha = pts.back().first;
    require(alpha > 0.0 && std::abs(pts.front().first + alpha) <= 1e-12 * alpha, Errc::InvalidArgument,
            "samples must span a symmetric interval [-alpha, alpha]");

    double integral = 0.0;
    double g0 = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto [t0, g0i] = pts[i];
        const auto [t1, g1i] = pts[i + 1];
        integral += 0.5 * (t1 - t0) * (g0i + g1i);
        if (t0 <= 0.0 && 0.0 <= t1 && std::isnan(g0))
            g0 = t1 == t0 ? g0i : g0i + (g1i - g0i) * (0.0 - t0) / (t1 - t0);
    }
    const double bound = integral / alpha;
    return g0 >= bound - tolerance * (1.0 + std::abs(bound));
}

}  // namespace tubeap
