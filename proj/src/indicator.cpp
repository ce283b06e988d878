#include "tubeap/indicator.hpp"

#include "tubeap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace tubeap {

namespace {

constexpr double kProbeBox = 100.0;
constexpr double kPlSlack = 1e-9;

std::vector<Vec> probe_points(Eigen::Index p, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-kProbeBox, kProbeBox);
    std::vector<Vec> xs(static_cast<std::size_t>(n), Vec(p));
    for (auto& x : xs)
        for (Eigen::Index j = 0; j < p; ++j) x[j] = unif(rng);
    return xs;
}

}  // namespace

double p_indicator_exact(const ExpSum& f, const Vec& y) {
    require(y.size() == f.dimension(), Errc::DimensionMismatch, "y has the wrong dimension");
    require(y.norm() > 0.0, Errc::InvalidArgument, "y must be nonzero");
    require(f.size() + f.limit_frequencies().size() > 0, Errc::EmptySpectrum, "empty spectrum");
    const Vec minus_y = -y;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : f.terms()) best = std::max(best, dot_sequential(minus_y, t.frequency));
    for (const auto& l : f.limit_frequencies()) best = std::max(best, dot_sequential(minus_y, l));
    return best;
}

IndicatorEstimate p_indicator_empirical(const ExpSum& f, const Vec& y, double r_max, int x_probes,
                                        std::uint64_t seed) {
    require(x_probes >= 16, Errc::InvalidArgument, "need at least 16 probes");
    require(r_max > 0.0, Errc::InvalidArgument, "r_max must be positive");
    IndicatorEstimate est;
    est.y = y;
    est.exact = p_indicator_exact(f, y);
    est.r_max = r_max;
    est.x_probes = x_probes;

    // Smallest separation of <-y, lambda> from the top value among the terms.
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& t : f.terms()) {
        const double d = est.exact - dot_sequential(Vec(-y), t.frequency);
        if (d > 0.0) gap = std::min(gap, d);
    }
    require(!std::isfinite(gap) || r_max * gap > 20.0, Errc::InvalidArgument,
            "r_max too small for the frequency gap along y");

    const Vec yr = r_max * y;
    const HorizontalSlice<double> slice(f, yr);
    const auto xs = probe_points(f.dimension(), x_probes, seed);
    std::vector<double> vals(xs.size());
    parallel_for(xs.size(), [&](std::size_t k) { vals[k] = std::log(std::abs(slice(xs[k]))) / r_max; });
    est.empirical = *std::max_element(vals.begin(), vals.end());
    est.gap_bound = (std::log(f.coefficient_l1()) + std::log(2.0)) / r_max;
    return est;
}

ExpSum normalize(const ExpSum& f, const Vec& y0, double sup_bound) {
    require(std::abs(y0.norm() - 1.0) < 1e-12, Errc::InvalidArgument, "y0 must be a unit vector");
    if (sup_bound <= 0.0) sup_bound = f.coefficient_l1();
    const double h = p_indicator_exact(f, y0);
    const Vec shift = h * y0;
    std::vector<Term<double>> terms;
    for (const auto& t : f.terms()) terms.push_back({Vec(t.frequency + shift), t.coefficient / sup_bound});
    std::vector<Vec> limits;
    for (const auto& l : f.limit_frequencies()) limits.push_back(l + shift);
    return ExpSum(f.dimension(), std::move(terms), std::move(limits));
}

std::vector<PlViolation> pl_bound_check(const ExpSum& F, const Vec& y, const std::vector<double>& t_list,
                                        int x_probes, std::uint64_t seed) {
    require(F.coefficient_l1() <= 1.0 + 1e-12, Errc::InvalidArgument,
            "F is not normalized: sum |b_n| exceeds 1");
    require(x_probes >= 1, Errc::InvalidArgument, "need at least one probe");
    const double h = p_indicator_exact(F, y);
    const auto xs = probe_points(F.dimension(), x_probes, seed);
    std::vector<std::vector<PlViolation>> per_t(t_list.size());
    parallel_for(t_list.size(), [&](std::size_t k) {
        const double t = t_list[k];
        const HorizontalSlice<double> slice(F, Vec(t * y));
        for (const auto& x : xs) {
            const double u = std::log(std::abs(slice(x)));
            const double bound = h * t + kPlSlack;
            if (u > bound) per_t[k].push_back({x, t, u, bound});
        }
    });
    std::vector<PlViolation> out;
    for (auto& v : per_t) out.insert(out.end(), v.begin(), v.end());
    return out;
}

}  // namespace tubeap
