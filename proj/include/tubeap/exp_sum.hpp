#ifndef TUBEAP_EXP_SUM_HPP
#define TUBEAP_EXP_SUM_HPP

// Finite exponential sums  f(z) = sum_n b_n exp(i <z, lambda_n>)  on tube domains z = x + i y.

#include "tubeap/cone.hpp"
#include "tubeap/error.hpp"
#include "tubeap/numeric.hpp"
#include "tubeap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace tubeap {

/// Exponents -<y, lambda> above this leave double range; evaluation refuses them.
inline constexpr double kOverflowExponent = 700.0;
/// find_almost_period never returns a shift shorter than this.
inline constexpr double kMinAlmostPeriod = 0.1;

template <typename Scalar>
struct Term {
    Vector<Scalar> frequency;
    std::complex<Scalar> coefficient;
};

template <typename Scalar>
class BasicExpSum {
public:
    using VectorType = Vector<Scalar>;
    using Complex = std::complex<Scalar>;

    BasicExpSum(Eigen::Index dimension, std::vector<Term<Scalar>> terms,
                std::vector<VectorType> limit_frequencies = {})
        : dimension_(dimension), terms_(std::move(terms)), limits_(std::move(limit_frequencies)) {
        require(dimension_ > 0, Errc::InvalidArgument, "dimension must be positive");
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            require(terms_[i].frequency.size() == dimension_, Errc::DimensionMismatch,
                    "term frequency has the wrong dimension");
            require(terms_[i].coefficient != Complex(0), Errc::InvalidArgument,
                    "zero coefficient in term " + std::to_string(i));
            for (std::size_t j = 0; j < i; ++j)
                require(!(terms_[i].frequency == terms_[j].frequency), Errc::InvalidArgument,
                        "terms " + std::to_string(j) + " and " + std::to_string(i) +
                            " share a frequency");
        }
        for (std::size_t i = 0; i < limits_.size(); ++i) {
            require(limits_[i].size() == dimension_, Errc::DimensionMismatch,
                    "limit frequency has the wrong dimension");
            for (const auto& t : terms_)
                require(!(t.frequency == limits_[i]), Errc::InvalidArgument,
                        "limit frequency coincides with a term frequency");
            for (std::size_t j = 0; j < i; ++j)
                require(!(limits_[i] == limits_[j]), Errc::InvalidArgument,
                        "duplicate limit frequency");
        }
    }

    Eigen::Index dimension() const { return dimension_; }
    const std::vector<Term<Scalar>>& terms() const { return terms_; }
    const std::vector<VectorType>& limit_frequencies() const { return limits_; }
    std::size_t size() const { return terms_.size(); }

    BasicPointSet<Scalar> spectrum() const {
        BasicPointSet<Scalar> sp;
        for (const auto& t : terms_) sp.points.push_back(t.frequency);
        sp.limit_points = limits_;
        return sp;
    }

    /// sum |b_n|, the sup of |f| on the real space is at most this.
    Scalar coefficient_l1() const {
        Scalar s(0);
        for (const auto& t : terms_) s += std::abs(t.coefficient);
        return s;
    }

    /// Coefficient of the zero frequency, or 0 when there is no constant term.
    Complex constant_term() const {
        for (const auto& t : terms_)
            if (t.frequency.isZero(0)) return t.coefficient;
        return Complex(0);
    }

private:
    Eigen::Index dimension_;
    std::vector<Term<Scalar>> terms_;
    std::vector<VectorType> limits_;
};

template <typename Scalar>
struct BasicTubePoint {
    Vector<Scalar> x;
    Vector<Scalar> y;
};

using ExpSum = BasicExpSum<double>;
using TubePoint = BasicTubePoint<double>;

/// Constructs a one-term-per-frequency sum from parallel lists; handy in tests and fixtures.
template <typename Scalar>
BasicExpSum<Scalar> make_exp_sum(const std::vector<Vector<Scalar>>& frequencies,
                                 const std::vector<std::complex<Scalar>>& coefficients,
                                 std::vector<Vector<Scalar>> limit_frequencies = {}) {
    require(frequencies.size() == coefficients.size() && !frequencies.empty(),
            Errc::InvalidArgument, "frequency and coefficient lists must match and be nonempty");
    std::vector<Term<Scalar>> terms;
    for (std::size_t i = 0; i < frequencies.size(); ++i) terms.push_back({frequencies[i], coefficients[i]});
    return BasicExpSum<Scalar>(frequencies.front().size(), std::move(terms), std::move(limit_frequencies));
}

namespace detail {

template <typename Scalar>
Scalar checked_exponent(const Vector<Scalar>& y, const Vector<Scalar>& lambda) {
    Scalar a = -dot_sequential(y, lambda);
    if (a > Scalar(kOverflowExponent))
        throw Error(Errc::OverflowGuard, "exponent " + std::to_string(static_cast<double>(a)) +
                                             " exceeds the safe tube bound");
    return a;
}

}  // namespace detail

/// f restricted to a horizontal slice {x + i y : x real} for fixed y. Terms are kept in order
/// of decreasing modulus so every evaluation sums the dominant terms first.
template <typename Scalar>
class HorizontalSlice {
public:
    using Complex = std::complex<Scalar>;

    HorizontalSlice(const BasicExpSum<Scalar>& f, const Vector<Scalar>& y) {
        require(y.size() == f.dimension(), Errc::DimensionMismatch, "y has the wrong dimension");
        std::vector<std::pair<Scalar, std::size_t>> order;
        std::vector<Complex> scaled(f.size());
        for (std::size_t n = 0; n < f.size(); ++n) {
            const auto& t = f.terms()[n];
            Scalar a = detail::checked_exponent(y, t.frequency);
            scaled[n] = t.coefficient * std::exp(a);
            order.emplace_back(std::abs(scaled[n]), n);
        }
        std::stable_sort(order.begin(), order.end(),
                         [](const auto& l, const auto& r) { return l.first > r.first; });
        scale_ = Scalar(0);
        for (const auto& [mag, n] : order) {
            frequencies_.push_back(f.terms()[n].frequency);
            coefficients_.push_back(scaled[n]);
            scale_ += mag;
        }
    }

    template <typename Derived>
    Complex operator()(const Eigen::MatrixBase<Derived>& x) const {
        Complex acc(0);
        for (std::size_t n = 0; n < frequencies_.size(); ++n) {
            Scalar phase = dot_sequential(x, frequencies_[n]);
            acc += coefficients_[n] * Complex(std::cos(phase), std::sin(phase));
        }
        return acc;
    }

    /// sum_n |b_n| e^{-<y, lambda_n>}, the natural magnitude scale on this slice.
    Scalar scale() const { return scale_; }

private:
    std::vector<Vector<Scalar>> frequencies_;
    std::vector<Complex> coefficients_;
    Scalar scale_;
};

template <typename Scalar>
std::complex<Scalar> evaluate(const BasicExpSum<Scalar>& f, const BasicTubePoint<Scalar>& z) {
    require(z.x.size() == f.dimension() && z.y.size() == f.dimension(), Errc::DimensionMismatch,
            "tube point has the wrong dimension");
    return HorizontalSlice<Scalar>(f, z.y)(z.x);
}

/// sum_n |b_n| e^{-<y, lambda_n>} at z.
template <typename Scalar>
Scalar term_scale(const BasicExpSum<Scalar>& f, const Vector<Scalar>& y) {
    return HorizontalSlice<Scalar>(f, y).scale();
}

/// One-variable convenience: phi(w) for a dimension-1 sum.
template <typename Scalar>
std::complex<Scalar> evaluate(const BasicExpSum<Scalar>& phi, std::complex<Scalar> w) {
    require(phi.dimension() == 1, Errc::DimensionMismatch, "complex argument needs a 1-D sum");
    Vector<Scalar> x(1), y(1);
    x << w.real();
    y << w.imag();
    return HorizontalSlice<Scalar>(phi, y)(x);
}

/// phi'(w) = sum_n i mu_n c_n e^{i mu_n w} for a dimension-1 sum.
template <typename Scalar>
std::complex<Scalar> derivative(const BasicExpSum<Scalar>& phi, std::complex<Scalar> w) {
    require(phi.dimension() == 1, Errc::DimensionMismatch, "derivative needs a 1-D sum");
    using Complex = std::complex<Scalar>;
    Complex acc(0);
    for (const auto& t : phi.terms()) {
        const Scalar mu = t.frequency[0];
        const Scalar a = -mu * w.imag();
        if (a > Scalar(kOverflowExponent)) throw Error(Errc::OverflowGuard, "derivative overflow");
        acc += Complex(0, mu) * t.coefficient * std::polar(std::exp(a), mu * w.real());
    }
    return acc;
}

template <typename Scalar>
Scalar term_scale(const BasicExpSum<Scalar>& phi, std::complex<Scalar> w) {
    Vector<Scalar> y(1);
    y << w.imag();
    return term_scale(phi, y);
}

/// log|f(z)|; returns -infinity when |f(z)| is indistinguishable from rounding noise.
template <typename Scalar>
Scalar log_abs(const BasicExpSum<Scalar>& f, const BasicTubePoint<Scalar>& z) {
    require(z.x.size() == f.dimension() && z.y.size() == f.dimension(), Errc::DimensionMismatch,
            "tube point has the wrong dimension");
    HorizontalSlice<Scalar> slice(f, z.y);
    const Scalar m = std::abs(slice(z.x));
    if (m <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * slice.scale())
        return -std::numeric_limits<Scalar>::infinity();
    return std::log(m);
}

// ---------------------------------------------------------------------------------------------
// Algebra

namespace detail {

template <typename Scalar>
void accumulate_term(std::vector<Term<Scalar>>& terms, const Vector<Scalar>& freq,
                     std::complex<Scalar> coeff) {
    for (auto& t : terms) {
        if (t.frequency == freq) {
            t.coefficient += coeff;
            return;
        }
    }
    terms.push_back({freq, coeff});
}

template <typename Scalar>
BasicExpSum<Scalar> assemble(Eigen::Index dim, std::vector<Term<Scalar>> raw,
                             std::vector<Vector<Scalar>> limits) {
    std::vector<Term<Scalar>> terms;
    for (auto& t : raw)
        if (t.coefficient != std::complex<Scalar>(0)) terms.push_back(std::move(t));
    std::vector<Vector<Scalar>> kept;
    for (auto& l : limits) {
        bool clash = false;
        for (const auto& t : terms) clash = clash || t.frequency == l;
        for (const auto& k : kept) clash = clash || k == l;
        if (!clash) kept.push_back(std::move(l));
    }
    return BasicExpSum<Scalar>(dim, std::move(terms), std::move(kept));
}

}  // namespace detail

template <typename Scalar>
BasicExpSum<Scalar> operator+(const BasicExpSum<Scalar>& f, const BasicExpSum<Scalar>& g) {
    require(f.dimension() == g.dimension(), Errc::DimensionMismatch, "sum of different dimensions");
    std::vector<Term<Scalar>> terms = f.terms();
    for (const auto& t : g.terms()) detail::accumulate_term(terms, t.frequency, t.coefficient);
    auto limits = f.limit_frequencies();
    limits.insert(limits.end(), g.limit_frequencies().begin(), g.limit_frequencies().end());
    return detail::assemble(f.dimension(), std::move(terms), std::move(limits));
}

template <typename Scalar>
BasicExpSum<Scalar> operator*(const BasicExpSum<Scalar>& f, const BasicExpSum<Scalar>& g) {
    require(f.dimension() == g.dimension(), Errc::DimensionMismatch,
            "product of different dimensions");
    std::vector<Term<Scalar>> terms;
    for (const auto& a : f.terms())
        for (const auto& b : g.terms())
            detail::accumulate_term(terms, Vector<Scalar>(a.frequency + b.frequency),
                                    a.coefficient * b.coefficient);
    // Accumulation points of the product spectrum.
    std::vector<Vector<Scalar>> limits;
    auto f_all = f.spectrum().all();
    auto g_all = g.spectrum().all();
    for (const auto& l : f.limit_frequencies())
        for (const auto& m : g_all) limits.push_back(l + m);
    for (const auto& l : g.limit_frequencies())
        for (const auto& m : f_all) limits.push_back(l + m);
    return detail::assemble(f.dimension(), std::move(terms), std::move(limits));
}

template <typename Scalar>
BasicExpSum<Scalar> operator*(std::complex<Scalar> c, const BasicExpSum<Scalar>& f) {
    require(c != std::complex<Scalar>(0), Errc::InvalidArgument, "scaling by zero");
    std::vector<Term<Scalar>> terms = f.terms();
    for (auto& t : terms) t.coefficient *= c;
    return BasicExpSum<Scalar>(f.dimension(), std::move(terms), f.limit_frequencies());
}

/// f - A. The constant term disappears if it cancels exactly.
template <typename Scalar>
BasicExpSum<Scalar> minus_constant(const BasicExpSum<Scalar>& f, std::complex<Scalar> value) {
    std::vector<Term<Scalar>> terms = f.terms();
    if (value != std::complex<Scalar>(0))
        detail::accumulate_term(terms, Vector<Scalar>(Vector<Scalar>::Zero(f.dimension())), -value);
    return detail::assemble(f.dimension(), std::move(terms), f.limit_frequencies());
}

// ---------------------------------------------------------------------------------------------
// Fourier-Bohr coefficients

template <typename Scalar>
struct BasicCoeffEstimate {
    std::complex<Scalar> value;
    Vector<Scalar> lambda;
    Vector<Scalar> y;
    Scalar S;
    long long n_samples;
    Scalar std_error;  // rigorous bound on the cross-term leakage plus rounding
};

using CoeffEstimate = BasicCoeffEstimate<double>;

/// Midpoint-rule mean of f(x + i y) e^{-i<x, lambda>} over [-S, S]^p with grid_per_dim nodes per axis.
template <typename Scalar>
BasicCoeffEstimate<Scalar> fourier_coefficient(const BasicExpSum<Scalar>& f, const Vector<Scalar>& lambda,
                                               const Vector<Scalar>& y, Scalar S, long long grid_per_dim) {
    using Complex = std::complex<Scalar>;
    const Eigen::Index p = f.dimension();
    require(lambda.size() == p && y.size() == p, Errc::DimensionMismatch,
            "lambda or y has the wrong dimension");
    require(S > Scalar(0), Errc::InvalidArgument, "averaging half-side S must be positive");
    require(grid_per_dim >= 2, Errc::BadGrid, "need at least two nodes per axis");
    long long total = 1;
    for (Eigen::Index j = 0; j < p; ++j) {
        require(total <= (1LL << 40) / grid_per_dim, Errc::BadGrid, "grid too large");
        total *= grid_per_dim;
    }

    HorizontalSlice<Scalar> slice(f, y);
    const Scalar h = Scalar(2) * S / static_cast<Scalar>(grid_per_dim);
    constexpr long long kChunk = 16384;
    const long long n_chunks = (total + kChunk - 1) / kChunk;
    std::vector<Complex> partial(static_cast<std::size_t>(n_chunks));

    parallel_for(static_cast<std::size_t>(n_chunks), [&](std::size_t c) {
        CompensatedSum<Complex> acc;
        Vector<Scalar> x(p);
        const long long begin = static_cast<long long>(c) * kChunk;
        const long long end = std::min(total, begin + kChunk);
        for (long long k = begin; k < end; ++k) {
            long long rem = k;
            for (Eigen::Index j = 0; j < p; ++j) {
                x[j] = -S + (static_cast<Scalar>(rem % grid_per_dim) + Scalar(0.5)) * h;
                rem /= grid_per_dim;
            }
            const Scalar phase = -dot_sequential(x, lambda);
            acc.add(slice(x) * Complex(std::cos(phase), std::sin(phase)));
        }
        partial[c] = acc.value();
    });
    CompensatedSum<Complex> sum;
    for (const auto& v : partial) sum.add(v);

    // Leakage of each other term through the discrete Dirichlet kernel of the midpoint grid.
    Scalar bound(0);
    for (const auto& t : f.terms()) {
        if (t.frequency == lambda) continue;
        const Scalar mag = std::abs(t.coefficient) * std::exp(detail::checked_exponent(y, t.frequency));
        Scalar kernel(1);
        for (Eigen::Index j = 0; j < p; ++j) {
            const Scalar mu = t.frequency[j] - lambda[j];
            if (mu == Scalar(0)) continue;
            const Scalar s = std::abs(std::sin(mu * h / Scalar(2)));
            if (s > Scalar(0))
                kernel = std::min(kernel, Scalar(1) / (static_cast<Scalar>(grid_per_dim) * s));
        }
        bound += mag * kernel;
    }
    const Scalar rounding = Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                            (Scalar(8) + std::log2(static_cast<Scalar>(total))) * slice.scale();
    return {sum.value() / static_cast<Scalar>(total), lambda, y, S, total, bound + rounding};
}

// ---------------------------------------------------------------------------------------------
// Restriction to complex lines

/// phi(w) = f(base + w * direction), a dimension-1 sum with frequencies <direction, lambda_n>.
template <typename Scalar>
BasicExpSum<Scalar> restrict_to_line(const BasicExpSum<Scalar>& f, const BasicTubePoint<Scalar>& base,
                                     const Vector<Scalar>& direction) {
    require(base.x.size() == f.dimension() && base.y.size() == f.dimension() &&
                direction.size() == f.dimension(),
            Errc::DimensionMismatch, "line data has the wrong dimension");
    require(direction.norm() > Scalar(0), Errc::InvalidArgument, "direction must be nonzero");

    std::vector<Scalar> mu(f.size());
    Scalar mu_max(1);
    for (std::size_t n = 0; n < f.size(); ++n) {
        mu[n] = dot_sequential(direction, f.terms()[n].frequency);
        mu_max = std::max(mu_max, std::abs(mu[n]));
    }
    const Scalar collide = Scalar(1e-12) * mu_max;
    for (std::size_t k = 0; k < f.size(); ++k)
        for (std::size_t m = k + 1; m < f.size(); ++m)
            if (std::abs(mu[k] - mu[m]) <= collide)
                throw CollisionError(k, m, "terms " + std::to_string(k) + " and " + std::to_string(m) +
                                               " collide along the line direction");

    std::vector<Term<Scalar>> terms;
    for (std::size_t n = 0; n < f.size(); ++n) {
        const auto& t = f.terms()[n];
        const Scalar a = detail::checked_exponent(base.y, t.frequency);
        const Scalar phase = dot_sequential(base.x, t.frequency);
        Vector<Scalar> freq(1);
        freq << mu[n];
        terms.push_back({freq, t.coefficient * std::polar(std::exp(a), phase)});
    }
    std::vector<Vector<Scalar>> limits;
    for (const auto& l : f.limit_frequencies()) {
        Vector<Scalar> v(1);
        v << dot_sequential(direction, l);
        bool clash = false;
        for (const auto& t : terms) clash = clash || std::abs(t.frequency[0] - v[0]) <= collide;
        for (const auto& k : limits) clash = clash || k == v;
        if (!clash) limits.push_back(v);
    }
    return BasicExpSum<Scalar>(1, std::move(terms), std::move(limits));
}

/// phi(w) = f(x0 + w y0): the one-variable reduction along a ray of the tube base.
template <typename Scalar>
BasicExpSum<Scalar> restrict_to_ray(const BasicExpSum<Scalar>& f, const Vector<Scalar>& y0,
                                    const Vector<Scalar>& x0) {
    require(y0.size() == f.dimension() && x0.size() == f.dimension(), Errc::DimensionMismatch,
            "ray data has the wrong dimension");
    require(y0.norm() > Scalar(0), Errc::InvalidArgument, "ray direction y0 must be nonzero");
    return restrict_to_line(f, BasicTubePoint<Scalar>{x0, Vector<Scalar>::Zero(f.dimension())}, y0);
}

// ---------------------------------------------------------------------------------------------
// Almost periods

namespace detail {

template <typename Scalar>
std::vector<Scalar> almost_period_weights(const BasicExpSum<Scalar>& f,
                                          const std::vector<Vector<Scalar>>& y_compact) {
    std::vector<Vector<Scalar>> ys = y_compact;
    if (ys.empty()) ys.push_back(Vector<Scalar>::Zero(f.dimension()));
    std::vector<Scalar> w;
    for (const auto& t : f.terms()) {
        Scalar a = -std::numeric_limits<Scalar>::infinity();
        for (const auto& y : ys) {
            require(y.size() == f.dimension(), Errc::DimensionMismatch, "compact set point dimension");
            a = std::max(a, checked_exponent(y, t.frequency));
        }
        w.push_back(std::abs(t.coefficient) * std::exp(a));
    }
    return w;
}

template <typename Scalar>
Scalar certificate(const BasicExpSum<Scalar>& f, const std::vector<Scalar>& w, const Vector<Scalar>& tau) {
    Scalar c(0);
    for (std::size_t n = 0; n < f.size(); ++n) {
        const Scalar phase = dot_sequential(tau, f.terms()[n].frequency);
        c += w[n] * Scalar(2) * std::abs(std::sin(phase / Scalar(2)));
    }
    return c;
}

}  // namespace detail

/// sum_n |b_n| e^{-min_y <y, lambda_n>} |e^{i<tau, lambda_n>} - 1|, an upper bound for
/// sup |f(z + tau) - f(z)| over the tube whose base is the convex hull of y_compact.
template <typename Scalar>
Scalar almost_period_certificate(const BasicExpSum<Scalar>& f, const Vector<Scalar>& tau,
                                 const std::vector<Vector<Scalar>>& y_compact) {
    require(tau.size() == f.dimension(), Errc::DimensionMismatch, "tau has the wrong dimension");
    return detail::certificate(f, detail::almost_period_weights(f, y_compact), tau);
}

/// Depth-first branch and bound over [0, search_box]^p, cells visited in lexicographic order.
/// Returns the first shift whose certificate is below eps; throws NotFound when the box is exhausted.
template <typename Scalar>
Vector<Scalar> find_almost_period(const BasicExpSum<Scalar>& f, Scalar eps,
                                  const std::vector<Vector<Scalar>>& y_compact, Scalar search_box,
                                  int grid, long long max_evaluations = 4'000'000) {
    require(eps > Scalar(0), Errc::InvalidArgument, "eps must be positive");
    require(search_box > Scalar(kMinAlmostPeriod), Errc::InvalidArgument, "search box too small");
    require(grid >= 1, Errc::InvalidArgument, "grid must be positive");
    const Eigen::Index p = f.dimension();
    const auto w = detail::almost_period_weights(f, y_compact);
    Scalar lipschitz(0);
    for (std::size_t n = 0; n < f.size(); ++n) lipschitz += w[n] * f.terms()[n].frequency.norm();
    const Scalar sqrt_p = std::sqrt(static_cast<Scalar>(p));
    const Scalar min_half = Scalar(1e-12) * search_box;

    struct Cell {
        Vector<Scalar> centre;
        Scalar half;
    };
    std::vector<Cell> stack;
    {
        long long count = 1;
        for (Eigen::Index j = 0; j < p; ++j) count *= grid;
        const Scalar half = search_box / (Scalar(2) * grid);
        for (long long k = count; k-- > 0;) {
            Vector<Scalar> c(p);
            long long rem = k;
            for (Eigen::Index j = p; j-- > 0;) {
                c[j] = (Scalar(2) * static_cast<Scalar>(rem % grid) + Scalar(1)) * half;
                rem /= grid;
            }
            stack.push_back({c, half});
        }
    }

    long long evaluations = 0;
    const int n_children = 1 << p;
    while (!stack.empty()) {
        Cell cell = std::move(stack.back());
        stack.pop_back();
        const Scalar radius = cell.half * sqrt_p;
        const Scalar dist = cell.centre.norm();
        if (dist + radius <= Scalar(kMinAlmostPeriod)) continue;
        if (++evaluations > max_evaluations) break;
        const Scalar value = detail::certificate(f, w, cell.centre);
        if (value < eps && dist >= Scalar(kMinAlmostPeriod)) return cell.centre;
        if (value - lipschitz * radius >= eps || cell.half < min_half) continue;
        const Scalar child = cell.half / Scalar(2);
        for (int k = n_children; k-- > 0;) {
            Vector<Scalar> c = cell.centre;
            for (Eigen::Index j = 0; j < p; ++j) {
                const int bit = (k >> (p - 1 - j)) & 1;
                c[j] += bit ? child : -child;
            }
            stack.push_back({c, child});
        }
    }
    throw Error(Errc::NotFound, "no certified almost period in the search box");
}

}  // namespace tubeap

#endif  // TUBEAP_EXP_SUM_HPP
