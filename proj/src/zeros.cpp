#include "tubeap/zeros.hpp"

#include "tubeap/jessen.hpp"
#include "tubeap/parallel.hpp"
#include "tubeap/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace tubeap {

namespace {

using Complex = std::complex<double>;

constexpr double kContourFloor = 1e-9;
constexpr double kPerturbation = 1e-6;
constexpr double kWindingTolerance = 1e-6;
constexpr double kResidualFactor = 1e-10;
constexpr double kPolishDiameter = 1e-2;
constexpr double kMultipleRootDiameter = 1e-6;
constexpr int kNewtonIterations = 50;

/// A one-variable sum flattened into arrays.
struct LineSum {
    std::vector<double> mu;
    std::vector<Complex> b;
    double mu_max = 0.0;

    explicit LineSum(const ExpSum& phi) {
        require(phi.dimension() == 1, Errc::UnsupportedDimension, "expected a sum in one variable");
        for (const auto& t : phi.terms()) {
            mu.push_back(t.frequency[0]);
            b.push_back(t.coefficient);
            mu_max = std::max(mu_max, std::abs(t.frequency[0]));
        }
    }

    double exponent(std::size_t n, double v) const {
        const double a = -mu[n] * v;
        if (a > kOverflowExponent) throw Error(Errc::OverflowGuard, "term magnitude leaves double range");
        return a;
    }
    Complex value(Complex w) const {
        Complex acc(0.0);
        for (std::size_t n = 0; n < mu.size(); ++n)
            acc += b[n] * std::polar(std::exp(exponent(n, w.imag())), mu[n] * w.real());
        return acc;
    }
    Complex derivative(Complex w) const {
        Complex acc(0.0);
        for (std::size_t n = 0; n < mu.size(); ++n)
            acc += Complex(0.0, mu[n]) * b[n] * std::polar(std::exp(exponent(n, w.imag())), mu[n] * w.real());
        return acc;
    }
    /// sup |phi'| over the segment from w0 to w1.
    double derivative_bound(Complex w0, Complex w1) const {
        double s = 0.0;
        for (std::size_t n = 0; n < mu.size(); ++n)
            s += std::abs(mu[n] * b[n]) * std::exp(std::max(exponent(n, w0.imag()), exponent(n, w1.imag())));
        return s;
    }
    double scale(double v) const {
        double s = 0.0;
        for (std::size_t n = 0; n < mu.size(); ++n) s += std::abs(b[n]) * std::exp(exponent(n, v));
        return s;
    }
};

struct Winding {
    bool ok = false;
    int count = 0;
    double margin = 0.0;
};

/// Winding number around rect, or ok = false when the contour passes too close to a zero.
Winding winding(const LineSum& g, const Rect& r) {
    Winding out;
    if (g.mu.size() <= 1) {
        out.ok = true;
        out.margin = 1.0;
        return out;
    }
    const Complex corners[4] = {{r.x_lo, r.y_lo}, {r.x_hi, r.y_lo}, {r.x_hi, r.y_hi}, {r.x_lo, r.y_hi}};
    double total = 0.0;
    out.margin = std::numeric_limits<double>::infinity();
    for (int e = 0; e < 4; ++e) {
        const Complex a = corners[e];
        const Complex d = corners[(e + 1) % 4] - a;
        const double len = std::abs(d);
        const Complex u = d / len;
        const double step = std::min(len / 16.0, 0.1 / g.mu_max);
        try {
            const PhaseTrack t = track_phase([&](double s) { return g.value(a + s * u); },
                                             [&](double s) { return g.scale((a + s * u).imag()); }, len, step,
                                             kContourFloor, [&](double s, double h) {
                                                 return g.derivative_bound(a + s * u, a + (s + h) * u);
                                             });
            total += t.total;
            out.margin = std::min(out.margin, t.min_ratio);
        } catch (const Error& err) {
            if (err.code() == Errc::ZeroOnPath) return out;
            throw;
        }
    }
    const double k = total / kTwoPi;
    if (std::abs(k - std::round(k)) > kWindingTolerance)
        throw Error(Errc::TrackingFailed, "winding number " + std::to_string(k) + " is not an integer");
    out.ok = true;
    out.count = static_cast<int>(std::lround(k));
    return out;
}

void check_rect(const Rect& r) {
    require(r.x_lo < r.x_hi && r.y_lo < r.y_hi, Errc::InvalidArgument, "rectangle must have x_lo < x_hi, y_lo < y_hi");
}

Rect grow(const Rect& r, double by) { return {r.x_lo - by, r.x_hi + by, r.y_lo - by, r.y_hi + by}; }

bool inside(const Rect& r, Complex w) {
    return w.real() >= r.x_lo && w.real() <= r.x_hi && w.imag() >= r.y_lo && w.imag() <= r.y_hi;
}

/// Damped Newton from start; returns the last iterate.
Complex polish(const LineSum& g, Complex start, double tol_factor) {
    Complex w = start;
    Complex v = g.value(w);
    for (int it = 0; it < kNewtonIterations; ++it) {
        if (std::abs(v) < 1e-3 * tol_factor * g.scale(w.imag())) break;
        const Complex d = g.derivative(w);
        if (d == Complex(0.0)) break;
        Complex step = v / d;
        Complex next = w - step;
        Complex vn = g.value(next);
        int halvings = 0;
        while (std::abs(vn) > std::abs(v) && halvings < 30) {
            step *= 0.5;
            next = w - step;
            vn = g.value(next);
            ++halvings;
        }
        if (next == w) break;
        w = next;
        v = vn;
    }
    return w;
}

TubePoint on_line(const TubePoint& base, const Vec& direction, Complex w) {
    return {Vec(base.x + w.real() * direction), Vec(base.y + w.imag() * direction)};
}

}  // namespace

ZeroCountResult count_zeros_rect(const ExpSum& phi, const Rect& rect) {
    check_rect(rect);
    require(phi.size() >= 1, Errc::EmptySpectrum, "zero counting needs at least one term");
    const LineSum g(phi);
    ZeroCountResult out;
    out.rect = rect;
    Winding w = winding(g, rect);
    if (!w.ok || w.margin < kContourFloor) {
        out.rect = grow(rect, kPerturbation * rect.diameter());
        out.perturbed = true;
        w = winding(g, out.rect);
        if (!w.ok || w.margin < kContourFloor)
            throw Error(Errc::BoundaryZeroPersistent, "zero on the contour survives the perturbation");
    }
    out.count = w.count;
    out.boundary_margin = w.margin;
    return out;
}

ZeroDensity zero_density_strip(const ExpSum& phi, double y1, double y2, double S) {
    require(y1 < y2, Errc::InvalidArgument, "need y1 < y2");
    require(S > 0.0, Errc::InvalidArgument, "S must be positive");
    ZeroDensity out;
    out.y1 = y1;
    out.y2 = y2;
    out.S = S;
    const ZeroCountResult c = count_zeros_rect(phi, {-S, S, y1, y2});
    out.count = c.count;
    out.density = c.count / (2.0 * S);

    Vec dir(1);
    dir << 1.0;
    Vec ya(1), yb(1);
    ya << y1;
    yb << y2;
    out.mean_motion_y1 = mean_motion(phi, ya, dir, 2.0 * S).value;
    out.mean_motion_y2 = mean_motion(phi, yb, dir, 2.0 * S).value;
    out.jessen_density = (out.mean_motion_y1 - out.mean_motion_y2) / kTwoPi;
    // Zeros cut by the vertical edges and the bounded oscillation of arg f about its mean motion.
    out.error = (2.0 + 2.0 * std::abs(out.jessen_density) + static_cast<double>(phi.size())) / (2.0 * S);
    return out;
}

RootSearch solve_value_on_line(const ExpSum& f, Complex A, const TubePoint& base, const Vec& direction,
                               const Rect& window, int max_roots, long long max_contours) {
    check_rect(window);
    require(max_roots >= 1, Errc::InvalidArgument, "max_roots must be positive");
    RootSearch out;
    out.base = base;
    out.direction = direction;

    const ExpSum phi = minus_constant(restrict_to_line(f, base, direction), A);
    require(phi.size() >= 1, Errc::InvalidArgument, "f - A vanishes identically on the line");
    if (phi.size() == 1) return out;
    const LineSum g(phi);

    struct Cell {
        Rect r;
        int count;
    };
    auto counted = [&](const Rect& r) {
        if (++out.contour_count > max_contours)
            throw Error(Errc::BudgetExhausted, "contour budget exhausted during root isolation");
        return winding(g, r);
    };

    Winding top = counted(window);
    if (!top.ok) throw Error(Errc::BoundaryZeroPersistent, "f - A vanishes on the window boundary");
    std::vector<Cell> stack;
    if (top.count > 0) stack.push_back({window, top.count});

    static constexpr double kSplits[] = {0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65, 0.3, 0.7};
    while (!stack.empty() && static_cast<int>(out.roots.size()) < max_roots) {
        const Cell cell = stack.back();
        stack.pop_back();
        const double diam = cell.r.diameter();

        if (diam < kPolishDiameter) {
            const Complex centre(0.5 * (cell.r.x_lo + cell.r.x_hi), 0.5 * (cell.r.y_lo + cell.r.y_hi));
            const Complex w = polish(g, centre, kResidualFactor);
            const TubePoint z = on_line(base, direction, w);
            const double scale = term_scale(f, z.y) + std::abs(A);
            const double residual = std::abs(evaluate(f, z) - A);
            bool accept = inside(cell.r, w) && residual < kResidualFactor * scale;
            if (accept && cell.count > 1 && diam >= kMultipleRootDiameter) {
                // A multiple root: a box around the polished point holds exactly the cell's zeros.
                const double half = diam;
                const Rect box{w.real() - half, w.real() + half, w.imag() - half, w.imag() + half};
                const Winding k = counted(box);
                accept = k.ok && k.count == cell.count;
            }
            if (accept) {
                bool duplicate = false;
                for (const auto& r : out.roots) duplicate = duplicate || std::abs(r.w - w) < 1e-8;
                if (!duplicate) out.roots.push_back({w, z, residual, scale, cell.count});
                continue;
            }
            if (diam < kMultipleRootDiameter)
                throw Error(Errc::TrackingFailed, "root polishing failed in an isolated cell");
        }

        const bool split_x = cell.r.width() >= cell.r.height();
        bool done = false;
        for (double frac : kSplits) {
            Rect lo = cell.r, hi = cell.r;
            if (split_x) {
                const double m = cell.r.x_lo + frac * cell.r.width();
                lo.x_hi = m;
                hi.x_lo = m;
            } else {
                const double m = cell.r.y_lo + frac * cell.r.height();
                lo.y_hi = m;
                hi.y_lo = m;
            }
            const Winding a = counted(lo);
            if (!a.ok) continue;
            const Winding b = counted(hi);
            if (!b.ok || a.count + b.count != cell.count) continue;
            // Push the upper half first so the lower-left part is explored first.
            if (b.count > 0) stack.push_back({hi, b.count});
            if (a.count > 0) stack.push_back({lo, a.count});
            done = true;
            break;
        }
        if (!done) throw Error(Errc::TrackingFailed, "no consistent split of a cell with nonzero winding");
    }
    return out;
}

RootSearch solve_value(const ExpSum& f, Complex A, const Vec& x0, const Vec& y0, const Rect& window, int max_roots) {
    require(y0.size() == f.dimension() && x0.size() == f.dimension(), Errc::DimensionMismatch,
            "ray data has the wrong dimension");
    require(y0.norm() > 0.0, Errc::InvalidArgument, "y0 must be nonzero");
    const TubePoint base{x0, Vec::Zero(f.dimension())};
    Vec ray = y0;
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int attempt = 0;; ++attempt) {
        try {
            RootSearch r = solve_value_on_line(f, A, base, ray, window, max_roots);
            r.retries = attempt;
            return r;
        } catch (const CollisionError&) {
            if (attempt == 3) throw;
            Vec kick(f.dimension());
            for (Eigen::Index j = 0; j < kick.size(); ++j) kick[j] = normal(rng);
            ray = y0 + 1e-3 * y0.norm() * kick.normalized();
        }
    }
}

namespace {

/// Moves y along the difference of the two largest term frequencies until their magnitudes agree.
bool balance_top_two(const ExpSum& g, Vec& y, std::size_t& ia, std::size_t& ib) {
    const std::size_t n = g.size();
    std::vector<double> L(n);
    for (int it = 0; it < 64; ++it) {
        for (std::size_t k = 0; k < n; ++k)
            L[k] = std::log(std::abs(g.terms()[k].coefficient)) - dot_sequential(y, g.terms()[k].frequency);
        ia = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (L[k] > L[ia]) ia = k;
        ib = ia == 0 ? 1 : 0;
        for (std::size_t k = 0; k < n; ++k)
            if (k != ia && L[k] > L[ib]) ib = k;
        const double gap = L[ia] - L[ib];
        if (gap < 1e-9 * (1.0 + std::abs(L[ia]))) return true;
        const Vec delta = g.terms()[ia].frequency - g.terms()[ib].frequency;
        y += (gap / delta.squaredNorm()) * delta;
        if (!y.allFinite() || y.norm() > 1e6) return false;
    }
    return false;
}

struct Attempt {
    bool found = false;
    Witness witness;
};

Attempt tail_attempt(const ExpSum& f, const ExpSum& g, Complex A, const Cone& gamma, const Cone& dual, double q,
                     std::uint64_t seed, int index) {
    Attempt out;
    const Eigen::Index p = f.dimension();
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    Vec y = Vec::Zero(p);
    for (const auto& gen : dual.generators()) y += expo(rng) * gen.normalized();
    y *= (1.0 + q * (1.2 + 2.0 * unif(rng))) / y.norm();

    std::size_t ia = 0, ib = 0;
    if (!balance_top_two(g, y, ia, ib)) return out;
    if (!in_conjugate_interior(gamma, y, 1e-9) || y.norm() <= q) return out;

    const Vec delta = g.terms()[ia].frequency - g.terms()[ib].frequency;
    Vec kick(p);
    for (Eigen::Index j = 0; j < p; ++j) kick[j] = normal(rng);
    const Vec direction = delta / delta.squaredNorm() + 1e-3 / delta.norm() * kick.normalized();
    const double gap = std::abs(direction.dot(delta));

    // Keep the window's imaginary extent inside the cone interior and beyond radius q.
    double room = y.norm() - q;
    const Matrix<double>& unit = gamma.unit_generators();
    for (Eigen::Index j = 0; j < unit.cols(); ++j) room = std::min(room, y.dot(unit.col(j)));
    const double delta_w = std::min(1.0, 0.5 * room / direction.norm());
    if (!(delta_w > 0.0)) return out;

    Vec x(p);
    for (Eigen::Index j = 0; j < p; ++j) x[j] = kTwoPi * unif(rng);
    const TubePoint base{x, y};
    const Rect window{0.0, 1.25 * kTwoPi / gap, -delta_w, delta_w};
    try {
        const RootSearch r = solve_value_on_line(f, A, base, direction, window, 1, 4000);
        for (const auto& root : r.roots) {
            if (!in_conjugate_interior(gamma, root.z.y, 1e-9) || root.z.y.norm() <= q) continue;
            out.found = true;
            out.witness = {root.z, A, root.residual, root.scale, direction, root.w, index};
            return out;
        }
    } catch (const Error& e) {
        // A failed attempt is not evidence of anything; move on to the next one.
        if (e.code() == Errc::OverflowGuard || e.code() == Errc::InvalidArgument) throw;
    }
    return out;
}

}  // namespace

std::optional<Witness> tail_value_search(const ExpSum& f, Complex A, const Cone& gamma, double q, int attempt_budget,
                                         std::uint64_t seed) {
    require(gamma.dimension() == f.dimension(), Errc::DimensionMismatch, "cone and sum dimensions differ");
    require(q >= 0.0, Errc::InvalidArgument, "q must be nonnegative");
    require(attempt_budget >= 1, Errc::InvalidArgument, "attempt budget must be positive");
    const ExpSum g = minus_constant(f, A);
    if (g.size() < 2) return std::nullopt;
    const Cone dual = conjugate_cone(gamma);

    // Fixed-size rounds keep the first success independent of the thread count.
    constexpr int kRound = 8;
    for (int start = 0; start < attempt_budget; start += kRound) {
        const int n = std::min(kRound, attempt_budget - start);
        std::vector<Attempt> results(static_cast<std::size_t>(n));
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
            results[k] = tail_attempt(f, g, A, gamma, dual, q, seed, start + static_cast<int>(k));
        });
        for (const auto& r : results)
            if (r.found) return r.witness;
    }
    return std::nullopt;
}

std::optional<Witness> tail_zero_search(const ExpSum& f, const Cone& gamma, double q, int attempt_budget,
                                        std::uint64_t seed) {
    return tail_value_search(f, Complex(0.0), gamma, q, attempt_budget, seed);
}

}  // namespace tubeap
