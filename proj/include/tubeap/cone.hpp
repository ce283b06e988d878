#ifndef TUBEAP_CONE_HPP
#define TUBEAP_CONE_HPP

// Polyhedral convex cones given by generators, their conjugates, and support functions
// of finite point sets with declared accumulation points.

#include "tubeap/error.hpp"
#include "tubeap/nnls.hpp"
#include "tubeap/numeric.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace tubeap {

inline constexpr double kConeTolerance = 1e-9;
inline constexpr double kRankThreshold = 1e-10;
/// conjugate_cone enumerates facets by brute force up to this dimension.
inline constexpr int kMaxDualDimension = 8;

/// Closed convex pointed cone with nonempty interior, stored as a generator list.
template <typename Scalar>
class BasicCone {
public:
    using VectorType = Vector<Scalar>;

    Eigen::Index dimension() const { return dimension_; }
    const std::vector<VectorType>& generators() const { return generators_; }
    /// Generators as unit-length columns.
    const Matrix<Scalar>& unit_generators() const { return unit_; }

    template <typename S>
    friend BasicCone<S> make_cone(const std::vector<Vector<S>>& generators);

private:
    BasicCone() = default;
    Eigen::Index dimension_ = 0;
    std::vector<VectorType> generators_;
    Matrix<Scalar> unit_;
};

/// Finite frequency set plus limit points that belong to the closure but not the set.
template <typename Scalar>
struct BasicPointSet {
    std::vector<Vector<Scalar>> points;
    std::vector<Vector<Scalar>> limit_points;

    std::vector<Vector<Scalar>> all() const {
        std::vector<Vector<Scalar>> out = points;
        out.insert(out.end(), limit_points.begin(), limit_points.end());
        return out;
    }
    bool empty() const { return points.empty() && limit_points.empty(); }
    Eigen::Index dimension() const {
        if (!points.empty()) return points.front().size();
        if (!limit_points.empty()) return limit_points.front().size();
        return 0;
    }
};

using Cone = BasicCone<double>;
using PointSet = BasicPointSet<double>;

namespace detail {

template <typename Scalar>
bool origin_in_convex_hull(const Matrix<Scalar>& unit) {
    // min ||U a|| over the simplex, via NNLS with a heavily weighted sum(a) = 1 row.
    const Eigen::Index p = unit.rows();
    const Eigen::Index m = unit.cols();
    const Scalar weight(1e4);
    Matrix<Scalar> A(p + 1, m);
    A.topRows(p) = unit;
    A.row(p).setConstant(weight);
    Vector<Scalar> b = Vector<Scalar>::Zero(p + 1);
    b[p] = weight;
    auto sol = nnls(A, b);
    Scalar total = sol.x.sum();
    if (total <= Scalar(0)) return false;
    Scalar dist = (unit * (sol.x / total)).norm();
    return dist < Scalar(1e-9);
}

template <typename Scalar>
void validate_point_set(const BasicPointSet<Scalar>& e) {
    auto pts = e.all();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        require(pts[i].size() == pts.front().size(), Errc::DimensionMismatch,
                "point set mixes dimensions");
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            require(!(pts[i] == pts[j]), Errc::InvalidArgument,
                    "point set contains a duplicate or a limit point that is also a point");
    }
}

}  // namespace detail

template <typename Scalar>
BasicCone<Scalar> make_cone(const std::vector<Vector<Scalar>>& generators) {
    require(!generators.empty(), Errc::EmptyGenerators, "cone needs at least one generator");
    const Eigen::Index p = generators.front().size();
    require(p > 0, Errc::DimensionMismatch, "generators must have positive dimension");
    for (const auto& g : generators) {
        require(g.size() == p, Errc::DimensionMismatch, "generators differ in dimension");
        require(g.norm() > Scalar(0), Errc::ZeroGenerator, "generator is the zero vector");
    }

    BasicCone<Scalar> cone;
    cone.dimension_ = p;
    cone.generators_ = generators;
    cone.unit_.resize(p, static_cast<Eigen::Index>(generators.size()));
    for (std::size_t j = 0; j < generators.size(); ++j)
        cone.unit_.col(static_cast<Eigen::Index>(j)) = generators[j] / generators[j].norm();

    require(!detail::origin_in_convex_hull(cone.unit_), Errc::NotPointed,
            "generated cone contains a line");
    Eigen::JacobiSVD<Matrix<Scalar>> svd(cone.unit_);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > Scalar(kRankThreshold) * sv[0]) ++rank;
    require(rank == p, Errc::DegenerateSpan,
            "generators span a subspace of dimension " + std::to_string(rank) + " < " +
                std::to_string(p));
    return cone;
}

/// True iff x lies within distance tol of the cone (nonnegative-combination feasibility).
template <typename Scalar, typename Derived>
bool cone_contains(const BasicCone<Scalar>& c, const Eigen::MatrixBase<Derived>& x,
                   Scalar tol = Scalar(kConeTolerance)) {
    require(x.size() == c.dimension(), Errc::DimensionMismatch, "point and cone dimensions differ");
    require(tol >= Scalar(0), Errc::InvalidArgument, "tolerance must be nonnegative");
    Vector<Scalar> target = x;
    const Scalar norm = target.norm();
    if (norm == Scalar(0)) return true;
    auto sol = nnls(c.unit_generators(), target);
    const Scalar rounding = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * norm;
    return sol.residual <= tol + rounding;
}

/// Interior membership for the conjugate cone: <y, g> > margin |y| |g| for every generator g.
template <typename Scalar, typename Derived>
bool in_conjugate_interior(const BasicCone<Scalar>& gamma, const Eigen::MatrixBase<Derived>& y,
                           Scalar margin = Scalar(kConeTolerance)) {
    require(y.size() == gamma.dimension(), Errc::DimensionMismatch,
            "point and cone dimensions differ");
    const Scalar ny = y.norm();
    if (ny == Scalar(0)) return false;
    for (Eigen::Index j = 0; j < gamma.unit_generators().cols(); ++j)
        if (gamma.unit_generators().col(j).dot(y) <= margin * ny) return false;
    return true;
}

namespace detail {

template <typename Scalar>
std::vector<Vector<Scalar>> prune_generators(std::vector<Vector<Scalar>> gens) {
    for (auto& g : gens) g /= g.norm();
    std::vector<Vector<Scalar>> unique;
    for (const auto& g : gens) {
        bool dup = false;
        for (const auto& u : unique)
            if ((u - g).norm() < Scalar(1e-10)) dup = true;
        if (!dup) unique.push_back(g);
    }
    std::sort(unique.begin(), unique.end(),
              [](const Vector<Scalar>& a, const Vector<Scalar>& b) { return lex_less(a, b); });
    // Drop generators that are nonnegative combinations of the remaining ones.
    std::vector<bool> keep(unique.size(), true);
    for (std::size_t i = 0; i < unique.size(); ++i) {
        std::vector<Eigen::Index> others;
        for (std::size_t j = 0; j < unique.size(); ++j)
            if (j != i && keep[j]) others.push_back(static_cast<Eigen::Index>(j));
        if (others.empty()) continue;
        Matrix<Scalar> A(unique[i].size(), static_cast<Eigen::Index>(others.size()));
        for (std::size_t k = 0; k < others.size(); ++k)
            A.col(static_cast<Eigen::Index>(k)) = unique[static_cast<std::size_t>(others[k])];
        if (nnls(A, unique[i]).residual < Scalar(1e-10)) keep[i] = false;
    }
    std::vector<Vector<Scalar>> out;
    for (std::size_t i = 0; i < unique.size(); ++i)
        if (keep[i]) out.push_back(unique[i]);
    return out;
}

template <typename Scalar>
std::vector<Vector<Scalar>> dual_generators_planar(const Matrix<Scalar>& unit) {
    Eigen::Matrix<Scalar, 2, 1> centre = unit.rowwise().sum();
    centre.normalize();
    Scalar lo = std::numeric_limits<Scalar>::infinity();
    Scalar hi = -lo;
    Eigen::Matrix<Scalar, 2, 1> a, b;
    for (Eigen::Index j = 0; j < unit.cols(); ++j) {
        Eigen::Matrix<Scalar, 2, 1> g = unit.col(j);
        Scalar angle = std::atan2(centre[0] * g[1] - centre[1] * g[0], centre.dot(g));
        if (angle < lo) {
            lo = angle;
            a = g;
        }
        if (angle > hi) {
            hi = angle;
            b = g;
        }
    }
    // a is the clockwise extreme ray, b the counter-clockwise one.
    Vector<Scalar> na(2), nb(2);
    na << -a[1], a[0];
    nb << b[1], -b[0];
    return {na, nb};
}

template <typename Scalar>
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

template <typename Scalar>
std::vector<Vector<Scalar>> dual_generators_facets(const Matrix<Scalar>& unit) {
    const Eigen::Index p = unit.rows();
    const std::size_t m = static_cast<std::size_t>(unit.cols());
    const std::size_t k = static_cast<std::size_t>(p - 1);
    std::vector<Vector<Scalar>> normals;
    if (m < k) return normals;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    do {
        Matrix<Scalar> sub(p, static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) sub.col(static_cast<Eigen::Index>(i)) = unit.col(static_cast<Eigen::Index>(idx[i]));
        Eigen::JacobiSVD<Matrix<Scalar>> svd(sub.transpose(), Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv.size() < static_cast<Eigen::Index>(k) || sv[static_cast<Eigen::Index>(k) - 1] <= Scalar(kRankThreshold) * sv[0])
            continue;
        Vector<Scalar> n = svd.matrixV().col(p - 1);
        Vector<Scalar> dots = unit.transpose() * n;
        const Scalar lo = dots.minCoeff();
        const Scalar hi = dots.maxCoeff();
        const Scalar eps(1e-10);
        if (lo >= -eps)
            normals.push_back(n);
        else if (hi <= eps)
            normals.push_back(-n);
    } while (next_combination<Scalar>(idx, m));
    return normals;
}

}  // namespace detail

/// Generator representation of {x : <x, y> >= 0 for all y in c}.
template <typename Scalar>
BasicCone<Scalar> conjugate_cone(const BasicCone<Scalar>& c) {
    const Eigen::Index p = c.dimension();
    require(p <= kMaxDualDimension, Errc::UnsupportedDimension,
            "conjugate_cone supports dimension <= " + std::to_string(kMaxDualDimension));
    if (p == 1) {
        Vector<Scalar> g(1);
        g[0] = c.unit_generators()(0, 0) > Scalar(0) ? Scalar(1) : Scalar(-1);
        return make_cone<Scalar>({g});
    }
    std::vector<Vector<Scalar>> gens = p == 2 ? detail::dual_generators_planar(c.unit_generators())
                                              : detail::dual_generators_facets(c.unit_generators());
    return make_cone<Scalar>(detail::prune_generators(std::move(gens)));
}

/// Mutual generator membership.
template <typename Scalar>
bool same_cone(const BasicCone<Scalar>& a, const BasicCone<Scalar>& b,
               Scalar tol = Scalar(kConeTolerance)) {
    if (a.dimension() != b.dimension()) return false;
    for (const auto& g : a.generators())
        if (!cone_contains(b, g / g.norm(), tol)) return false;
    for (const auto& g : b.generators())
        if (!cone_contains(a, g / g.norm(), tol)) return false;
    return true;
}

/// H_E(x) = max over points and limit points of <x, lambda>.
template <typename Scalar, typename Derived>
Scalar support_function(const BasicPointSet<Scalar>& e, const Eigen::MatrixBase<Derived>& x) {
    require(!e.empty(), Errc::EmptySet, "support function of an empty set");
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    auto visit = [&](const std::vector<Vector<Scalar>>& pts) {
        for (const auto& lambda : pts) {
            require(lambda.size() == x.size(), Errc::DimensionMismatch,
                    "point and argument dimensions differ");
            Scalar v(0);
            for (Eigen::Index i = 0; i < x.size(); ++i) v += x[i] * lambda[i];
            best = std::max(best, v);
        }
    };
    visit(e.points);
    visit(e.limit_points);
    return best;
}

/// True iff every point and limit point of e lies in shift + c (within tol).
template <typename Scalar, typename Derived>
bool spectrum_in_shifted_cone(const BasicPointSet<Scalar>& e, const Eigen::MatrixBase<Derived>& shift,
                              const BasicCone<Scalar>& c, Scalar tol = Scalar(kConeTolerance)) {
    require(shift.size() == c.dimension(), Errc::DimensionMismatch, "shift and cone dimensions differ");
    for (const auto& lambda : e.all()) {
        require(lambda.size() == c.dimension(), Errc::DimensionMismatch,
                "point and cone dimensions differ");
        if (!cone_contains(c, lambda - shift, tol)) return false;
    }
    return true;
}

/// Lexicographically smallest member L of points and limit points with e inside L + c, if any.
/// For this class that is exactly linearity of H_e on the negated conjugate cone.
template <typename Scalar>
std::optional<Vector<Scalar>> support_linear_on_cone(const BasicPointSet<Scalar>& e,
                                                     const BasicCone<Scalar>& c,
                                                     Scalar tol = Scalar(kConeTolerance)) {
    require(!e.empty(), Errc::EmptySet, "empty point set");
    auto candidates = e.all();
    std::sort(candidates.begin(), candidates.end(),
              [](const Vector<Scalar>& a, const Vector<Scalar>& b) { return lex_less(a, b); });
    for (const auto& cand : candidates)
        if (spectrum_in_shifted_cone(e, cand, c, tol)) return cand;
    return std::nullopt;
}

}  // namespace tubeap

#endif  // TUBEAP_CONE_HPP
