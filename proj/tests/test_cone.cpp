#include "support.hpp"

#include "tubeap/cone.hpp"

#include <doctest.h>

using namespace tubeap;
using test::vec;

namespace {

/// x in the conjugate of c by the definition: <x, g> >= 0 for every generator.
double min_pairing(const Cone& c, const Vec& x) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& g : c.generators()) m = std::min(m, x.dot(g.normalized()));
    return m;
}

Cone random_cone(std::mt19937_64& rng, int p, int n) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<Vec> gens;
    for (int k = 0; k < n; ++k) {
        Vec g(p);
        for (int j = 0; j < p; ++j) g[j] = u(rng);
        gens.push_back(g);
    }
    for (int j = 0; j < p; ++j) gens.push_back(Vec::Unit(p, j) * 0.5 + Vec::Constant(p, 0.1));
    return make_cone(gens);
}

}  // namespace

TEST_CASE("cone construction") {
    CHECK(test::quadrant().dimension() == 2);
    CHECK(test::error_code([] { make_cone<double>({vec({1, 0}), vec({-1, 0})}); }) == Errc::NotPointed);
    CHECK(test::error_code([] { make_cone<double>({vec({1, 0, 0}), vec({0, 1, 0})}); }) == Errc::DegenerateSpan);
    CHECK(test::error_code([] { make_cone<double>({}); }) == Errc::EmptyGenerators);
    CHECK(test::error_code([] { make_cone<double>({vec({0, 0}), vec({1, 0})}); }) == Errc::ZeroGenerator);
}

TEST_CASE("conjugate cone") {
    CHECK(same_cone(conjugate_cone(test::quadrant()), test::quadrant()));
    const Cone wedge = make_cone<double>({vec({1, 1}), vec({1, -1})});
    CHECK(same_cone(conjugate_cone(wedge), wedge));

    const Cone narrow = make_cone<double>({vec({1, 0.2}), vec({1, 0.5})});
    // <x,(1,0.2)> >= 0 and <x,(1,0.5)> >= 0: edges are perpendicular to the generators.
    CHECK(same_cone(conjugate_cone(narrow), make_cone<double>({vec({-0.2, 1}), vec({0.5, -1})})));
}

TEST_CASE("biduality and membership against the definition on random cones") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 2 + trial % 3;
        const Cone c = random_cone(rng, p, 3 + trial % 4);
        const Cone dual = conjugate_cone(c);
        CHECK(same_cone(conjugate_cone(dual), c));
        for (int k = 0; k < 200; ++k) {
            Vec x(p);
            for (int j = 0; j < p; ++j) x[j] = n01(rng);
            const double m = min_pairing(c, x);
            if (std::abs(m) < 1e-6) continue;
            CHECK(cone_contains(dual, x) == (m > 0));
        }
    }
}

TEST_CASE("cone_contains") {
    const Cone q = test::quadrant();
    CHECK(cone_contains(q, vec({2, 3}), 0.0));
    CHECK_FALSE(cone_contains(q, vec({-1, 1}), 0.0));
    CHECK(cone_contains(q, vec({-1e-12, 1}), 1e-9));
    CHECK(in_conjugate_interior(q, vec({1, 2})));
    CHECK_FALSE(in_conjugate_interior(q, vec({0, 1})));
}

TEST_CASE("support function") {
    PointSet e{{vec({1, 0}), vec({0, 1})}, {}};
    CHECK(support_function(e, vec({1, 1})) == 1.0);
    PointSet f{{vec({-1, -1}), vec({0, 0})}, {}};
    CHECK(support_function(f, vec({-1, -1})) == 2.0);
    PointSet g{{vec({0.5, 0.5})}, {vec({3, -1})}};
    CHECK(support_function(g, vec({1, 0})) == 3.0);
    CHECK(test::error_code([] { support_function(PointSet{}, vec({1, 0})); }) == Errc::EmptySet);
}

TEST_CASE("support function is positively homogeneous and convex") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> t(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        PointSet e;
        for (int k = 0; k < 4; ++k) e.points.push_back(vec({n01(rng), n01(rng), n01(rng)}));
        const Vec x = vec({n01(rng), n01(rng), n01(rng)});
        const Vec y = vec({n01(rng), n01(rng), n01(rng)});
        const double s = t(rng);
        CHECK(support_function(e, Vec(s * x)) == doctest::Approx(s * support_function(e, x)).epsilon(1e-12));
        CHECK(support_function(e, Vec(0.5 * (x + y))) <=
              0.5 * (support_function(e, x) + support_function(e, y)) + 1e-12);
    }
}

TEST_CASE("spectrum in shifted cone") {
    const Cone q = test::quadrant();
    CHECK(spectrum_in_shifted_cone(PointSet{{vec({0, 0}), vec({1, 0}), vec({0, 1})}, {}}, vec({0, 0}), q));
    CHECK_FALSE(spectrum_in_shifted_cone(PointSet{{vec({-1, 0}), vec({0, -1})}, {}}, vec({-1, 0}), q));
    CHECK(spectrum_in_shifted_cone(PointSet{{vec({-1, -1}), vec({0, 0})}, {}}, vec({-1, -1}), q));
}

TEST_CASE("linearity of the support function on the negated conjugate cone") {
    const Cone q = test::quadrant();
    auto a = support_linear_on_cone(PointSet{{vec({0, 0}), vec({1, 0}), vec({0, 1})}, {}}, q);
    REQUIRE(a);
    CHECK(*a == vec({0, 0}));
    CHECK_FALSE(support_linear_on_cone(PointSet{{vec({-1, 0}), vec({0, -1})}, {}}, q));
    auto b = support_linear_on_cone(PointSet{{vec({-1, -1}), vec({0, 0}), vec({1, 2})}, {}}, q);
    REQUIRE(b);
    CHECK(*b == vec({-1, -1}));

    // When a shift exists, H(-y) = <-y, shift> on the conjugate interior.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.01, 3.0);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 100; ++trial) {
        PointSet e;
        const Vec L = vec({n01(rng), n01(rng)});
        e.points.push_back(L);
        for (int k = 0; k < 3; ++k) e.points.push_back(L + vec({u(rng), u(rng)}));
        auto s = support_linear_on_cone(e, q);
        REQUIRE(s);
        CHECK(*s == L);
        const Vec y = vec({u(rng), u(rng)});
        CHECK(support_function(e, Vec(-y)) == doctest::Approx(-y.dot(L)).epsilon(1e-12));
    }
}
