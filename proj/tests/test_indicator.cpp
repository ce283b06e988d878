#include "support.hpp"

#include "tubeap/indicator.hpp"

#include <doctest.h>

using namespace tubeap;
using test::vec;
using C = std::complex<double>;

namespace {

ExpSum random_sum(std::mt19937_64& rng, int p, int n) {
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> mag(0.75, 2.0), ang(-3.0, 3.0);
    std::vector<Vec> fr;
    std::vector<C> co;
    for (int k = 0; k < n; ++k) {
        Vec l(p);
        for (int j = 0; j < p; ++j) l[j] = n01(rng);
        fr.push_back(l);
        co.push_back(std::polar(mag(rng), ang(rng)));
    }
    return test::sum(fr, co);
}

}  // namespace

TEST_CASE("exact indicator") {
    CHECK(p_indicator_exact(test::sum({vec({0}), vec({1})}, {1.0, 1.0}), vec({1})) == 0.0);
    CHECK(p_indicator_exact(test::sum({vec({-1, -1}), vec({0, 0})}, {1.0, 1.0}), vec({1, 1})) == 2.0);
    CHECK(p_indicator_exact(test::sum({vec({1, 3})}, {C(0, 5)}), vec({2, -1})) == 1.0);
    CHECK(p_indicator_exact(test::sum({vec({0, 0})}, {1.0}, {vec({-2, 0})}), vec({1, 1})) == 2.0);
}

TEST_CASE("exact indicator equals the support function of the spectrum at -y") {
    std::mt19937_64 rng(123);
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> t(0.01, 100.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int p = 1 + trial % 4;
        const ExpSum f = random_sum(rng, p, 1 + trial % 6);
        Vec y(p);
        for (int j = 0; j < p; ++j) y[j] = n01(rng);
        const double h = p_indicator_exact(f, y);
        CHECK(h == support_function(f.spectrum(), Vec(-y)));
        const double s = t(rng);
        CHECK(p_indicator_exact(f, Vec(s * y)) == doctest::Approx(s * h).epsilon(1e-12));
    }
}

TEST_CASE("empirical indicator") {
    const ExpSum f = test::sum({vec({0}), vec({1})}, {1.0, 1.0});
    const auto a = p_indicator_empirical(f, vec({1}), 50.0, 64, 42);
    CHECK(std::abs(a.empirical) < 0.1);
    const ExpSum g = test::sum({vec({-1, -1}), vec({0, 0})}, {1.0, 1.0});
    const auto b = p_indicator_empirical(g, vec({1, 1}), 50.0, 64, 42);
    CHECK(std::abs(b.empirical - 2.0) < 0.05);
    const ExpSum one = test::sum({vec({1, -1})}, {C(3, 4)});
    const auto c = p_indicator_empirical(one, vec({0.5, 0.25}), 50.0, 16, 1);
    CHECK(c.empirical == doctest::Approx(-0.25 + std::log(5.0) / 50.0).epsilon(1e-12));

    // Dominant frequency unique and coefficients in [0.75, 2]: the explicit bound holds.
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 100; ++trial) {
        const int p = 1 + trial % 3;
        const ExpSum h = random_sum(rng, p, 2 + trial % 4);
        Vec y(p);
        for (int j = 0; j < p; ++j) y[j] = n01(rng);
        std::vector<double> vals;
        for (const auto& t : h.terms()) vals.push_back(-y.dot(t.frequency));
        std::sort(vals.rbegin(), vals.rend());
        if (vals.size() > 1 && vals[0] - vals[1] < 0.5) continue;
        const auto e = p_indicator_empirical(h, y, 50.0, 64, 42 + trial);
        CHECK(std::abs(e.empirical - e.exact) <= e.gap_bound);
    }
}

TEST_CASE("normalize") {
    const ExpSum f = test::sum({vec({1})}, {2.0});
    const ExpSum F = normalize(f, vec({1}));
    REQUIRE(F.size() == 1);
    CHECK(F.terms().front().frequency[0] == 0.0);
    CHECK(std::abs(F.terms().front().coefficient - C(1.0)) < 1e-15);

    const ExpSum g = test::sum({vec({0}), vec({1})}, {1.0, 1.0});
    const ExpSum G = normalize(g, vec({1}), 2.0);
    for (const auto& t : G.terms()) CHECK(std::abs(t.coefficient - C(0.5)) < 1e-15);
    CHECK(G.terms()[0].frequency == g.terms()[0].frequency);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const ExpSum h = random_sum(rng, 2, 3);
        const Vec y0 = vec({1.0 + trial % 3, 1.0}).normalized();
        const ExpSum H = normalize(h, y0);
        CHECK(p_indicator_exact(H, y0) <= 1e-12);
        CHECK(H.coefficient_l1() <= 1.0 + 1e-12);
    }
}

TEST_CASE("Phragmen-Lindelof bound") {
    const ExpSum F = test::sum({vec({0}), vec({1})}, {0.5, 0.5});
    CHECK(pl_bound_check(F, vec({1}), {0.0, 0.5, 1.0, 5.0, 20.0}, 64, 42).empty());
    const ExpSum one = test::sum({vec({0.5})}, {1.0});
    CHECK(pl_bound_check(one, vec({1}), {0.0, 1.0, 10.0}, 16, 42).empty());

    std::mt19937_64 rng(77);
    const Cone q = test::quadrant();
    for (int trial = 0; trial < 10; ++trial) {
        const ExpSum h = random_sum(rng, 2, 3);
        std::uniform_real_distribution<double> u(0.1, 1.0);
        const Vec y0 = vec({u(rng), u(rng)}).normalized();
        REQUIRE(in_conjugate_interior(q, y0));
        const ExpSum H = normalize(h, y0);
        CHECK(pl_bound_check(H, y0, {0.0, 0.5, 2.0, 8.0}, 1000, 5 + trial).empty());
    }
    CHECK(test::error_code([] { pl_bound_check(test::sum({vec({0})}, {2.0}), vec({1}), {1.0}, 16, 1); }) ==
          Errc::InvalidArgument);
}
