#include "support.hpp"

#include "tubeap/classify.hpp"
#include "tubeap/indicator.hpp"
#include "tubeap/quadrature.hpp"

#include <doctest.h>

#include <algorithm>

using namespace tubeap;
using test::vec;
using C = std::complex<double>;

namespace {

struct Fixture {
    PointSet sp;
    CaseId expected;
    std::optional<Vec> shift;
};

std::vector<Fixture> canonical() {
    PointSet three;
    for (int n = 1; n <= 5; ++n) three.points.push_back(vec({-1.0 + 1.0 / n, -1.0 + 1.0 / n}));
    three.limit_points.push_back(vec({-1, -1}));
    return {
        {{{vec({1, 0}), vec({0, 1}), vec({2, 3})}, {}}, CaseId::One, std::nullopt},
        {{{vec({-1, -1}), vec({0, 0}), vec({1, 2})}, {}}, CaseId::Two, vec({-1, -1})},
        {three, CaseId::Three, vec({-1, -1})},
        {{{vec({1, 2})}, {vec({-1, 1})}}, CaseId::Four, vec({-1, 1})},
        {{{vec({-1, 0}), vec({0, -1})}, {}}, CaseId::Five, std::nullopt},
    };
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("Gauss-Hermite moments") {
    const auto one = gauss_hermite(1);
    CHECK(one.nodes[0] == doctest::Approx(0.0));
    CHECK(one.weights[0] == doctest::Approx(1.0));
    for (int n : {4, 8, 16}) {
        const auto gh = gauss_hermite(n);
        // exact for polynomials of degree < 2n: E[X^{2k}] = (2k-1)!!
        double double_factorial = 1.0;
        for (int k = 0; 2 * k < 2 * n; ++k) {
            if (k > 0) double_factorial *= 2 * k - 1;
            double m = 0.0, odd = 0.0;
            for (int i = 0; i < n; ++i) {
                m += gh.weights[i] * std::pow(gh.nodes[i], 2 * k);
                odd += gh.weights[i] * std::pow(gh.nodes[i], 2 * k + 1);
            }
            CHECK(m == doctest::Approx(double_factorial).epsilon(1e-10));
            CHECK(std::abs(odd) < 1e-9 * double_factorial);
        }
    }
    CHECK(test::error_code([] { gauss_hermite(0); }) == Errc::InvalidArgument);
}

TEST_CASE("canonical classifier fixtures, in every input order") {
    const Cone q = test::quadrant();
    std::mt19937_64 rng(1);
    for (const auto& fx : canonical()) {
        PointSet sp = fx.sp;
        for (int perm = 0; perm < 10; ++perm) {
            const CaseLabel label = classify_spectrum(sp, q);
            CHECK(label.case_id == fx.expected);
            CHECK(label.shift.has_value() == fx.shift.has_value());
            if (label.shift && fx.shift) CHECK(*label.shift == *fx.shift);
            CHECK_FALSE(label.trace.empty());
            std::shuffle(sp.points.begin(), sp.points.end(), rng);
            std::shuffle(sp.limit_points.begin(), sp.limit_points.end(), rng);
        }
    }
    CHECK(test::error_code([&] { classify_spectrum(PointSet{}, q); }) == Errc::EmptySpectrum);
}

TEST_CASE("classifier totality and soundness on random spectra") {
    const Cone q = test::quadrant();
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> coord(-3, 3);
    for (int trial = 0; trial < 300; ++trial) {
        PointSet sp;
        const int n = 1 + trial % 5;
        for (int k = 0; k < n; ++k) {
            const Vec v = vec({double(coord(rng)), double(coord(rng))});
            bool dup = false;
            for (const auto& u : sp.points) dup = dup || u == v;
            if (!dup) sp.points.push_back(v);
        }
        const CaseLabel a = classify_spectrum(sp, q);
        PointSet rev = sp;
        std::reverse(rev.points.begin(), rev.points.end());
        const CaseLabel b = classify_spectrum(rev, q);
        CHECK(a.case_id == b.case_id);
        CHECK(a.shift.has_value() == b.shift.has_value());
        if (a.shift && b.shift) CHECK(*a.shift == *b.shift);

        PointSet nonzero;
        for (const auto& v : sp.points)
            if (!(v.array() == 0.0).all()) nonzero.points.push_back(v);
        switch (a.case_id) {
            case CaseId::One:
                for (const auto& v : nonzero.points) CHECK(cone_contains(q, v));
                CHECK_FALSE(a.shift);
                break;
            case CaseId::Two:
            case CaseId::Four:
                REQUIRE(a.shift);
                CHECK(spectrum_in_shifted_cone(nonzero, *a.shift, q));
                break;
            case CaseId::Five:
                CHECK_FALSE(a.shift);
                // no listed point works as a shift
                for (const auto& v : nonzero.points) CHECK_FALSE(spectrum_in_shifted_cone(nonzero, v, q));
                break;
            default:
                FAIL("unexpected case for a spectrum without limit points");
        }
    }
}

TEST_CASE("J(Ry)/R scaling on closed-form fixtures") {
    const std::vector<double> R{1, 2, 4, 8, 16, 32, 64};
    {
        const ExpSum f = test::sum({vec({0}), vec({1})}, {1.0, 1.0});
        const auto r = theorem1_verify(f, test::half_line(), vec({1}), R);
        CHECK(r.passed);
        for (const auto& row : r.rows) CHECK(std::abs(row.measured) <= 4 * row.std_error + 2e-3);
    }
    {
        const ExpSum f = test::sum({vec({-1, -1}), vec({0, 0})}, {1.0, 1.0});
        const auto r = theorem1_verify(f, test::quadrant(), vec({1, 1}), R);
        CHECK(r.passed);
        // J(R y) = max(0, 2R) exactly for this pair, so J(R y)/R = 2.
        for (const auto& row : r.rows) {
            CHECK(row.expected == 2.0);
            CHECK(std::abs(row.measured - 2.0) <= 4 * row.std_error + 1e-9);
        }
    }
    {
        const ExpSum f = test::sum({vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({2, 0.3})}, {1.0, 1.0, 1.0, 1.0});
        const auto r = theorem1_verify(f, test::quadrant(), vec({1, 1}), R);
        CHECK(r.passed);
        CHECK(r.rows.back().expected == 0.0);
    }
    CHECK(test::error_code([] {
              theorem1_verify(test::sum({vec({0, 0})}, {1.0}), test::quadrant(), vec({1, -1}),
                              std::vector<double>{1, 2, 4, 8, 16});
          }) == Errc::InvalidArgument);
}

TEST_CASE("mollified indicator oracle in closed form") {
    // sp = {0, 1}: the active frequency is 1 for y < 0 and 0 for y > 0, so the mollified value is P(y + u < 0).
    const PointSet sp{{vec({0}), vec({1})}, {}};
    for (double yb : {-0.5, -0.1, 0.0, 0.05, 0.3, 1.0}) {
        const double w = 0.25;
        CHECK(mollified_indicator_gradient(sp, vec({yb}), w)[0] == doctest::Approx(normal_cdf(-yb / w)).epsilon(0.01));
    }
    // single point: the active frequency everywhere
    const PointSet one{{vec({1.5, -2})}, {}};
    const Vec g = mollified_indicator_gradient(one, vec({0.3, 0.7}), 0.2);
    CHECK(g[0] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(g[1] == doctest::Approx(-2).epsilon(1e-10));
}

TEST_CASE("secular convergence") {
    const std::vector<double> R{4, 16, 64};
    const ExpSum single = test::sum({vec({0.5, 1})}, {2.0});
    const auto a = secular_convergence(single, test::quadrant(), {vec({1, 1}), vec({2, 0.5})}, R, 0.2);
    CHECK(a.passed);
    for (const auto& row : a.rows) CHECK(std::abs(row.measured - row.expected) < 1e-9);

    const ExpSum f = test::sum({vec({0}), vec({1})}, {1.0, 1.0});
    const auto b = secular_convergence(f, test::half_line(), {vec({1})}, R, 0.25);
    CHECK(b.passed);
    CHECK(std::abs(b.rows.back().expected) < 1e-3);
}

TEST_CASE("linearity of J against zeros on a segment") {
    {
        const auto r = theoremR_check(test::sum({vec({2})}, {1.0}), vec({-1}), vec({1}));
        CHECK(r.passed);
    }
    {
        const auto r = theoremR_check(test::sum({vec({0}), vec({1})}, {1.0, 1.0}), vec({0.5}), vec({1.5}));
        CHECK(r.passed);
    }
    {
        const auto r = theoremR_check(test::sum({vec({0}), vec({1})}, {1.0, 1.0}), vec({-1}), vec({1}));
        CHECK(r.passed);
        bool witness = false;
        for (const auto& row : r.rows)
            if (row.parameter == "zero witness residual") witness = row.pass;
        CHECK(witness);
    }
}

TEST_CASE("case experiments for cases 1 and 2") {
    const Cone q = test::quadrant();
    const ExpSum one = test::sum({vec({0, 0}), vec({1, 0}), vec({0, 1})}, {2.0, 1.0, 1.0});
    const auto l1 = classify_spectrum(one.spectrum(), q);
    REQUIRE(l1.case_id == CaseId::One);
    CHECK(run_case_experiment(one, q, l1).passed);

    const ExpSum two = test::sum({vec({-1, -1}), vec({0, 0})}, {1.0, 1.0});
    const auto l2 = classify_spectrum(two.spectrum(), q);
    REQUIRE(l2.case_id == CaseId::Two);
    CHECK(run_case_experiment(two, q, l2).passed);
}

TEST_CASE("report bookkeeping") {
    VerificationReport r;
    r.finalize();
    CHECK_FALSE(r.passed);
    r.rows.push_back({"a", 1, 1, 0, 0, true, false, ""});
    r.finalize();
    CHECK(r.passed);
    r.rows.push_back({"b", 1, 2, 0, 0, false, true, ""});
    r.finalize();
    CHECK_FALSE(r.passed);
    CHECK(r.inconclusive);
}
