// Runs the acceptance criteria at their stated tolerances; one PASS/FAIL line per criterion.

#include "tubeap/classify.hpp"
#include "tubeap/cli.hpp"
#include "tubeap/indicator.hpp"
#include "tubeap/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace tubeap;
using C = std::complex<double>;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Vec vec(std::initializer_list<double> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

ExpSum sum(const std::vector<Vec>& fr, const std::vector<C>& co, std::vector<Vec> limits = {}) {
    return make_exp_sum<double>(fr, co, std::move(limits));
}

Cone quadrant() { return make_cone<double>({vec({1, 0}), vec({0, 1})}); }
Cone half_line() { return make_cone<double>({vec({1})}); }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const ExpSum& one_plus_exp() {
    static const ExpSum f = sum({vec({0}), vec({1})}, {1.0, 1.0});
    return f;
}

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    QuadratureParams q;
    q.S = 1e4;
    const auto up = jessen_estimate(one_plus_exp(), vec({1}), q);
    const auto down = jessen_estimate(one_plus_exp(), vec({-1}), q);
    const double t = seconds_since(t0);
    const bool ok = std::abs(up.value) < 2e-3 && std::abs(down.value - 1.0) < 2e-3 && t < 10.0;
    return {ok, "J(1)=" + num(up.value) + " J(-1)=" + num(down.value) + " in " + num(t) + " s"};
}

Outcome criterion2() {
    double worst = 0.0;
    int sums = 0;
    auto check = [&](const ExpSum& f) {
        for (double y : {-1.0, 1.0}) {
            const auto s = secular_vector(f, vec({y}));
            const auto m = mean_motion(f, vec({y}), vec({1}), 1e4);
            worst = std::max(worst, std::abs(-s.value[0] + m.value));
        }
        ++sums;
    };
    check(one_plus_exp());
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> mu(-3.0, 3.0), mag(0.5, 2.0), ang(-pi, pi);
    while (sums < 21) {
        const double m1 = mu(rng), m2 = mu(rng);
        const double c1 = mag(rng), c2 = mag(rng);
        const C b1 = std::polar(c1, ang(rng)), b2 = std::polar(c2, ang(rng));
        if (std::abs(m1 - m2) < 0.5) continue;
        const double crit = std::log(c1 / c2) / (m1 - m2);
        if (std::abs(crit - 1.0) < 0.3 || std::abs(crit + 1.0) < 0.3) continue;
        check(sum({vec({m1}), vec({m2})}, {b1, b2}));
    }
    return {worst < 5e-3, "max |J' + mean motion| = " + num(worst) + " over " + std::to_string(sums) + " sums"};
}

Outcome criterion3() {
    bool ok = true;
    std::ostringstream os;
    const auto d = zero_density_strip(one_plus_exp(), -1, 1, 1e3);
    const double target = 1 / (2 * pi);
    ok = ok && std::abs(d.density - target) < 0.02 * target && std::abs(d.density - d.jessen_density) <= d.error;
    os << "1+e^{iz}: " << num(d.density) << " vs " << num(target) << " (mean motions " << num(d.jessen_density)
       << " +- " << num(d.error) << ")";
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mu(0.5, 3.0), mag(0.5, 2.0), ang(-pi, pi);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double m1 = -mu(rng), m2 = mu(rng), c1 = mag(rng), c2 = mag(rng);
        const ExpSum phi = sum({vec({m1}), vec({m2})}, {std::polar(c1, ang(rng)), std::polar(c2, ang(rng))});
        const double crit = std::log(c1 / c2) / (m2 - m1);
        const auto e = zero_density_strip(phi, crit - 1, crit + 1, 1e3);
        const double expect = (m2 - m1) / (2 * pi);
        worst = std::max(worst, std::abs(e.density - expect) / expect);
        ok = ok && std::abs(e.density - expect) < 0.02 * expect && std::abs(e.density - e.jessen_density) <= e.error;
    }
    os << "; two-frequency family worst relative error " << num(worst);
    return {ok, os.str()};
}

Outcome criterion4() {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> mag(0.75, 2.0), ang(-pi, pi);
    int mismatches = 0, tested = 0, outside = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int p = 1 + trial % 4;
        const int n = 1 + trial % 5;
        std::vector<Vec> fr;
        std::vector<C> co;
        for (int k = 0; k < n; ++k) {
            Vec l(p);
            for (int j = 0; j < p; ++j) l[j] = n01(rng);
            fr.push_back(l);
            co.push_back(std::polar(mag(rng), ang(rng)));
        }
        const ExpSum f = sum(fr, co);
        Vec y(p);
        for (int j = 0; j < p; ++j) y[j] = n01(rng);
        if (p_indicator_exact(f, y) != support_function(f.spectrum(), Vec(-y))) ++mismatches;

        std::vector<double> vals;
        for (const auto& l : fr) vals.push_back(-y.dot(l));
        std::sort(vals.rbegin(), vals.rend());
        if (vals.size() > 1 && 50.0 * (vals[0] - vals[1]) <= 20.0) continue;
        const auto e = p_indicator_empirical(f, y, 50.0, 64, 42 + trial);
        ++tested;
        if (std::abs(e.empirical - e.exact) > e.gap_bound) ++outside;
    }
    return {mismatches == 0 && outside == 0 && tested > 0,
            std::to_string(mismatches) + " identity mismatches in 1000; " + std::to_string(outside) + "/" +
                std::to_string(tested) + " empirical estimates outside the bound"};
}

Outcome criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> R{1, 2, 4, 8, 16, 32, 64};
    struct F {
        ExpSum f;
        Cone gamma;
        Vec y;
    };
    const std::vector<F> fixtures{
        {one_plus_exp(), half_line(), vec({1})},
        {sum({vec({-1, -1}), vec({0, 0})}, {1.0, 1.0}), quadrant(), vec({1, 1})},
        {sum({vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({2, 0.3})}, {1.0, 1.0, 1.0, 1.0}), quadrant(), vec({1, 1})}};
    bool ok = true;
    std::ostringstream os;
    for (const auto& fx : fixtures) {
        const auto r = theorem1_verify(fx.f, fx.gamma, fx.y, R);
        const auto& last = r.rows.back();
        const double gap = std::abs(last.measured - last.expected);
        ok = ok && r.passed && gap < 0.02 * (1 + std::abs(last.expected));
        os << "gap@64=" << num(gap) << (r.passed ? "" : " (report failed)") << "; ";
    }
    const double t = seconds_since(t0);
    ok = ok && t < 300.0;
    os << num(t) << " s";
    return {ok, os.str()};
}

Outcome criterion6() {
    const std::vector<double> R{4, 16, 64};
    struct F {
        ExpSum f;
        Cone gamma;
        std::vector<Vec> base;
    };
    // The third fixture has H(-y) = max(y1, y2, 0): its kink y1 = y2 runs through (1, 1).
    const std::vector<F> fixtures{
        {one_plus_exp(), half_line(), {vec({1.5}), vec({2}), vec({3})}},
        {sum({vec({-1, -1}), vec({0, 0})}, {1.0, 1.0}), quadrant(), {vec({1, 1}), vec({2, 1}), vec({1, 3})}},
        {sum({vec({-1, 0}), vec({0, -1}), vec({0, 0})}, {1.0, 1.0, 1.0}), quadrant(),
         {vec({1, 1}), vec({1.5, 1}), vec({1, 2})}}};
    bool ok = true;
    double worst = 0.0;
    for (const auto& fx : fixtures) {
        const auto r = secular_convergence(fx.f, fx.gamma, fx.base, R, 0.25);
        for (const auto& row : r.rows)
            if (row.note == "final R") worst = std::max(worst, std::abs(row.measured - row.expected));
        ok = ok && r.passed;
    }
    return {ok, "worst final-R componentwise gap " + num(worst) + " (tolerance 0.05 + 4 stderr)"};
}

Outcome criterion7() {
    std::ostringstream os;
    bool ok = true;
    auto has_row = [](const VerificationReport& r, const std::string& prefix) {
        for (const auto& row : r.rows)
            if (row.parameter.rfind(prefix, 0) == 0) return &row;
        return static_cast<const ReportRow*>(nullptr);
    };
    const auto zero_free = theoremR_check(one_plus_exp(), vec({0.5}), vec({1.5}));
    const auto* cf = has_row(zero_free, "c_f");
    ok = ok && zero_free.passed && cf && !has_row(zero_free, "zero witness");
    os << "zero-free [0.5,1.5]: " << (zero_free.passed ? "affine" : "FAILED");
    if (cf) os << ", c_f=" << num(cf->measured);

    const auto linear = theoremR_check(sum({vec({2})}, {1.0}), vec({-1}), vec({1}));
    const auto* c2 = has_row(linear, "c_f");
    ok = ok && linear.passed && c2 && std::abs(c2->measured - 2.0) < 1e-9;
    os << "; e^{2iz}: c_f=" << (c2 ? num(c2->measured) : "missing");

    const auto kink = theoremR_check(one_plus_exp(), vec({-1}), vec({1}));
    const auto* w = has_row(kink, "zero witness");
    ok = ok && kink.passed && w && w->pass;
    os << "; [-1,1]: nonlinear, witness " << (w ? w->note + " rel. residual " + num(w->measured) : "missing");
    return {ok, os.str()};
}

Outcome criterion8() {
    const Cone q = quadrant();
    std::ostringstream os;
    bool ok = true;

    PointSet three;
    for (int n = 1; n <= 5; ++n) three.points.push_back(vec({-1.0 + 1.0 / n, -1.0 + 1.0 / n}));
    three.limit_points.push_back(vec({-1, -1}));
    const std::vector<PointSet> canonical{{{vec({1, 0}), vec({0, 1}), vec({2, 3})}, {}},
                                          {{vec({-1, -1}), vec({0, 0}), vec({1, 2})}, {}},
                                          three,
                                          {{vec({1, 2})}, {vec({-1, 1})}},
                                          {{vec({-1, 0}), vec({0, -1})}, {}}};
    std::mt19937_64 rng(8);
    for (std::size_t k = 0; k < canonical.size(); ++k) {
        PointSet sp = canonical[k];
        for (int perm = 0; perm < 10; ++perm) {
            ok = ok && classify_spectrum(sp, q).case_id == static_cast<CaseId>(k + 1);
            std::shuffle(sp.points.begin(), sp.points.end(), rng);
        }
    }
    os << "labels " << (ok ? "1-5 in all orders" : "WRONG") << "; ";

    // Value-distribution fixtures. The case 3 sum carries the declared limit frequency (-1, -1); its
    // extra off-diagonal terms keep the finite truncation from having a listed shift of its own.
    std::vector<Vec> f3;
    std::vector<C> c3;
    for (int n = 1; n <= 5; ++n) {
        f3.push_back(vec({-1.0 + 1.0 / n, -1.0 + 1.0 / n}));
        c3.push_back(1.0 / n);
    }
    f3.push_back(vec({-1, 0}));
    c3.push_back(1.0);
    f3.push_back(vec({0, -1}));
    c3.push_back(1.0);
    const std::vector<ExpSum> fns{sum({vec({0, 0}), vec({1, 0}), vec({0, 1})}, {2.0, 1.0, 1.0}),
                                  sum({vec({-1, -1}), vec({0, 0})}, {1.0, 1.0}),
                                  sum(f3, c3, {vec({-1, -1})}),
                                  sum({vec({-1, 1}), vec({1, 2})}, {1.0, 1.0}),
                                  sum({vec({-1, 0}), vec({0, -1})}, {1.0, 1.0})};
    for (std::size_t k = 0; k < fns.size(); ++k) {
        const CaseLabel label = classify_spectrum(fns[k].spectrum(), q);
        if (label.case_id != static_cast<CaseId>(k + 1)) {
            ok = false;
            os << "fixture " << k + 1 << " labelled " << to_string(label.case_id) << "; ";
            continue;
        }
        const auto r = run_case_experiment(fns[k], q, label);
        bool case_ok = r.passed;
        if (k >= 2) {
            int attained = 0, regular = 0;
            for (const auto& row : r.rows) {
                if (row.note == "candidate exceptional value") continue;
                if (row.expected == 5.0) {
                    ++regular;
                    if (row.pass) ++attained;
                }
            }
            os << "case " << k + 1 << ": " << attained << "/" << regular << " attained at q=5";
            case_ok = case_ok && attained == 8 && regular == 8;
        } else {
            os << "case " << k + 1 << ": " << (r.passed ? "pass" : "FAIL");
        }
        if (k == 3) {
            const bool one = std::find(r.notes.begin(), r.notes.end(), "candidate exceptional values: 1 ((0,0))") !=
                             r.notes.end();
            os << (one ? ", one candidate exceptional value" : ", exceptional value count WRONG");
            case_ok = case_ok && one;
        }
        if (k < 4) os << "; ";
        ok = ok && case_ok;
    }
    return {ok, os.str()};
}

Outcome criterion9() {
    const auto t0 = std::chrono::steady_clock::now();
    const Cone q = quadrant();
    const ExpSum f = sum({vec({-1, 0}), vec({0, -1}), vec({0, 0})}, {1.0, 1.0, 1.0});
    const bool nonlinear = !support_linear_on_cone(f.spectrum(), q).has_value();
    const auto w = tail_zero_search(f, q, 5.0, 256, 42);
    const double t = seconds_since(t0);
    if (!w) return {false, "no witness within the budget (" + num(t) + " s)"};
    const double residual = std::abs(evaluate(f, w->z));
    const bool ok = nonlinear && w->z.y.norm() > 5.0 && in_conjugate_interior(q, w->z.y) &&
                    residual < 1e-10 * w->scale && t < 60.0;
    return {ok, "zero at y=(" + num(w->z.y[0]) + "," + num(w->z.y[1]) + "), |f|/scale=" + num(residual / w->scale) +
                    ", " + num(t) + " s"};
}

Outcome criterion10() {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> mag(0.2, 3.0), ang(-pi, pi), u(-3, 3), off(0.05, 3.0);
    int convex_pass = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int p = 1 + trial % 3;
        std::vector<Vec> fr;
        std::vector<C> co;
        for (int k = 0; k < 3; ++k) {
            Vec l(p);
            for (int j = 0; j < p; ++j) l[j] = n01(rng);
            fr.push_back(l);
            co.push_back(std::polar(mag(rng), ang(rng)));
        }
        Vec y1(p), y2(p);
        for (int j = 0; j < p; ++j) {
            y1[j] = n01(rng);
            y2[j] = n01(rng);
        }
        if (convexity_check(sum(fr, co), y1, y2).passed) ++convex_pass;
    }
    int lemma_pass = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double a = 0.2 + std::abs(u(rng));
        std::vector<std::pair<double, double>> lines;
        for (int k = 0; k < 1 + trial % 5; ++k) lines.push_back({u(rng), u(rng)});
        auto g = [&](double t) {
            double m = -1e300;
            for (auto [s, c] : lines) m = std::max(m, s * t + c);
            return m;
        };
        const int n = 20 + trial % 50;
        double top = -1e300;
        for (int k = -n; k <= n; ++k) top = std::max(top, g(a * k / n));
        const double shift = top + off(rng);
        std::vector<std::pair<double, double>> samples;
        for (int k = -n; k <= n; ++k) samples.push_back({a * k / n, g(a * k / n) - shift});
        if (lemma2_bound(samples)) ++lemma_pass;
    }
    bool rejected = false;
    try {
        std::vector<std::pair<double, double>> planted{{-1, -1}, {-0.5, -0.8}, {0, 0.0}, {0.5, -0.8}, {1, -1}};
        lemma2_bound(planted);
    } catch (const Error& e) {
        rejected = e.code() == Errc::NotNegative;
    }
    return {convex_pass == 100 && lemma_pass == 100 && rejected,
            "convexity " + std::to_string(convex_pass) + "/100, lemma2 " + std::to_string(lemma_pass) +
                "/100, planted sample " + (rejected ? "rejected" : "ACCEPTED")};
}

Outcome criterion11() {
    const std::string dir = TUBEAP_CONFIG_DIR;
    const std::vector<std::vector<std::string>> commands{
        {"jessen", "--config", dir + "/two_freq.json", "--y", "1,1;0.3,-0.2"},
        {"verify-t1", "--config", dir + "/two_freq.json", "--format", "json"},
        {"verify-secular", "--config", dir + "/case5.json", "--base", "1,1;1,2", "--R", "4,16"},
        {"zeros", "--config", dir + "/case5.json"},
        {"picard", "--config", dir + "/case5.json", "--targets", "3"},
        {"zeros", "--config", dir + "/one_plus_exp.json"}};
    int identical = 0;
    for (const auto& cmd : commands) {
        std::string reference;
        bool same = true;
        for (const char* threads : {"1", "3", "8", "1"}) {
            auto args = cmd;
            args.insert(args.end(), {"--threads", threads});
            std::ostringstream out, err;
            cli::run(args, out, err);
            if (reference.empty()) reference = out.str();
            else same = same && out.str() == reference;
        }
        if (same && !reference.empty()) ++identical;
    }
    set_thread_count(0);
    return {identical == static_cast<int>(commands.size()),
            std::to_string(identical) + "/" + std::to_string(commands.size()) +
                " commands byte-identical across thread counts 1, 3, 8"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"closed-form Jessen oracle", criterion1},
        {"J' against mean motion", criterion2},
        {"zero density of strips", criterion3},
        {"indicator identity and empirical bound", criterion4},
        {"J(Ry)/R scaling", criterion5},
        {"secular convergence", criterion6},
        {"linearity against zeros", criterion7},
        {"classifier and case experiments", criterion8},
        {"tail zero witness", criterion9},
        {"convexity and lemma2 suites", criterion10},
        {"determinism across thread counts", criterion11}};
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << "criterion " << k + 1 << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[k].first << ": "
                  << o.detail << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
