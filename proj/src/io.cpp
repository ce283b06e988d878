#include "tubeap/io.hpp"

#include <cmath>
#include <sstream>

namespace tubeap::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(Errc::Config, (path.empty() ? std::string("/") : path) + ": " + what);
}

double parse_number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

const Json& member(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "/" + key, "missing");
    return *it;
}

std::vector<Vec> parse_vectors(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of vectors");
    std::vector<Vec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_vector(j[i], path + "/" + std::to_string(i)));
    return out;
}

/// Library validation errors raised while building an object are re-raised against its path.
template <typename F>
auto at_path(const std::string& path, F&& build) {
    try {
        return build();
    } catch (const Error& e) {
        if (e.code() == Errc::Config) throw;
        fail(path, e.what());
    }
}

}  // namespace

Vec parse_vector(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = parse_number(j[i], path + "/" + std::to_string(i));
    return v;
}

std::complex<double> parse_complex(const Json& j, const std::string& path) {
    if (j.is_number()) return {parse_number(j, path), 0.0};
    if (j.is_array() && j.size() == 2) return {parse_number(j[0], path + "/0"), parse_number(j[1], path + "/1")};
    fail(path, "expected a number or a [re, im] pair");
}

ExpSum parse_exp_sum(const Json& j, const std::string& path) {
    const Json& terms = member(j, "terms", path);
    if (!terms.is_array() || terms.empty()) fail(path + "/terms", "expected a nonempty array");
    std::vector<Term<double>> parsed;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = path + "/terms/" + std::to_string(i);
        const Json& t = terms[i];
        if (!t.is_object()) fail(tp, "expected an object");
        const char* fkey = t.contains("lambda") ? "lambda" : "frequency";
        const Vec freq = parse_vector(member(t, fkey, tp), tp + "/" + fkey);
        std::complex<double> coeff;
        if (t.contains("coefficient")) {
            coeff = parse_complex(t["coefficient"], tp + "/coefficient");
        } else {
            const double re = parse_number(member(t, "re", tp), tp + "/re");
            const double im = t.contains("im") ? parse_number(t["im"], tp + "/im") : 0.0;
            coeff = {re, im};
        }
        parsed.push_back({freq, coeff});
    }
    std::vector<Vec> limits;
    if (j.contains("limit_frequencies")) limits = parse_vectors(j["limit_frequencies"], path + "/limit_frequencies");
    const Eigen::Index p = parsed.front().frequency.size();
    if (j.contains("dimension") && parse_number(j["dimension"], path + "/dimension") != static_cast<double>(p))
        fail(path + "/dimension", "does not match the frequency length");
    return at_path(path, [&] { return ExpSum(p, std::move(parsed), std::move(limits)); });
}

Cone parse_cone(const Json& j, const std::string& path) {
    auto gens = parse_vectors(member(j, "generators", path), path + "/generators");
    return at_path(path, [&] { return make_cone(gens); });
}

PointSet parse_point_set(const Json& j, const std::string& path) {
    PointSet e;
    e.points = parse_vectors(member(j, "points", path), path + "/points");
    if (j.contains("limit_points")) e.limit_points = parse_vectors(j["limit_points"], path + "/limit_points");
    at_path(path, [&] {
        detail::validate_point_set(e);
        return 0;
    });
    if (e.empty()) fail(path, "empty point set");
    return e;
}

Json to_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Json to_json(std::complex<double> c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const ExpSum& f) {
    Json terms = Json::array();
    for (const auto& t : f.terms())
        terms.push_back({{"lambda", to_json(t.frequency)}, {"re", t.coefficient.real()}, {"im", t.coefficient.imag()}});
    Json limits = Json::array();
    for (const auto& l : f.limit_frequencies()) limits.push_back(to_json(l));
    return {{"dimension", f.dimension()}, {"terms", terms}, {"limit_frequencies", limits}};
}

Json to_json(const Cone& c) {
    Json g = Json::array();
    for (const auto& v : c.generators()) g.push_back(to_json(v));
    return {{"generators", g}};
}

Json to_json(const PointSet& e) {
    Json p = Json::array(), l = Json::array();
    for (const auto& v : e.points) p.push_back(to_json(v));
    for (const auto& v : e.limit_points) l.push_back(to_json(v));
    return {{"points", p}, {"limit_points", l}};
}

Json to_json(const JessenEstimate& e) {
    return {{"y", to_json(e.y)},
            {"value", e.value},
            {"stderr", e.std_error},
            {"S", e.S},
            {"n_samples", e.n_samples},
            {"clipped_fraction", e.clipped_fraction},
            {"clip_warning", e.clip_warning()}};
}

Json to_json(const SecularVector& s) {
    return {{"y", to_json(s.y)}, {"value", to_json(s.value)}, {"stderr", to_json(s.std_error)}, {"h", s.h},
            {"kink_suspected", s.kink_suspected}};
}

Json to_json(const IndicatorEstimate& e) {
    return {{"y", to_json(e.y)},
            {"exact", e.exact},
            {"empirical", e.empirical},
            {"r_max", e.r_max},
            {"x_probes", e.x_probes},
            {"gap_bound", e.gap_bound}};
}

Json to_json(const ZeroCountResult& r) {
    return {{"rect", {r.rect.x_lo, r.rect.x_hi, r.rect.y_lo, r.rect.y_hi}},
            {"count", r.count},
            {"boundary_margin", r.boundary_margin},
            {"perturbed", r.perturbed}};
}

Json to_json(const ZeroDensity& d) {
    return {{"y1", d.y1},
            {"y2", d.y2},
            {"S", d.S},
            {"count", d.count},
            {"density", d.density},
            {"mean_motion_y1", d.mean_motion_y1},
            {"mean_motion_y2", d.mean_motion_y2},
            {"jessen_density", d.jessen_density},
            {"stderr", d.error}};
}

Json to_json(const Witness& w) {
    return {{"z", {{"x", to_json(w.z.x)}, {"y", to_json(w.z.y)}}},
            {"value", to_json(w.value)},
            {"residual", w.residual},
            {"scale", w.scale},
            {"ray", to_json(w.ray)},
            {"w", to_json(w.w)},
            {"attempt", w.attempt}};
}

Json to_json(const CaseLabel& label) {
    Json j = {{"case", to_string(label.case_id)}, {"trace", label.trace}, {"notes", label.notes}};
    j["shift"] = label.shift ? to_json(*label.shift) : Json(nullptr);
    return j;
}

Json to_json(const VerificationReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"parameter", row.parameter},
                        {"measured", row.measured},
                        {"expected", row.expected},
                        {"tolerance", row.tolerance},
                        {"stderr", row.std_error},
                        {"pass", row.pass},
                        {"inconclusive", row.inconclusive},
                        {"note", row.note}});
    return {{"name", r.name}, {"passed", r.passed}, {"inconclusive", r.inconclusive}, {"rows", rows}, {"notes", r.notes}};
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return Json(v).dump();
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    auto cell = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
}

}  // namespace tubeap::io
