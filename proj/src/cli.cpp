#include "tubeap/cli.hpp"

#include "tubeap/io.hpp"
#include "tubeap/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace tubeap::cli {

namespace {

using io::Json;
using Complex = std::complex<double>;

/// Every tunable with its default. Config "analysis" keys must be among these.
Json defaults() {
    return {{"S", 2000.0},
            {"n_samples", 65536},
            {"clip", -40.0},
            {"seed", 42},
            {"y", nullptr},
            {"h", 0.0},
            {"R_schedule", {1, 2, 4, 8, 16, 32, 64}},
            {"width", 0.25},
            {"base_points", nullptr},
            {"y1", nullptr},
            {"y2", nullptr},
            {"r_max", 50.0},
            {"probes", 64},
            {"rect", nullptr},
            {"strip", nullptr},
            {"q", nullptr},
            {"tail_budget", 256},
            {"q_values", {1.0, 5.0}},
            {"t_values", {10.0, 20.0, 40.0}},
            {"targets", 8},
            {"budget", 64},
            {"slices", 4},
            {"slice_half_width", 40.0}};
}

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw Error(Errc::Config, path + ": " + what);
}

std::vector<double> split_numbers(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            config_error(flag, "cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) config_error(flag, "empty list");
    return out;
}

/// "1,2" -> [1,2]; "1,2;3,4" -> [[1,2],[3,4]]; "5" -> 5.
Json flag_value(const std::string& s, const std::string& flag, bool want_list_of_vectors = false) {
    if (s.find(';') != std::string::npos || want_list_of_vectors) {
        Json a = Json::array();
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ';')) a.push_back(split_numbers(item, flag));
        return a;
    }
    const auto v = split_numbers(s, flag);
    if (v.size() == 1 && s.find(',') == std::string::npos) return v.front();
    return v;
}

class Params {
public:
    explicit Params(Json values) : values_(std::move(values)) {}

    const Json& raw(const std::string& key) const { return values_.at(key); }
    bool has(const std::string& key) const { return !values_.at(key).is_null(); }

    double number(const std::string& key) const {
        const Json& j = values_.at(key);
        if (!j.is_number()) config_error(path(key), "expected a number");
        return j.get<double>();
    }
    int integer(const std::string& key) const {
        const double v = number(key);
        if (v != std::floor(v) || std::abs(v) > 2e9) config_error(path(key), "expected an integer");
        return static_cast<int>(v);
    }
    Vec vector(const std::string& key) const {
        if (!has(key)) config_error(path(key), "missing");
        const Json& j = values_.at(key);
        if (j.is_number()) return Vec::Constant(1, j.get<double>());
        return io::parse_vector(j, path(key));
    }
    std::vector<double> list(const std::string& key) const {
        const Vec v = vector(key);
        return {v.data(), v.data() + v.size()};
    }
    /// A single vector or a list of vectors.
    std::vector<Vec> vectors(const std::string& key) const {
        if (!has(key)) config_error(path(key), "missing");
        const Json& j = values_.at(key);
        if (j.is_array() && !j.empty() && j.front().is_array()) {
            std::vector<Vec> out;
            for (std::size_t i = 0; i < j.size(); ++i) out.push_back(io::parse_vector(j[i], path(key) + "/" + std::to_string(i)));
            return out;
        }
        return {vector(key)};
    }
    QuadratureParams quadrature() const {
        QuadratureParams q;
        q.S = number("S");
        q.n_samples = integer("n_samples");
        q.clip = number("clip");
        q.seed = static_cast<std::uint64_t>(integer("seed"));
        return q;
    }
    const Json& json() const { return values_; }

private:
    static std::string path(const std::string& key) { return "/analysis/" + key; }
    Json values_;
};

struct Result {
    Json result;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string text;
    int code = kPass;
    bool uses_cone = false;
};

std::string num(double v) { return io::format_double(v); }

std::string vec_text(const Vec& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v[i]);
    return s;
}

int report_code(const VerificationReport& r) {
    if (r.passed) return kPass;
    for (const auto& row : r.rows)
        if (!row.pass && !row.inconclusive) return kFail;
    return r.inconclusive ? kInconclusive : kFail;
}

int worst(int a, int b) {
    auto rank = [](int c) { return c == kFail ? 3 : (c == kInconclusive ? 2 : (c == kUsage ? 4 : 0)); };
    return rank(a) >= rank(b) ? a : b;
}

void add_report(Result& res, const VerificationReport& r) {
    res.header = {"report", "parameter", "measured", "expected", "tolerance", "stderr", "pass", "inconclusive", "note"};
    std::ostringstream os;
    os << r.name << ": " << (r.passed ? "PASS" : (r.inconclusive ? "INCONCLUSIVE" : "FAIL")) << '\n';
    for (const auto& row : r.rows) {
        res.rows.push_back({r.name, row.parameter, num(row.measured), num(row.expected), num(row.tolerance),
                            num(row.std_error), row.pass ? "true" : "false", row.inconclusive ? "true" : "false",
                            row.note});
        os << "  " << row.parameter << "  measured " << num(row.measured) << "  expected " << num(row.expected)
           << "  tol " << num(row.tolerance) << "  stderr " << num(row.std_error) << "  "
           << (row.pass ? "ok" : (row.inconclusive ? "inconclusive" : "FAIL"))
           << (row.note.empty() ? "" : "  [" + row.note + "]") << '\n';
    }
    for (const auto& n : r.notes) os << "  note: " << n << '\n';
    res.text += os.str();
    res.code = worst(res.code, report_code(r));
}

Cone cone_or_orthant(const Json& config, Eigen::Index p) {
    if (config.contains("cone")) return io::parse_cone(config["cone"], "/cone");
    std::vector<Vec> gens;
    for (Eigen::Index j = 0; j < p; ++j) gens.push_back(Vec::Unit(p, j));
    return make_cone(gens);
}

Vec interior_direction(const Cone& gamma) {
    Vec c = Vec::Zero(gamma.dimension());
    for (const auto& g : conjugate_cone(gamma).generators()) c += g.normalized();
    return c.normalized();
}

CaseLabel label_for(const Json& config, const ExpSum& f, const Cone& gamma) {
    const PointSet sp = config.contains("spectrum") ? io::parse_point_set(config["spectrum"], "/spectrum") : f.spectrum();
    return classify_spectrum(sp, gamma);
}

Result cmd_spectrum(const Json& config, const ExpSum& f, const Params& p) {
    Result res;
    res.uses_cone = true;
    const Cone gamma = cone_or_orthant(config, f.dimension());
    const PointSet sp = f.spectrum();
    const Cone dual = conjugate_cone(gamma);
    const auto shift = support_linear_on_cone(sp, gamma);
    res.result = {{"spectrum", io::to_json(sp)}, {"conjugate_cone", io::to_json(dual)}};
    res.result["linear_shift"] = shift ? io::to_json(*shift) : Json(nullptr);
    res.header = {"kind", "coordinates"};
    for (const auto& v : sp.points) res.rows.push_back({"point", vec_text(v)});
    for (const auto& v : sp.limit_points) res.rows.push_back({"limit_point", vec_text(v)});
    for (const auto& v : dual.generators()) res.rows.push_back({"conjugate_generator", vec_text(v)});
    if (p.has("y")) {
        const Vec y = p.vector("y");
        res.result["support_at_minus_y"] = support_function(sp, Vec(-y));
        res.rows.push_back({"support_at_minus_y", num(support_function(sp, Vec(-y)))});
    }
    std::ostringstream os;
    os << "spectrum: " << sp.points.size() << " points, " << sp.limit_points.size() << " limit points\n";
    os << "H linear on the negated conjugate cone: " << (shift ? "yes, shift " + vec_text(*shift) : std::string("no"))
       << '\n';
    res.text = os.str();
    return res;
}

Result cmd_jessen(const ExpSum& f, const Params& p) {
    Result res;
    const auto ys = p.vectors("y");
    res.result = Json::array();
    for (Eigen::Index j = 0; j < f.dimension(); ++j) res.header.push_back("y" + std::to_string(j));
    for (const char* h : {"value", "stderr", "S", "n_samples", "clipped_fraction"}) res.header.push_back(h);
    const QuadratureParams quad = p.quadrature();
    for (const auto& y : ys) {
        const JessenEstimate e = jessen_estimate(f, y, quad);
        res.result.push_back(io::to_json(e));
        std::vector<std::string> row;
        for (Eigen::Index j = 0; j < y.size(); ++j) row.push_back(num(y[j]));
        for (const auto& c : {num(e.value), num(e.std_error), num(quad.S), std::to_string(quad.n_samples),
                              num(e.clipped_fraction)})
            row.push_back(c);
        res.rows.push_back(std::move(row));
        res.text += "J(" + vec_text(y) + ") = " + num(e.value) + " +- " + num(e.std_error) +
                    (e.clip_warning() ? "  [clip warning]" : "") + "\n";
    }
    return res;
}

Result cmd_secular(const ExpSum& f, const Params& p) {
    Result res;
    res.result = Json::array();
    res.header = {"y", "component", "value", "stderr", "h", "kink_suspected"};
    for (const auto& y : p.vectors("y")) {
        const SecularVector s = secular_vector(f, y, p.number("h"), p.quadrature());
        res.result.push_back(io::to_json(s));
        for (Eigen::Index j = 0; j < s.value.size(); ++j)
            res.rows.push_back({vec_text(y), std::to_string(j), num(s.value[j]), num(s.std_error[j]), num(s.h),
                                s.kink_suspected ? "true" : "false"});
        res.text += "-grad J(" + vec_text(y) + ") = (" + vec_text(s.value) + ") +- (" + vec_text(s.std_error) + ")" +
                    (s.kink_suspected ? "  [kink suspected]" : "") + "\n";
    }
    return res;
}

Result cmd_indicator(const ExpSum& f, const Params& p) {
    Result res;
    res.result = Json::array();
    res.header = {"y", "exact", "empirical", "r_max", "gap_bound"};
    for (const auto& y : p.vectors("y")) {
        const IndicatorEstimate e = p_indicator_empirical(f, y, p.number("r_max"), p.integer("probes"),
                                                          static_cast<std::uint64_t>(p.integer("seed")));
        Json j = io::to_json(e);
        const bool within = std::abs(e.empirical - e.exact) <= e.gap_bound;
        j["within_bound"] = within;
        res.result.push_back(j);
        res.rows.push_back({vec_text(y), num(e.exact), num(e.empirical), num(e.r_max), num(e.gap_bound)});
        res.text += "h(" + vec_text(y) + ") exact " + num(e.exact) + "  empirical " + num(e.empirical) + "  bound " +
                    num(e.gap_bound) + (within ? "" : "  OUTSIDE BOUND") + "\n";
        if (!within) res.code = kFail;
    }
    return res;
}

Result cmd_zeros(const Json& config, const ExpSum& f, const Params& p) {
    Result res;
    if (p.has("rect")) {
        const Vec r = p.vector("rect");
        if (r.size() != 4) config_error("/analysis/rect", "expected [x_lo, x_hi, y_lo, y_hi]");
        const ZeroCountResult c = count_zeros_rect(f, {r[0], r[1], r[2], r[3]});
        res.result = io::to_json(c);
        res.header = {"x_lo", "x_hi", "y_lo", "y_hi", "count", "boundary_margin"};
        res.rows.push_back({num(c.rect.x_lo), num(c.rect.x_hi), num(c.rect.y_lo), num(c.rect.y_hi),
                            std::to_string(c.count), num(c.boundary_margin)});
        res.text = "zeros in rectangle: " + std::to_string(c.count) + "\n";
    } else if (p.has("strip")) {
        const Vec s = p.vector("strip");
        if (s.size() != 2) config_error("/analysis/strip", "expected [y1, y2]");
        const ZeroDensity d = zero_density_strip(f, s[0], s[1], p.number("S"));
        res.result = io::to_json(d);
        res.header = {"y1", "y2", "S", "count", "density", "jessen_density", "stderr"};
        res.rows.push_back({num(d.y1), num(d.y2), num(d.S), std::to_string(d.count), num(d.density),
                            num(d.jessen_density), num(d.error)});
        res.text = "zero density " + num(d.density) + "  from mean motions " + num(d.jessen_density) + "  +- " +
                   num(d.error) + "\n";
        if (std::abs(d.density - d.jessen_density) > d.error) res.code = kFail;
    } else if (p.has("q")) {
        res.uses_cone = true;
        const Cone gamma = cone_or_orthant(config, f.dimension());
        const auto w = tail_zero_search(f, gamma, p.number("q"), p.integer("tail_budget"),
                                        static_cast<std::uint64_t>(p.integer("seed")));
        res.result = w ? io::to_json(*w) : Json(nullptr);
        res.header = {"found", "x", "y", "residual"};
        if (w) {
            res.rows.push_back({"true", vec_text(w->z.x), vec_text(w->z.y), num(w->residual)});
            res.text = "zero at x = (" + vec_text(w->z.x) + "), y = (" + vec_text(w->z.y) + "), residual " +
                       num(w->residual) + "\n";
        } else {
            res.rows.push_back({"false", "", "", ""});
            res.text = "no zero found within the attempt budget (not a proof of absence)\n";
            res.code = kInconclusive;
        }
    } else {
        config_error("/analysis", "zeros needs one of rect, strip or q");
    }
    return res;
}

Result cmd_classify(const Json& config, const ExpSum& f) {
    Result res;
    res.uses_cone = true;
    const Cone gamma = cone_or_orthant(config, f.dimension());
    const CaseLabel label = label_for(config, f, gamma);
    res.result = io::to_json(label);
    res.header = {"line", "text"};
    res.rows.push_back({"case", to_string(label.case_id)});
    res.text = "case " + to_string(label.case_id) + (label.shift ? "  shift (" + vec_text(*label.shift) + ")" : "") + "\n";
    for (const auto& t : label.trace) {
        res.rows.push_back({"trace", t});
        res.text += "  " + t + "\n";
    }
    res.text += "  note: " + label.notes + "\n";
    return res;
}

Result cmd_verify_t1(const Json& config, const ExpSum& f, const Params& p) {
    Result res;
    res.uses_cone = true;
    const Cone gamma = cone_or_orthant(config, f.dimension());
    const Vec y = p.has("y") ? p.vector("y") : interior_direction(gamma);
    const VerificationReport r = theorem1_verify(f, gamma, y, p.list("R_schedule"), p.quadrature());
    res.result = io::to_json(r);
    add_report(res, r);
    res.header = {"R", "J_over_R", "h", "gap", "stderr"};
    res.rows.clear();
    for (const auto& row : r.rows)
        res.rows.push_back({row.parameter.substr(row.parameter.find('=') + 1), num(row.measured), num(row.expected),
                            num(std::abs(row.measured - row.expected)), num(row.std_error)});
    return res;
}

Result cmd_verify_secular(const Json& config, const ExpSum& f, const Params& p) {
    Result res;
    res.uses_cone = true;
    const Cone gamma = cone_or_orthant(config, f.dimension());
    const VerificationReport r =
        secular_convergence(f, gamma, p.vectors("base_points"), p.list("R_schedule"), p.number("width"), p.quadrature());
    res.result = io::to_json(r);
    add_report(res, r);
    return res;
}

Result cmd_verify_tR(const ExpSum& f, const Params& p) {
    Result res;
    TheoremRParams tp;
    tp.quad = p.quadrature();
    tp.slices = p.integer("slices");
    tp.slice_half_width = p.number("slice_half_width");
    tp.seed = static_cast<std::uint64_t>(p.integer("seed"));
    const VerificationReport r = theoremR_check(f, p.vector("y1"), p.vector("y2"), tp);
    res.result = io::to_json(r);
    add_report(res, r);
    return res;
}

CaseExperimentParams case_params(const Params& p) {
    CaseExperimentParams cp;
    cp.t_values = p.list("t_values");
    cp.x_probes = p.integer("probes");
    cp.targets = p.integer("targets");
    cp.q_values = p.list("q_values");
    cp.attempt_budget = p.integer("budget");
    cp.seed = static_cast<std::uint64_t>(p.integer("seed"));
    return cp;
}

Result cmd_picard(const Json& config, const ExpSum& f, const Params& p) {
    Result res;
    res.uses_cone = true;
    const Cone gamma = cone_or_orthant(config, f.dimension());
    const CaseLabel label = label_for(config, f, gamma);
    const VerificationReport r = run_case_experiment(f, gamma, label, case_params(p));
    res.result = {{"label", io::to_json(label)}, {"report", io::to_json(r)}};
    add_report(res, r);
    return res;
}

Result cmd_report(const Json& config, const ExpSum& f, const Params& p) {
    Result res;
    res.uses_cone = true;
    const Cone gamma = cone_or_orthant(config, f.dimension());
    const Vec y = p.has("y") ? p.vector("y") : interior_direction(gamma);
    const CaseLabel label = label_for(config, f, gamma);
    res.text = "case " + to_string(label.case_id) + "\n";

    const IndicatorEstimate ind = p_indicator_empirical(f, y, p.number("r_max"), p.integer("probes"),
                                                        static_cast<std::uint64_t>(p.integer("seed")));
    res.text += "indicator at (" + vec_text(y) + "): exact " + num(ind.exact) + "  empirical " + num(ind.empirical) +
                "  bound " + num(ind.gap_bound) + "\n";
    const VerificationReport t1 = theorem1_verify(f, gamma, y, p.list("R_schedule"), p.quadrature());
    const VerificationReport cases = run_case_experiment(f, gamma, label, case_params(p));
    add_report(res, t1);
    add_report(res, cases);
    res.result = {{"label", io::to_json(label)},
                  {"indicator", io::to_json(ind)},
                  {"theorem1", io::to_json(t1)},
                  {"case_experiment", io::to_json(cases)}};
    return res;
}

int code_for(Errc c) {
    switch (c) {
        case Errc::BudgetExhausted:
        case Errc::Inconclusive:
        case Errc::StepTooSmall: return kInconclusive;
        case Errc::OverflowGuard:
        case Errc::CollidingFrequencies:
        case Errc::NotFound:
        case Errc::AllClipped:
        case Errc::ZeroOnPath:
        case Errc::NotNegative:
        case Errc::BoundaryZeroPersistent:
        case Errc::TrackingFailed: return kFail;
        default: return kUsage;
    }
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exponential sums on tube domains: Jessen functions, indicators, zeros and value distribution",
                 "tubeap"};
    app.set_help_flag("--help", "print this help");
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, output_path, format;
    unsigned threads = 0;
    std::map<std::string, std::string> flags;
    app.add_option("--config", config_path, "JSON config with function, cone, spectrum, analysis")->check(CLI::ExistingFile);
    app.add_option("--output", output_path, "write the result here; timing goes to <output>.meta.json");
    app.add_option("--format", format, "json, csv or text (default: text for classify, csv for verify-t1, else json)")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--threads", threads, "worker threads (default: TUBEAP_THREADS, else 1)");
    const std::vector<std::pair<std::string, std::string>> analysis_flags = {
        {"seed", "random seed"},
        {"y", "point(s) y, e.g. 1,1 or 1,1;2,1"},
        {"h", "central-difference step"},
        {"S", "averaging half-width"},
        {"n_samples", "quadrature samples"},
        {"clip", "log clip floor"},
        {"R_schedule", "R values, e.g. 1,2,4,8,16"},
        {"width", "mollifier width"},
        {"base_points", "base points, e.g. 1,1;2,1"},
        {"y1", "segment start"},
        {"y2", "segment end"},
        {"r_max", "indicator radius"},
        {"probes", "x probes"},
        {"rect", "x_lo,x_hi,y_lo,y_hi"},
        {"strip", "y1,y2"},
        {"q", "tail radius for the zero search"},
        {"tail_budget", "attempts for the tail zero search"},
        {"q_values", "tail radii for value attainment"},
        {"t_values", "growth parameters for cases 1 and 2"},
        {"targets", "number of target values"},
        {"budget", "attempts per target"},
        {"slices", "complex slices in the linearity check"},
        {"slice_half_width", "slice half-width"}};
    for (const auto& [key, help] : analysis_flags) {
        std::vector<std::string> names{"--" + key};
        if (key == "n_samples") names.push_back("--samples");
        if (key == "R_schedule") names.push_back("--R");
        if (key == "base_points") names.push_back("--base");
        if (key == "r_max") names.push_back("--rmax");
        std::string joined;
        for (const auto& n : names) joined += (joined.empty() ? "" : ",") + n;
        app.add_option_function<std::string>(joined, [&flags, key = key](const std::string& v) { flags[key] = v; }, help);
    }
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"spectrum", "spectrum, conjugate cone and linearity of the support function"},
        {"jessen", "Jessen function estimate"},
        {"secular", "secular vector -grad J"},
        {"indicator", "P-indicator, exact and empirical"},
        {"zeros", "zero count (rect), zero density (strip) or tail zero search (q)"},
        {"classify", "case of the spectrum"},
        {"verify-t1", "J(Ry)/R against the indicator"},
        {"verify-secular", "mollified secular vector against the indicator gradient"},
        {"verify-tR", "linearity of J against zeros on a segment"},
        {"picard", "value attainment experiment for the case of the spectrum"},
        {"report", "classification, indicator, scaling and value attainment together"}};
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    const bool format_given = !format.empty();
    if (!format_given) format = command == "classify" ? "text" : (command == "verify-t1" ? "csv" : "json");

    const auto started = std::chrono::steady_clock::now();
    const std::string started_utc = utc_now();
    try {
        set_thread_count(threads);
        Json config = Json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            try {
                config = Json::parse(in);
            } catch (const Json::parse_error& e) {
                config_error(config_path, std::string("not valid JSON: ") + e.what());
            }
            if (!config.is_object()) config_error("/", "config must be an object");
            for (auto it = config.begin(); it != config.end(); ++it)
                if (it.key() != "function" && it.key() != "cone" && it.key() != "spectrum" && it.key() != "analysis" &&
                    it.key() != "output")
                    config_error("/" + it.key(), "unknown section");
        }
        if (!config.contains("function")) config_error("/function", "missing (pass --config)");
        const ExpSum f = io::parse_exp_sum(config["function"], "/function");

        Json values = defaults();
        if (config.contains("analysis")) {
            const Json& a = config["analysis"];
            if (!a.is_object()) config_error("/analysis", "expected an object");
            for (auto it = a.begin(); it != a.end(); ++it) {
                if (!values.contains(it.key())) config_error("/analysis/" + it.key(), "unknown parameter");
                values[it.key()] = it.value();
            }
        }
        if (config.contains("output")) {
            const Json& o = config["output"];
            if (!o.is_object()) config_error("/output", "expected an object");
            if (o.contains("path") && output_path.empty()) {
                if (!o["path"].is_string()) config_error("/output/path", "expected a string");
                output_path = o["path"].get<std::string>();
            }
            if (o.contains("format") && !format_given) {
                if (!o["format"].is_string()) config_error("/output/format", "expected a string");
                format = o["format"].get<std::string>();
                if (format != "json" && format != "csv" && format != "text")
                    config_error("/output/format", "expected json, csv or text");
            }
        }
        for (const auto& [key, text] : flags)
            values[key] = flag_value(text, "--" + key, key == "base_points" || (key == "y" && text.find(';') != std::string::npos));
        const Params p(values);

        Result res;
        if (command == "spectrum") res = cmd_spectrum(config, f, p);
        else if (command == "jessen") res = cmd_jessen(f, p);
        else if (command == "secular") res = cmd_secular(f, p);
        else if (command == "indicator") res = cmd_indicator(f, p);
        else if (command == "zeros") res = cmd_zeros(config, f, p);
        else if (command == "classify") res = cmd_classify(config, f);
        else if (command == "verify-t1") res = cmd_verify_t1(config, f, p);
        else if (command == "verify-secular") res = cmd_verify_secular(config, f, p);
        else if (command == "verify-tR") res = cmd_verify_tR(f, p);
        else if (command == "picard") res = cmd_picard(config, f, p);
        else res = cmd_report(config, f, p);

        Json doc = {{"tool", "tubeap"},
                    {"command", command},
                    {"parameters", p.json()},
                    {"defaults", defaults()},
                    {"function", io::to_json(f)},
                    {"result", res.result},
                    {"exit_code", res.code}};
        if (res.uses_cone) doc["cone"] = io::to_json(cone_or_orthant(config, f.dimension()));

        std::string body;
        if (format == "json") body = doc.dump(2) + "\n";
        else if (format == "csv") body = io::to_csv(res.header, res.rows);
        else body = res.text;

        if (output_path.empty()) {
            out << body;
        } else {
            std::ofstream file(output_path, std::ios::binary);
            if (!file) config_error("--output", "cannot open " + output_path);
            file << body;
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            std::ofstream meta(output_path + ".meta.json", std::ios::binary);
            meta << Json{{"command", command}, {"started_utc", started_utc}, {"elapsed_seconds", elapsed},
                         {"threads", thread_count()}}
                        .dump(2)
                 << '\n';
            if (format != "text") out << res.text;
        }
        return res.code;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFail;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace tubeap::cli
