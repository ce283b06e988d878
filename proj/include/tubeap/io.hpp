#ifndef TUBEAP_IO_HPP
#define TUBEAP_IO_HPP

// JSON encoding of sums, cones, point sets and reports. Parse errors name the offending JSON path.

#include "tubeap/classify.hpp"
#include "tubeap/indicator.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tubeap::io {

using Json = nlohmann::json;

/// {"dimension": p, "terms": [{"lambda": [...], "re": r, "im": s}, ...], "limit_frequencies": [[...], ...]}.
/// A term may give "frequency" for "lambda" and "coefficient": re | [re, im] for "re"/"im".
ExpSum parse_exp_sum(const Json& j, const std::string& path);
/// {"generators": [[...], ...]}
Cone parse_cone(const Json& j, const std::string& path);
/// {"points": [[...], ...], "limit_points": [[...], ...]}
PointSet parse_point_set(const Json& j, const std::string& path);
Vec parse_vector(const Json& j, const std::string& path);
std::complex<double> parse_complex(const Json& j, const std::string& path);

Json to_json(const Vec& v);
Json to_json(std::complex<double> c);
Json to_json(const ExpSum& f);
Json to_json(const Cone& c);
Json to_json(const PointSet& e);
Json to_json(const JessenEstimate& e);
Json to_json(const SecularVector& s);
Json to_json(const IndicatorEstimate& e);
Json to_json(const ZeroCountResult& r);
Json to_json(const ZeroDensity& d);
Json to_json(const Witness& w);
Json to_json(const CaseLabel& label);
Json to_json(const VerificationReport& r);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// RFC 4180 CSV with a header row.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace tubeap::io

#endif  // TUBEAP_IO_HPP
