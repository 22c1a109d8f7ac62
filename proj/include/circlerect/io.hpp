#pragma once

// JSON and CSV encodings of the library's values and reports.
// Readers throw Error(SyntaxError) on malformed documents.

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "circlerect/bundle.hpp"
#include "circlerect/metric.hpp"
#include "circlerect/nets.hpp"
#include "circlerect/poly.hpp"
#include "circlerect/taylor.hpp"

namespace circlerect::io {

using nlohmann::json;

json to_json(const Vec3& v);
Vec3 vec3_from_json(const json& j);

json to_json(const SphereEq& s);
SphereEq sphere_from_json(const json& j);

json to_json(const CircleOrLine& c);
CircleOrLine curve_from_json(const json& j);

json to_json(const CircleBundle& b);
CircleBundle bundle_from_json(const json& j);

/// Accepts {"dirs":[[k,m],...]} or a bundle document.
std::vector<TangentParam> dirs_from_json(const json& j);
json dirs_to_json(const std::vector<TangentParam>& dirs);

json to_json(const RectificationReport& r);

/// {"terms":[{"i","j","num","den"}]}; integers too wide for 64 bits are
/// written as decimal strings.
json to_json(const BivarPoly& p);
BivarPoly poly_from_json(const json& j);

json to_json(const DiagnosticReport& d);
std::string_view verdict_name(Verdict v);

json to_json(const SphereNet& net);
SphereNet net_from_json(const json& j);

json to_json(const NetClassification& c);

struct CurvatureSample {
  Vec3 x;
  double K;
};
json curvature_report(MetricKind kind, const std::vector<CurvatureSample>& samples, double mean, double stddev);

/// Header "t,x,y,z,vx,vy,vz", values with 17 significant digits.
std::string geodesic_csv(const GeodesicPath& path);

/// Adds {"version":1,"seed":seed,"tolerances":{...}} to a report object.
json with_envelope(json report, std::uint64_t seed, const std::map<std::string, double>& tolerances);

/// Reads and parses a JSON file. Throws Error(SyntaxError) on I/O or parse
/// failure.
json read_json_file(const std::string& path);

}  // namespace circlerect::io
