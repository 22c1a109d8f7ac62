#include "circlerect/io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace circlerect::io {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::SyntaxError, "malformed document: " + what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) malformed(std::string(what) + " is not a number");
  return j.get<double>();
}

json big_int(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

mpz_class big_int_from(const json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<unsigned long long>()));
  if (j.is_string()) {
    try {
      return mpz_class(j.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  malformed("expected an integer");
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 vec3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) malformed("expected a 3-vector");
  return {number(j[0], "coordinate"), number(j[1], "coordinate"), number(j[2], "coordinate")};
}

json to_json(const SphereEq& s) { return {{"a", s.a}, {"b", to_json(s.b)}, {"c", s.c}}; }

SphereEq sphere_from_json(const json& j) {
  return {number(field(j, "a"), "a"), vec3_from_json(field(j, "b")), number(field(j, "c"), "c")};
}

json to_json(const CircleOrLine& c) {
  if (const auto* circ = std::get_if<Circle>(&c)) {
    return {{"kind", "circle"}, {"center", to_json(circ->center)}, {"radius", circ->radius},
            {"normal", to_json(circ->normal)}};
  }
  const auto& line = std::get<Line>(c);
  return {{"kind", "line"}, {"point", to_json(line.point)}, {"direction", to_json(line.direction)}};
}

CircleOrLine curve_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (kind == "circle") {
    return make_circle(vec3_from_json(field(j, "center")), number(field(j, "radius"), "radius"),
                       vec3_from_json(field(j, "normal")));
  }
  if (kind == "line") return make_line(vec3_from_json(field(j, "point")), vec3_from_json(field(j, "direction")));
  malformed("unknown curve kind");
}

json to_json(const CircleBundle& b) {
  json members = json::array();
  for (const auto& mem : b.members) members.push_back({{"k", mem.dir.k}, {"m", mem.dir.m}, {"curve", to_json(mem.curve)}});
  return {{"center", to_json(b.center)}, {"members", members}};
}

CircleBundle bundle_from_json(const json& j) {
  CircleBundle b;
  b.center = vec3_from_json(field(j, "center"));
  const json& members = field(j, "members");
  if (!members.is_array()) malformed("\"members\" is not an array");
  for (const auto& mem : members) {
    b.members.push_back({{number(field(mem, "k"), "k"), number(field(mem, "m"), "m")}, curve_from_json(field(mem, "curve"))});
  }
  return b;
}

std::vector<TangentParam> dirs_from_json(const json& j) {
  std::vector<TangentParam> out;
  if (j.is_object() && j.contains("dirs")) {
    const json& dirs = j.at("dirs");
    if (!dirs.is_array()) malformed("\"dirs\" is not an array");
    for (const auto& d : dirs) {
      if (!d.is_array() || d.size() != 2) malformed("direction is not a [k, m] pair");
      out.push_back({number(d[0], "k"), number(d[1], "m")});
    }
    return out;
  }
  for (const auto& mem : bundle_from_json(j).members) out.push_back(mem.dir);
  return out;
}

json dirs_to_json(const std::vector<TangentParam>& dirs) {
  json arr = json::array();
  for (const auto& d : dirs) arr.push_back({d.k, d.m});
  return {{"dirs", arr}};
}

json to_json(const RectificationReport& r) {
  return {{"second_point", r.second_point ? to_json(*r.second_point) : json(nullptr)},
          {"max_residual", r.max_residual},
          {"residuals", r.per_circle_residual},
          {"passed", r.passed}};
}

json to_json(const BivarPoly& p) {
  json terms = json::array();
  for (const auto& [mono, c] : p.terms()) {
    terms.push_back({{"i", mono.first}, {"j", mono.second}, {"num", big_int(c.get_num())}, {"den", big_int(c.get_den())}});
  }
  return {{"terms", terms}};
}

BivarPoly poly_from_json(const json& j) {
  const json& terms = field(j, "terms");
  if (!terms.is_array()) malformed("\"terms\" is not an array");
  BivarPoly p;
  for (const auto& t : terms) {
    const json& i = field(t, "i");
    const json& jj = field(t, "j");
    if (!i.is_number_integer() || !jj.is_number_integer() || i.get<long long>() < 0 || jj.get<long long>() < 0) {
      malformed("exponents must be non-negative integers");
    }
    const mpz_class den = big_int_from(field(t, "den"));
    if (den == 0) throw Error(Errc::ZeroDenominator, "zero denominator in polynomial term");
    Rational c(big_int_from(field(t, "num")), den);
    c.canonicalize();
    p.add_term(i.get<int>(), jj.get<int>(), c);
  }
  return p;
}

std::string_view verdict_name(Verdict v) { return v == Verdict::Rectifiable ? "Rectifiable" : "NotRectifiable"; }

json to_json(const DiagnosticReport& d) {
  json violated = json::array();
  for (auto c : d.violated) violated.push_back(constraint_name(c));
  const auto& r = d.fit_residual;
  const auto& c = d.recovered;
  return {{"fit_residuals",
           {{"phi2_deg3", r[0]}, {"psi2_deg3", r[1]}, {"phi3_deg5", r[2]}, {"psi3_deg5", r[3]}, {"phi4_deg7", r[4]},
            {"psi4_deg7", r[5]}}},
          {"remainders", {{"phi2", d.remainder_phi2}, {"psi2", d.remainder_psi2}}},
          {"recovered", {{"a", c.a}, {"b", c.b}, {"c", c.c}, {"d", c.d}, {"e", c.e}, {"g", c.g}}},
          {"alpha", d.alpha},
          {"beta", d.beta},
          {"gamma", d.gamma},
          {"violated", violated},
          {"verdict", verdict_name(d.verdict)}};
}

json to_json(const SphereNet& net) {
  json spheres = json::array();
  for (const auto& s : net.basis()) spheres.push_back(to_json(s));
  return {{"spheres", spheres}};
}

SphereNet net_from_json(const json& j) {
  const json& spheres = field(j, "spheres");
  if (!spheres.is_array() || spheres.size() != 4) malformed("a net needs exactly four spheres");
  return SphereNet({sphere_from_json(spheres[0]), sphere_from_json(spheres[1]), sphere_from_json(spheres[2]),
                    sphere_from_json(spheres[3])});
}

json to_json(const NetClassification& c) {
  return {{"class", geometry_name(c.cls)}, {"S0", to_json(c.complement)}, {"disc", c.disc}};
}

json curvature_report(MetricKind kind, const std::vector<CurvatureSample>& samples, double mean, double stddev) {
  json arr = json::array();
  for (const auto& s : samples) arr.push_back({{"x", to_json(s.x)}, {"K", s.K}});
  return {{"metric", metric_name(kind)}, {"samples", arr}, {"mean", mean}, {"stddev", stddev}};
}

std::string geodesic_csv(const GeodesicPath& path) {
  std::string out = "t,x,y,z,vx,vy,vz\n";
  for (const auto& s : path.samples) {
    out += fmt17(s.t);
    for (int i = 0; i < 3; ++i) out += "," + fmt17(s.x[i]);
    for (int i = 0; i < 3; ++i) out += "," + fmt17(s.v[i]);
    out += "\n";
  }
  return out;
}

json with_envelope(json report, std::uint64_t seed, const std::map<std::string, double>& tolerances) {
  report["version"] = 1;
  report["seed"] = seed;
  report["tolerances"] = tolerances;
  return report;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::SyntaxError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::SyntaxError, "'" + path + "': " + e.what());
  }
}

}  // namespace circlerect::io
