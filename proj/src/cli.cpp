#include "circlerect/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "circlerect/bundle.hpp"
#include "circlerect/expr.hpp"
#include "circlerect/io.hpp"
#include "circlerect/kernels.hpp"
#include "circlerect/metric.hpp"
#include "circlerect/nets.hpp"
#include "circlerect/rng.hpp"
#include "circlerect/taylor.hpp"

namespace circlerect {

namespace {

using io::json;

// Stream labels for SplitRng::split.
enum Stream : std::uint64_t { kDirs = 1, kGrid, kPoints, kPlanes, kGeodesics };

constexpr double kTaylorTol = 1e-6;
constexpr double kCurvatureTol = 1e-3;
constexpr double kCircleFitTol = 1e-6;
constexpr double kLineResidualTol = 1e-7;
constexpr double kDirRange = 2.0;
constexpr double kGeodesicBall = 0.7;
constexpr double kCurvatureBall = 0.8;
constexpr double kGeodesicT = 2.0;
constexpr std::size_t kGeodesicSteps = 2000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Emitter {
  std::ostream& out;
  std::string path;

  void operator()(const std::string& text) const {
    if (path.empty()) {
      out << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
  }
  void operator()(const json& j) const { (*this)(j.dump(2) + "\n"); }
};

Vec3 parse_triple(const std::string& text, const char* what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (vals.size() != 3) throw UsageError(std::string(what) + " expects three comma-separated numbers");
  return {vals[0], vals[1], vals[2]};
}

std::vector<TangentParam> random_dirs(SplitRng rng, std::size_t n) {
  std::vector<TangentParam> dirs(n);
  for (auto& d : dirs) {
    d.k = rng.uniform(-kDirRange, kDirRange);
    d.m = rng.uniform(-kDirRange, kDirRange);
  }
  return dirs;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::vector<kernels::CurvatureProbe> curvature_probes(SplitRng rng, std::size_t points, std::size_t planes) {
  SplitRng pos = rng.split(kPoints);
  SplitRng dir = rng.split(kPlanes);
  std::vector<kernels::CurvatureProbe> probes;
  for (std::size_t i = 0; i < points; ++i) {
    const Vec3 x = pos.in_ball(kCurvatureBall);
    for (std::size_t p = 0; p < planes; ++p) {
      Vec3 u;
      Vec3 v;
      do {
        u = dir.unit_vector();
        v = dir.unit_vector();
      } while (u.cross(v).norm() < 1e-3);
      probes.push_back({x, u, v});
    }
  }
  return probes;
}

// ---- bundle ---------------------------------------------------------------

int bundle_gen(const std::string& a_src, const std::string& b_src, std::size_t n, std::uint64_t seed,
               const Emitter& emit) {
  const BivarPoly A = parse_poly(a_src);
  const BivarPoly B = parse_poly(b_src);
  const auto dirs = random_dirs(SplitRng(seed).split(kDirs), n);
  json doc = io::to_json(bundle_from_AB(A, B, dirs));
  doc["A"] = A.to_string();
  doc["B"] = B.to_string();
  emit(io::with_envelope(doc, seed, {}));
  return kExitPass;
}

int bundle_rectify(const std::string& path, double tol, std::size_t samples, const Emitter& emit) {
  const CircleBundle b = io::bundle_from_json(io::read_json_file(path));
  const RectificationReport rep = rectify_bundle(b, samples, tol);
  emit(io::with_envelope(io::to_json(rep), 0, {{"tol", tol}}));
  return rep.passed ? kExitPass : kExitFail;
}

int bundle_genericity(const std::string& path, const Emitter& emit) {
  const auto dirs = io::dirs_from_json(io::read_json_file(path));
  if (dirs.size() != 54) throw UsageError("genericity needs exactly 54 directions, got " + std::to_string(dirs.size()));
  const bool generic = is_generic_54(dirs);
  const auto sv = genericity_spectrum(dirs);
  json doc{{"generic", generic}, {"singular_values", sv}};
  emit(io::with_envelope(doc, 0, {{"rank_rel", 1e-10}}));
  return generic ? kExitPass : kExitFail;
}

// ---- taylor ---------------------------------------------------------------

json sextet_json(const TaylorSextet& s) {
  return {{"phi2", s.phi2.to_string()}, {"phi3", s.phi3.to_string()}, {"phi4", s.phi4.to_string()},
          {"psi2", s.psi2.to_string()}, {"psi3", s.psi3.to_string()}, {"psi4", s.psi4.to_string()}};
}

int taylor_verify(const std::string& a_src, const std::string& b_src, std::size_t grid_n, std::uint64_t seed,
                  const Emitter& emit) {
  const BivarPoly A = parse_poly(a_src);
  const BivarPoly B = parse_poly(b_src);
  if (grid_n < kMinDiagnosticGrid) throw UsageError("--grid must be at least 54");

  const TaylorSextet sextet = closed_taylor(A, B);
  const auto [id_phi, id_psi] = third_order_identity_residuals(A, B);
  const bool identities = id_phi.is_zero() && id_psi.is_zero();

  const BivarPoly f = fundamental_factor();
  bool divisible = true;
  for (const BivarPoly* p : {&sextet.phi2, &sextet.phi3, &sextet.phi4, &sextet.psi2, &sextet.psi3, &sextet.psi4}) {
    divisible = divisible && poly_divrem(*p, f).remainder.is_zero();
  }

  const auto grid = random_dirs(SplitRng(seed).split(kGrid), grid_n);
  const CircleBundle bundle = bundle_from_AB(A, B, grid);
  double numeric_err = 0.0;
  for (const auto& mem : bundle.members) {
    const TaylorEstimate est = numeric_taylor(mem.curve, mem.dir);
    const TaylorEstimate exact = evaluate(sextet, mem.dir.k, mem.dir.m);
    numeric_err = std::max(numeric_err, taylor_relative_error(est, exact));
  }

  const DiagnosticReport diag = rectifiability_diagnostic([&](double k, double m) { return A.eval(k, m); },
                                                          [&](double k, double m) { return B.eval(k, m); }, grid);

  json symmetry = nullptr;
  if (A.degree() <= 1 && B.degree() <= 1) {
    symmetry = json::array();
    for (auto c : symmetry_check(A, B)) symmetry.push_back(constraint_name(c));
  }

  json doc{{"A", A.to_string()},
           {"B", B.to_string()},
           {"closed", sextet_json(sextet)},
           {"identities_zero", identities},
           {"divisible_by_f", divisible},
           {"numeric_max_relative_error", numeric_err},
           {"symmetry_violations", symmetry},
           {"diagnostic", io::to_json(diag)},
           {"verdict", io::verdict_name(diag.verdict)}};
  emit(io::with_envelope(doc, seed, {{"numeric", kTaylorTol}, {"diagnostic", kDiagnosticTol}}));
  const bool pass = identities && divisible && numeric_err < kTaylorTol && diag.verdict == Verdict::Rectifiable;
  return pass ? kExitPass : kExitFail;
}

// ---- net ------------------------------------------------------------------

int net_classify(const std::string& path, const Emitter& emit) {
  const SphereNet net = io::net_from_json(io::read_json_file(path));
  emit(io::with_envelope(io::to_json(classify_net_detailed(net)), 0, {{"tau", kClassifyTau}}));
  return kExitPass;
}

int net_degenerate(const std::string& path, std::size_t samples, double radius, std::uint64_t seed,
                   const Emitter& emit) {
  const SphereNet net = io::net_from_json(io::read_json_file(path));
  SplitRng rng = SplitRng(seed).split(kPoints);
  std::vector<Vec3> pts(samples);
  for (auto& p : pts) p = Vec3(rng.uniform(-radius, radius), rng.uniform(-radius, radius), rng.uniform(-radius, radius));
  const auto dets = kernels::degeneracy_sweep(net, pts);
  std::string csv = "x,y,z,det,degenerate\n";
  char buf[160];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", pts[i][0], pts[i][1], pts[i][2], dets[i],
                  degenerate_test(net, pts[i]) ? 1 : 0);
    csv += buf;
  }
  emit(csv);
  return kExitPass;
}

// ---- metric ---------------------------------------------------------------

int metric_geodesic(const std::string& name, const std::string& x0, const std::string& v0, double T,
                    std::size_t steps, const Emitter& emit, std::ostream& err) {
  const MetricField metric = metric_field(parse_metric(name));
  const GeodesicPath path =
      geodesic_integrate(metric, parse_triple(x0, "--x0"), parse_triple(v0, "--v0"), T, steps);
  if (path.truncated()) {
    err << "geodesic stopped early (" << geodesic_stop_name(path.stop) << ") at t = " << path.samples.back().t << "\n";
  }
  emit(io::geodesic_csv(path));
  return kExitPass;
}

int metric_curvature(const std::string& name, std::size_t samples, std::uint64_t seed, const Emitter& emit) {
  const MetricField metric = metric_field(parse_metric(name));
  const auto probes = curvature_probes(SplitRng(seed), samples, 1);
  const auto ks = kernels::curvature_sweep(metric, probes);
  std::vector<io::CurvatureSample> rows;
  for (std::size_t i = 0; i < ks.size(); ++i) rows.push_back({probes[i].x, ks[i]});
  const double mean = mean_of(ks);
  const double sd = stddev_of(ks);
  emit(io::with_envelope(io::curvature_report(metric.kind, rows, mean, sd), seed, {{"curvature", kCurvatureTol}}));
  const bool pass = std::abs(mean - metric.expected_curvature()) < kCurvatureTol && sd < kCurvatureTol;
  return pass ? kExitPass : kExitFail;
}

int metric_check_beltrami(const std::string& name, std::size_t n_geodesics, std::size_t n_points,
                          std::uint64_t seed, const Emitter& emit) {
  const MetricKind kind = parse_metric(name);
  const MetricField metric = metric_field(kind);
  const SphereNet net = straightening_net(kind);
  SplitRng rng(seed);

  SplitRng g = rng.split(kGeodesics);
  std::vector<kernels::GeodesicStart> starts(n_geodesics);
  for (auto& s : starts) {
    s.x0 = g.in_ball(kGeodesicBall);
    s.v0 = g.unit_vector();
  }
  const auto paths = kernels::geodesic_sweep(metric, starts, kGeodesicT, kGeodesicSteps);
  double worst_fit = 0.0;
  double worst_line = 0.0;
  std::size_t truncated = 0;
  json geo = json::array();
  for (const auto& p : paths) {
    std::vector<Vec3> pts;
    pts.reserve(p.samples.size());
    for (const auto& s : p.samples) pts.push_back(s.x);
    double fit = std::numeric_limits<double>::infinity();
    double line = std::numeric_limits<double>::infinity();
    if (pts.size() >= 6) {
      fit = circle_fit(pts).rms;
      line = projective_line_residual(net, pts);
    }
    worst_fit = std::max(worst_fit, fit);
    worst_line = std::max(worst_line, line);
    truncated += p.truncated() ? 1 : 0;
    geo.push_back({{"samples", p.samples.size()}, {"stop", geodesic_stop_name(p.stop)}, {"circle_rms", fit},
                   {"line_residual", line}});
  }

  const auto probes = curvature_probes(rng, n_points, 3);
  const auto ks = kernels::curvature_sweep(metric, probes);
  const double mean = mean_of(ks);
  const double sd = stddev_of(ks);

  const bool circles = worst_fit < kCircleFitTol;
  const bool lines = worst_line < kLineResidualTol;
  const bool constant = std::abs(mean - metric.expected_curvature()) < kCurvatureTol && sd < kCurvatureTol;
  json doc{{"metric", metric_name(kind)},
           {"geodesics", geo},
           {"max_circle_rms", worst_fit},
           {"max_line_residual", worst_line},
           {"truncated_geodesics", truncated},
           {"curvature", {{"expected", metric.expected_curvature()}, {"mean", mean}, {"stddev", sd}, {"samples", ks.size()}}},
           {"checks", {{"geodesics_are_circles", circles}, {"images_are_lines", lines}, {"constant_curvature", constant}}},
           {"passed", circles && lines && constant}};
  emit(io::with_envelope(doc, seed,
                         {{"circle_rms", kCircleFitTol}, {"line_residual", kLineResidualTol},
                          {"curvature", kCurvatureTol}, {"energy_guard", kGeodesicEnergyGuard}}));
  return circles && lines && constant ? kExitPass : kExitFail;
}

bool is_input_error(Errc c) {
  switch (c) {
    case Errc::SyntaxError:
    case Errc::ZeroDenominator:
    case Errc::CountMismatch:
    case Errc::UnsupportedClass:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rectifiable circle bundles, sphere nets and circular-geodesic metrics", "circlerect"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string output;
  std::uint64_t seed = 0;
  auto add_output = [&](CLI::App* c) { c->add_option("-o,--output", output, "output file (default: stdout)"); };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", seed, "random seed")->capture_default_str(); };
  Emitter emit{out, {}};

  std::string a_src;
  std::string b_src;
  std::string file;
  std::size_t count = 64;
  double tol = kDefaultBundleTol;

  auto* bundle = app.add_subcommand("bundle", "circle bundles through the origin");
  bundle->require_subcommand(1);
  auto* gen = bundle->add_subcommand("gen", "generate a bundle from A(k,m), B(k,m)");
  gen->add_option("--A", a_src, "polynomial A(k,m)")->required();
  gen->add_option("--B", b_src, "polynomial B(k,m)")->required();
  gen->add_option("--n", count, "number of directions, uniform in [-2,2]^2")->required();
  add_seed(gen);
  add_output(gen);
  gen->callback([&] { action = [&] { return bundle_gen(a_src, b_src, count, seed, emit); }; });

  auto* rect = bundle->add_subcommand("rectify", "find the second common point and verify the rectifying inversion");
  rect->add_option("bundle", file, "bundle JSON")->required();
  rect->add_option("--tol", tol, "tolerance")->capture_default_str();
  rect->add_option("--samples", count, "samples per member")->capture_default_str();
  add_output(rect);
  rect->callback([&] { action = [&] { return bundle_rectify(file, tol, count, emit); }; });

  auto* genericity = bundle->add_subcommand("genericity", "54-line rank test");
  genericity->add_option("input", file, "bundle JSON or dirs JSON")->required();
  add_output(genericity);
  genericity->callback([&] { action = [&] { return bundle_genericity(file, emit); }; });

  auto* taylor = app.add_subcommand("taylor", "Taylor coefficients of generated bundles");
  taylor->require_subcommand(1);
  auto* verify = taylor->add_subcommand("verify", "closed vs numeric, identities, divisibility, diagnostic");
  verify->add_option("--A", a_src, "polynomial A(k,m)")->required();
  verify->add_option("--B", b_src, "polynomial B(k,m)")->required();
  verify->add_option("--grid", count, "grid size (>= 54)")->capture_default_str();
  add_seed(verify);
  add_output(verify);
  verify->callback([&] { action = [&] { return taylor_verify(a_src, b_src, count, seed, emit); }; });

  auto* net = app.add_subcommand("net", "nets of spheres");
  net->require_subcommand(1);
  auto* classify = net->add_subcommand("classify", "hyperbolic / euclidean / elliptic");
  classify->add_option("net", file, "net JSON")->required();
  add_output(classify);
  classify->callback([&] { action = [&] { return net_classify(file, emit); }; });

  double radius = 2.0;
  auto* degenerate = net->add_subcommand("degenerate", "sample the degeneracy determinant");
  degenerate->add_option("net", file, "net JSON")->required();
  degenerate->add_option("--samples", count, "sample count")->required();
  degenerate->add_option("--radius", radius, "half-width of the sampling cube")->capture_default_str();
  add_seed(degenerate);
  add_output(degenerate);
  degenerate->callback([&] { action = [&] { return net_degenerate(file, count, radius, seed, emit); }; });

  auto* metric = app.add_subcommand("metric", "circular-geodesic metrics");
  metric->require_subcommand(1);
  std::string metric_name_arg;
  std::string x0;
  std::string v0;
  double T = 1.0;
  std::size_t steps = 1000;
  auto* geodesic = metric->add_subcommand("geodesic", "integrate one geodesic to CSV");
  geodesic->add_option("--metric", metric_name_arg, "metric name")->required();
  geodesic->add_option("--x0", x0, "start point a,b,c")->required();
  geodesic->add_option("--v0", v0, "start velocity a,b,c")->required();
  geodesic->add_option("--T", T, "time span")->required();
  geodesic->add_option("--steps", steps, "RK4 steps")->required();
  add_output(geodesic);
  geodesic->callback(
      [&] { action = [&] { return metric_geodesic(metric_name_arg, x0, v0, T, steps, emit, err); }; });

  auto* curvature = metric->add_subcommand("curvature", "sectional curvature at random points and planes");
  curvature->add_option("--metric", metric_name_arg, "metric name")->required();
  curvature->add_option("--samples", count, "sample count")->required();
  add_seed(curvature);
  add_output(curvature);
  curvature->callback([&] { action = [&] { return metric_curvature(metric_name_arg, count, seed, emit); }; });

  std::size_t n_geodesics = 50;
  std::size_t n_points = 50;
  auto* beltrami = metric->add_subcommand("check-beltrami", "geodesic circles, straightened images, constant curvature");
  beltrami->add_option("--metric", metric_name_arg, "metric name")->required();
  beltrami->add_option("--geodesics", n_geodesics, "geodesic count")->capture_default_str();
  beltrami->add_option("--points", n_points, "curvature points (3 planes each)")->capture_default_str();
  add_seed(beltrami);
  add_output(beltrami);
  beltrami->callback(
      [&] { action = [&] { return metric_check_beltrami(metric_name_arg, n_geodesics, n_points, seed, emit); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  emit.path = output;
  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitUsage : kExitFail;
  }
}

}  // namespace circlerect
