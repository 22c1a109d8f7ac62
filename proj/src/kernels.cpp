#include "circlerect/kernels.hpp"

#include <exception>

namespace circlerect::kernels {

namespace {

// Exceptions cannot leave an OpenMP region; each is captured by index and the
// lowest-index one rethrown, matching what the serial loop would throw.
struct Parallel {
  template <typename F>
  void operator()(std::size_t n, F&& body) const {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
};

struct Serial {
  template <typename F>
  void operator()(std::size_t n, F&& body) const {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
};

template <typename Loop>
std::vector<std::optional<double>> rectification_impl(const CircleBundle& bundle, const Inversion& inv,
                                                      std::size_t samples, double half_span) {
  std::vector<std::optional<double>> out(bundle.members.size());
  Loop{}(out.size(), [&](std::size_t i) {
    out[i] = member_line_residual(bundle.members[i].curve, inv, samples, half_span);
  });
  return out;
}

template <typename Loop>
std::vector<double> curvature_impl(const MetricField& metric, std::span<const CurvatureProbe> probes) {
  std::vector<double> out(probes.size());
  Loop{}(out.size(), [&](std::size_t i) { out[i] = sectional_curvature(metric, probes[i].x, probes[i].u, probes[i].v); });
  return out;
}

template <typename Loop>
std::vector<GeodesicPath> geodesic_impl(const MetricField& metric, std::span<const GeodesicStart> starts, double T,
                                        std::size_t n) {
  std::vector<GeodesicPath> out(starts.size());
  Loop{}(out.size(), [&](std::size_t i) { out[i] = geodesic_integrate(metric, starts[i].x0, starts[i].v0, T, n); });
  return out;
}

template <typename Loop>
std::vector<double> degeneracy_impl(const SphereNet& net, std::span<const Vec3> points) {
  std::vector<double> out(points.size());
  Loop{}(out.size(), [&](std::size_t i) { out[i] = degeneracy_determinant(net, points[i]); });
  return out;
}

}  // namespace

std::vector<std::optional<double>> rectification_residuals(const CircleBundle& bundle, const Inversion& inv,
                                                           std::size_t samples, double line_half_span) {
  return rectification_impl<Parallel>(bundle, inv, samples, line_half_span);
}
std::vector<double> curvature_sweep(const MetricField& metric, std::span<const CurvatureProbe> probes) {
  return curvature_impl<Parallel>(metric, probes);
}
std::vector<GeodesicPath> geodesic_sweep(const MetricField& metric, std::span<const GeodesicStart> starts, double T,
                                         std::size_t n) {
  return geodesic_impl<Parallel>(metric, starts, T, n);
}
std::vector<double> degeneracy_sweep(const SphereNet& net, std::span<const Vec3> points) {
  return degeneracy_impl<Parallel>(net, points);
}

namespace reference {

std::vector<std::optional<double>> rectification_residuals(const CircleBundle& bundle, const Inversion& inv,
                                                           std::size_t samples, double line_half_span) {
  return rectification_impl<Serial>(bundle, inv, samples, line_half_span);
}
std::vector<double> curvature_sweep(const MetricField& metric, std::span<const CurvatureProbe> probes) {
  return curvature_impl<Serial>(metric, probes);
}
std::vector<GeodesicPath> geodesic_sweep(const MetricField& metric, std::span<const GeodesicStart> starts, double T,
                                         std::size_t n) {
  return geodesic_impl<Serial>(metric, starts, T, n);
}
std::vector<double> degeneracy_sweep(const SphereNet& net, std::span<const Vec3> points) {
  return degeneracy_impl<Serial>(net, points);
}

}  // namespace reference

}  // namespace circlerect::kernels
