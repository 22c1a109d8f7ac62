#pragma once

// Data-parallel batch sweeps. Each kernel writes results by index, so the
// OpenMP versions return exactly what the serial versions in `reference`
// return, independent of thread count or scheduling.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "circlerect/bundle.hpp"
#include "circlerect/metric.hpp"
#include "circlerect/nets.hpp"

namespace circlerect::kernels {

struct CurvatureProbe {
  Vec3 x;
  Vec3 u;
  Vec3 v;
};

struct GeodesicStart {
  Vec3 x0;
  Vec3 v0;
};

/// Per-member line residual of the inverted samples (nullopt when every
/// sample of that member was excluded near the center).
std::vector<std::optional<double>> rectification_residuals(const CircleBundle& bundle, const Inversion& inv,
                                                           std::size_t samples, double line_half_span);

std::vector<double> curvature_sweep(const MetricField& metric, std::span<const CurvatureProbe> probes);

std::vector<GeodesicPath> geodesic_sweep(const MetricField& metric, std::span<const GeodesicStart> starts, double T,
                                         std::size_t n);

std::vector<double> degeneracy_sweep(const SphereNet& net, std::span<const Vec3> points);

namespace reference {

std::vector<std::optional<double>> rectification_residuals(const CircleBundle& bundle, const Inversion& inv,
                                                           std::size_t samples, double line_half_span);
std::vector<double> curvature_sweep(const MetricField& metric, std::span<const CurvatureProbe> probes);
std::vector<GeodesicPath> geodesic_sweep(const MetricField& metric, std::span<const GeodesicStart> starts, double T,
                                         std::size_t n);
std::vector<double> degeneracy_sweep(const SphereNet& net, std::span<const Vec3> points);

}  // namespace reference

}  // namespace circlerect::kernels
