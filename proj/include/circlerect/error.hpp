#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace circlerect {

enum class Errc {
  // geom
  NonPositiveRadius,
  NotRealSphere,
  CenterSingularity,
  Disjoint,
  Tangent,
  Identical,
  CoincidentPoints,
  // bundle
  ChartDegenerate,
  MemberDegenerate,
  CountMismatch,
  FewerThanThreeCircles,
  NearParallelImages,
  AllSamplesNearCenter,
  TooFewSamples,
  // taylor
  ZeroDivisor,
  NonInvertibleLeading,
  NewtonDivergence,
  IllConditionedStencil,
  DegenerateGrid,
  DegreeTooHigh,
  // nets
  RankDeficientNet,
  BasePoint,
  BasePointHit,
  // metric
  OutOfDomain,
  SingularMetric,
  DegeneratePlane,
  MapSingular,
  UnsupportedClass,
  TooFewPoints,
  DegenerateCloud,
  // parser
  SyntaxError,
  ZeroDenominator,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace circlerect
