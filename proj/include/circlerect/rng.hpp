#pragma once

// SplitMix64 with stream splitting: every consumer derives its own child
// stream from (seed, label), so adding a draw in one place never shifts the
// numbers another place sees.

#include <cmath>
#include <cstdint>

#include "circlerect/geom.hpp"

namespace circlerect {

class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  SplitRng split(std::uint64_t label) const {
    SplitRng child(state_ ^ (label * 0xd1342543de82ef95ULL));
    child.next();
    return child;
  }

  /// [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in the open ball of the given radius.
  Vec3 in_ball(double radius) {
    for (;;) {
      const Vec3 p(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
      if (p.squaredNorm() < 1.0) return radius * p;
    }
  }

  /// Uniform on the unit sphere.
  Vec3 unit_vector() {
    for (;;) {
      const Vec3 p(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
      const double n2 = p.squaredNorm();
      if (n2 > 1e-4 && n2 < 1.0) return p / std::sqrt(n2);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace circlerect
