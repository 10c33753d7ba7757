#pragma once

//
// Seeded random streams and the innovation distributions used by the
// simulators.  Streams are mt19937_64 engines whose 64-bit seed is expanded
// through SplitMix64, so stream k of a run is always `base_seed + k` and two
// runs with the same seed produce bit-identical draws on any platform.
// Distribution transforms (uniform, normal, gamma, standardized t) are done
// in-repo because the std:: distributions are not bit-reproducible across
// standard libraries.
//

#include <cmath>
#include <cstdint>
#include <random>

#include "tsrobust/errors.hpp"

namespace tsr {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    engine_.seed(splitmix64(s));
  }

  // Stream for replication `index` of a run seeded with `base`.
  static Rng stream(std::uint64_t base, std::uint64_t index) {
    return Rng(base + index);
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // uniform on [0, 1)
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // uniform on (0, 1], safe to feed into log()
  double uniform_pos() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, cosine branch only; two uniforms per draw keeps the stream
  // layout independent of call history.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Marsaglia-Tsang; valid for shape >= 1 which covers every caller here.
  double gamma(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform_pos();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
        return d * v;
      }
    }
  }

  double chi_squared(double df) { return 2.0 * gamma(0.5 * df); }

  // Student t rescaled to unit variance: t * sqrt((df-2)/df), df > 2.
  double student_t_standardized(double df) {
    const double z = normal();
    const double v = chi_squared(df);
    const double t = z / std::sqrt(v / df);
    return t * std::sqrt((df - 2.0) / df);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

struct InnovationDist {
  enum class Kind { Gaussian, StudentTStandardized };

  Kind kind = Kind::Gaussian;
  double sigma = 1.0;  // gaussian sd
  double df = 5.0;     // t degrees of freedom, > 2

  static InnovationDist gaussian(double sigma = 1.0) {
    if (sigma <= 0.0) throw InvalidInput("gaussian innovation needs sigma > 0");
    return InnovationDist{Kind::Gaussian, sigma, 0.0};
  }

  static InnovationDist student_t(double df = 5.0) {
    if (df <= 2.0) throw InvalidInput("standardized t needs df > 2");
    return InnovationDist{Kind::StudentTStandardized, 1.0, df};
  }

  double draw(Rng& rng) const {
    switch (kind) {
      case Kind::Gaussian:
        return sigma * rng.normal();
      case Kind::StudentTStandardized:
        return rng.student_t_standardized(df);
    }
    return 0.0;
  }
};

}  // namespace tsr
