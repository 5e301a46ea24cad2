#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace relaymatch {

// splitmix64; used to derive independent sub-seeds from (seed, tag) pairs so
// that topology, channel and perturbation streams never alias.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled distributions. The standard distributions are
// implementation-defined, which would break byte-identical reruns across
// toolchains; the engine itself is fully specified.
class Random {
 public:
  explicit Random(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform() * (static_cast<double>(hi) - lo + 1));
  }

  // standard normal, Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // unit-mean exponential
  double exponential() {
    double u = uniform();
    while (u >= 1.0) u = uniform();
    return -std::log1p(-u);
  }

  // uniform inside the L2 ball of given radius; on_boundary picks the sphere
  // instead (worst-case stress mode).
  std::vector<double> ball(std::size_t dim, double radius, bool on_boundary = false) {
    std::vector<double> v(dim);
    if (dim == 0 || radius <= 0.0) return std::vector<double>(dim, 0.0);
    double norm2 = 0.0;
    for (auto& x : v) {
      x = normal();
      norm2 += x * x;
    }
    if (norm2 == 0.0) return std::vector<double>(dim, 0.0);
    const double scale =
        radius * (on_boundary ? 1.0 : std::pow(uniform(), 1.0 / static_cast<double>(dim))) /
        std::sqrt(norm2);
    for (auto& x : v) x *= scale;
    return v;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace relaymatch
