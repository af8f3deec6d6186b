#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace secreg {

// splitmix64; used to derive independent per-trial seeds from a master seed
// so results do not depend on evaluation order.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 with platform-independent draws (the std distributions are
// implementation defined, so sampling is done by hand here).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Index into a normalized pmf by CDF inversion.
  std::size_t sample_pmf(std::span<const double> pmf) {
    double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
      acc += pmf[i];
      if (u < acc) return i;
    }
    return pmf.empty() ? 0 : pmf.size() - 1;
  }

  // Dirichlet(1) point on the k-simplex via normalized exponentials.
  std::vector<double> dirichlet(std::size_t k) {
    std::vector<double> x(k);
    double sum = 0.0;
    for (auto& v : x) {
      double u = uniform();
      if (u <= 0.0) u = 0x1.0p-53;
      v = -std::log(u);
      sum += v;
    }
    for (auto& v : x) v /= sum;
    return x;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace secreg
