#pragma once
// Deterministic random number generation. std:: distributions are
// implementation-defined, so the suites use an explicit splitmix64 stream
// plus Box-Muller to keep reports byte-reproducible across toolchains.

#include <cmath>
#include <complex>
#include <cstdint>

namespace relop {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    while (u == 0.0) u = uniform();
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    have_spare_ = true;
    spare_ = r * std::sin(2.0 * M_PI * v);
    return r * std::cos(2.0 * M_PI * v);
  }

  std::complex<double> complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

  // Derive an independent stream; used to give each suite its own substream
  // so adding a check never shifts another check's draws.
  Rng fork(std::uint64_t tag) {
    Rng child(state_ ^ (0x517cc1b727220a95ull * (tag + 1)));
    child.next_u64();
    return child;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace relop
