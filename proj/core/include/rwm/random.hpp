#pragma once

#include <cstdint>
#include <random>

namespace rwm {

// Seeded generator with a fixed stream discipline so draws are reproducible
// across platforms:
//   uniform()  one 64-bit engine output, top 53 bits scaled into [0, 1).
//   normal()   Box-Muller cosine branch; consumes exactly two uniform() draws,
//              u1 = 1 - uniform() in (0, 1], u2 = uniform().
// The engine is std::mt19937_64 whose output sequence is fixed by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rwm
