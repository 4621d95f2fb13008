#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace betagate {

// Derive an independent substream seed from a master seed and a label.
// All randomness in the engine flows from one user-visible seed through
// named substreams so components can be varied independently.
uint64_t substream_seed(uint64_t master, std::string_view label);

// Deterministic RNG with explicit variate generation (no std::*_distribution,
// whose output is implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal, Marsaglia polar
  double gauss();

  // mean 1/rate
  double exponential(double rate);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Voss-McCartney pink noise: octave-spaced held white sources plus a
// per-sample white row. Unit variance (approximately), flat-topped 1/f
// spectrum over ~n_rows octaves.
class PinkNoise {
 public:
  explicit PinkNoise(uint64_t seed, int n_rows = 8);
  double next();

 private:
  Rng rng_;
  std::vector<double> rows_;
  uint64_t counter_ = 0;
  double norm_;
};

}  // namespace betagate
