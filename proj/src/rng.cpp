#include "betagate/rng.hpp"

#include <cmath>

namespace betagate {

namespace {

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t substream_seed(uint64_t master, std::string_view label) {
  return splitmix64(splitmix64(master) ^ fnv1a64(label));
}

double Rng::gauss() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double Rng::exponential(double rate) {
  // inverse CDF; uniform() < 1 so the log argument is positive
  return -std::log(1.0 - uniform()) / rate;
}

PinkNoise::PinkNoise(uint64_t seed, int n_rows)
    : rng_(seed), rows_(static_cast<size_t>(n_rows), 0.0) {
  for (auto& r : rows_) r = rng_.gauss();
  norm_ = 1.0 / std::sqrt(static_cast<double>(n_rows) + 1.0);
}

double PinkNoise::next() {
  ++counter_;
  // row index = number of trailing zeros, one row per octave
  uint64_t c = counter_;
  size_t row = 0;
  while ((c & 1ull) == 0 && row + 1 < rows_.size()) {
    c >>= 1;
    ++row;
  }
  rows_[row] = rng_.gauss();
  double sum = rng_.gauss();  // per-sample white row
  for (double r : rows_) sum += r;
  return sum * norm_;
}

}  // namespace betagate
