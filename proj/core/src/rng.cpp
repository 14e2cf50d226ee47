#include "secofdm/rng.hpp"

#include <cmath>

namespace secofdm {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ splitmix64(index + 0x9e3779b97f4a7c15ull));
}

double Rng::uniform() {
  // Top 53 bits give a uniform dyadic rational in [0, 1).
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (cached_) {
    cached_ = false;
    return cache_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cache_ = v * f;
  cached_ = true;
  return u * f;
}

cxd Rng::cgaussian(double variance) {
  const double s = std::sqrt(variance * 0.5);
  const double re = gaussian();
  const double im = gaussian();
  return cxd(s * re, s * im);
}

std::vector<cxd> Rng::cgaussian_vector(std::size_t n, double variance) {
  std::vector<cxd> v(n);
  for (cxd& z : v) z = cgaussian(variance);
  return v;
}

int Rng::bit() {
  if (bits_left_ == 0) {
    bitbuf_ = eng_();
    bits_left_ = 64;
  }
  const int b = static_cast<int>(bitbuf_ & 1u);
  bitbuf_ >>= 1;
  --bits_left_;
  return b;
}

}  // namespace secofdm
