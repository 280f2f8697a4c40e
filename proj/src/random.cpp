#include "dstree/random.hpp"

#include <cmath>

namespace dstree {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a; stable across platforms unlike std::hash.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  std::uint64_t x = seed ^ fnv1a(name);
  x ^= splitmix64(index);
  std::seed_seq seq{splitmix64(x), splitmix64(x), splitmix64(x), splitmix64(x)};
  return Rng(seq);
}

double uniform_open(Rng& rng) {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

// log of a Gamma(shape,1) variate; stays finite for tiny shapes.
double log_gamma_variate(double shape, Rng& rng) {
  if (shape < 1.0) {
    std::gamma_distribution<double> dist(shape + 1.0, 1.0);
    return std::log(dist(rng)) + std::log(uniform_open(rng)) / shape;
  }
  std::gamma_distribution<double> dist(shape, 1.0);
  return std::log(dist(rng));
}

}  // namespace

double sample_gamma(double shape, Rng& rng) {
  if (shape < 1.0) return std::exp(log_gamma_variate(shape, rng));
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(rng);
}

double sample_beta(double a, double b, Rng& rng) {
  double lx = log_gamma_variate(a, rng);
  double ly = log_gamma_variate(b, rng);
  return 1.0 / (1.0 + std::exp(ly - lx));
}

}  // namespace dstree
