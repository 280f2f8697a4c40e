#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dstree {

using Rng = std::mt19937_64;

// Independent generator for a named consumer; same (seed, name) -> same stream.
Rng make_stream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

// Uniform on the open interval (0,1).
double uniform_open(Rng& rng);

double sample_gamma(double shape, Rng& rng);
double sample_beta(double a, double b, Rng& rng);

}  // namespace dstree
