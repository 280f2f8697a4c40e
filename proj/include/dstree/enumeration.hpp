#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dstree/offspring.hpp"
#include "dstree/rational.hpp"

namespace dstree {

using Outdegrees = std::vector<std::uint32_t>;

// All plane trees with n vertices whose outdegrees lie in `allowed` (allowed[d] != 0),
// in lexicographic order of their outdegree sequences.
std::vector<Outdegrees> enumerate_plane_trees(std::uint32_t n, const std::vector<char>& allowed);

// Conditional law of BGW(p) given n vertices, exact. p[d] = mu(d).
std::map<Outdegrees, Rational> exact_conditioned_law(const std::vector<Rational>& p, std::uint32_t n);
std::map<Outdegrees, Rational> exact_conditioned_law(const OffspringLaw& law, std::uint32_t n);
// Same, conditioned on the number of leaves; only laws with p_1 = 0 (finitely many trees).
std::map<Outdegrees, Rational> exact_leaf_conditioned_law(const std::vector<Rational>& p, std::uint32_t leaves);

// Plane trees with n leaves and no outdegree-1 vertex, counted with weight
// (k+1)^(number of internal non-root vertices).
BigInt count_marked_trees(std::uint32_t n_leaves, std::uint32_t k);
// The same count as a polynomial in q = k+1: entry m counts trees with m internal non-root vertices.
std::vector<BigInt> marked_tree_polynomial(std::uint32_t n_leaves);

// Coefficients [z^0..z^n_max] of (1 + (2k^2+4k+1)z - sqrt(z^2 - (4k+6)z + 1)) / (2(k+1)(k+2)).
std::vector<BigInt> series_from_closed_form(std::uint32_t k, std::uint32_t n_max);

}  // namespace dstree
