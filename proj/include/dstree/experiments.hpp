#pragma once

#include <cstdint>
#include <vector>

#include "dstree/continuum.hpp"
#include "dstree/decorations.hpp"
#include "dstree/offspring.hpp"

namespace dstree {

// d(rho, X) b_n^-gamma for nu-random points X of decorated BGW trees conditioned on n vertices.
std::vector<double> discrete_root_distances(const OffspringLaw& law, const DecorationKit& kit, std::uint64_t n,
                                            std::size_t trees, std::size_t points_per_tree, double gamma, Rng& rng);

// Distance from the root to the tip of the first spine (a uniform-mass point) of
// independent one-spine marginals.
std::vector<double> continuum_root_distances(double alpha, double gamma, const LimitKit& kit, std::size_t count,
                                             const MarginalOptions& opts, Rng& rng);

// d(X, Y) b_n^-gamma for pairs of independent nu-random points.
std::vector<double> discrete_pair_distances(const OffspringLaw& law, const DecorationKit& kit, std::uint64_t n,
                                            std::size_t trees, std::size_t pairs_per_tree, double gamma, Rng& rng);

// Distance between the tips of the first two spines of independent two-spine marginals.
std::vector<double> continuum_pair_distances(double alpha, double gamma, const LimitKit& kit, std::size_t count,
                                             const MarginalOptions& opts, Rng& rng);

}  // namespace dstree

namespace dstree {

struct NestedDimension {
  std::vector<std::size_t> sizes;
  std::vector<double> mean_slope;    // per size, over replicas
  std::vector<double> slope_rmse;    // sqrt(mean (slope - target)^2)
  std::vector<double> mean_fit_rms;  // mean least-squares residual of the log-log fit
  std::vector<std::vector<double>> slopes;  // [replica][size]
};

// Greedy-net dimension of the first s spine tips of one marginal with max(sizes)
// spines, for every s in `sizes` (increasing). The scale window is fixed per replica:
// quarter-octave scales below the largest tip height whose net over the smallest
// sample has between 10 and `window_max` centers.
NestedDimension nested_tip_dimension(double alpha, double gamma, const LimitKit& kit,
                                     const std::vector<std::size_t>& sizes, std::size_t replicas,
                                     std::size_t window_max, const MarginalOptions& opts, Rng& rng);

}  // namespace dstree
