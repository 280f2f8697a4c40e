#include "dstree/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "dstree/bgw.hpp"
#include "dstree/error.hpp"
#include "dstree/glue.hpp"
#include "dstree/metric.hpp"

namespace dstree {

namespace {

template <class Stat>
std::vector<double> over_trees(const OffspringLaw& law, const DecorationKit& kit, std::uint64_t n, std::size_t trees,
                               double gamma, Rng& rng, Stat stat) {
  std::vector<double> out;
  const double scale = std::pow(bn_normalizer(law, n), -gamma);
  for (std::size_t t = 0; t < trees; ++t) {
    auto tree = sample_conditioned_bgw({law, Conditioning::vertices(n)}, rng);
    auto dt = glue(std::move(tree), kit, rng);
    stat(dt, scale, out);
  }
  return out;
}

}  // namespace

std::vector<double> discrete_root_distances(const OffspringLaw& law, const DecorationKit& kit, std::uint64_t n,
                                            std::size_t trees, std::size_t points_per_tree, double gamma, Rng& rng) {
  return over_trees(law, kit, n, trees, gamma, rng, [&](const DecoratedTree& dt, double s, std::vector<double>& out) {
    for (std::size_t i = 0; i < points_per_tree; ++i) out.push_back(s * dt.distance_to_root(dt.sample_point(rng)));
  });
}

std::vector<double> discrete_pair_distances(const OffspringLaw& law, const DecorationKit& kit, std::uint64_t n,
                                            std::size_t trees, std::size_t pairs_per_tree, double gamma, Rng& rng) {
  return over_trees(law, kit, n, trees, gamma, rng, [&](const DecoratedTree& dt, double s, std::vector<double>& out) {
    for (std::size_t i = 0; i < pairs_per_tree; ++i) {
      auto x = dt.sample_point(rng);
      auto y = dt.sample_point(rng);
      out.push_back(s * dt.distance(x, y));
    }
  });
}

std::vector<double> continuum_root_distances(double alpha, double gamma, const LimitKit& kit, std::size_t count,
                                             const MarginalOptions& opts, Rng& rng) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto ms = build_marginal(alpha, gamma, 1.0, 1, kit, opts, rng);
    out.push_back(ms.distance_to_root(ms.tip(0)));
  }
  return out;
}

std::vector<double> continuum_pair_distances(double alpha, double gamma, const LimitKit& kit, std::size_t count,
                                             const MarginalOptions& opts, Rng& rng) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto ms = build_marginal(alpha, gamma, 1.0, 2, kit, opts, rng);
    out.push_back(ms.distance(ms.tip(0), ms.tip(1)));
  }
  return out;
}

}  // namespace dstree

namespace dstree {

NestedDimension nested_tip_dimension(double alpha, double gamma, const LimitKit& kit,
                                     const std::vector<std::size_t>& sizes, std::size_t replicas,
                                     std::size_t window_max, const MarginalOptions& opts, Rng& rng) {
  if (sizes.empty() || !std::is_sorted(sizes.begin(), sizes.end()) || sizes.front() < 20)
    fail(Errc::ParamOutOfRange, "sizes must be increasing and at least 20");
  const double target = alpha / gamma;
  const std::size_t kmax = sizes.back();
  NestedDimension r;
  r.sizes = sizes;
  r.mean_slope.assign(sizes.size(), 0.0);
  r.slope_rmse.assign(sizes.size(), 0.0);
  r.mean_fit_rms.assign(sizes.size(), 0.0);
  for (std::size_t rep = 0; rep < replicas; ++rep) {
    auto ms = build_marginal(alpha, gamma, 1.0, kmax, kit, opts, rng);
    std::vector<MarginalPoint> pts;
    double height = 0.0;
    for (std::uint32_t j = 0; j < kmax; ++j) {
      pts.push_back(ms.tip(j));
      height = std::max(height, ms.distance_to_root(pts.back()));
    }
    auto dist = [&](std::size_t i, std::size_t j) { return ms.distance(pts[i], pts[j]); };
    std::vector<double> window;
    for (int i = 0; i < 200; ++i) {
      double eps = height * std::pow(2.0, -i / 4.0);
      std::size_t net = greedy_net_size(sizes.front(), dist, eps);
      if (net > window_max) break;
      if (net >= 10) window.push_back(eps);
    }
    std::vector<double> row;
    for (std::size_t a = 0; a < sizes.size(); ++a) {
      auto fit = box_dimension(sizes[a], dist, window);
      row.push_back(fit.slope);
      r.mean_slope[a] += fit.slope;
      r.mean_fit_rms[a] += fit.rms_residual;
      r.slope_rmse[a] += (fit.slope - target) * (fit.slope - target);
    }
    r.slopes.push_back(std::move(row));
  }
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    r.mean_slope[a] /= double(replicas);
    r.mean_fit_rms[a] /= double(replicas);
    r.slope_rmse[a] = std::sqrt(r.slope_rmse[a] / double(replicas));
  }
  return r;
}

}  // namespace dstree
