#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "dstree/continuum.hpp"
#include "dstree/error.hpp"
#include "dstree/experiments.hpp"
#include "dstree/metric.hpp"

using namespace dstree;

namespace {

MarginalOptions coarse(double eps) {
  MarginalOptions o;
  o.trunc_eps = eps;
  return o;
}

double mean_of(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v;
  return s / double(x.size());
}

double se_of(const std::vector<double>& x) {
  double m = mean_of(x), s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / double(x.size() - 1) / double(x.size()));
}

// Materialised weighted graph of a marginal: per block, a clique on the points that
// live in it (its root, its chain point, attachment points, query points), glued chain
// point to next root, and attachment points glued to child spine roots. Shortest paths
// by Dijkstra, with no use of the library's prefix sums.
class GraphOracle {
 public:
  GraphOracle(const MarginalSpace& ms, const std::vector<MarginalPoint>& queries) : ms_(ms) {
    for (std::uint32_t j = 0; j < ms.k(); ++j) {
      const auto& s = ms.spine(j);
      spine_root_.push_back(add());
      tip_.push_back(add());
      std::vector<std::vector<std::pair<std::size_t, BlockPoint>>> members(s.block_count());
      std::vector<std::size_t> block_root(s.block_count()), chain(s.block_count());
      for (std::size_t i = 0; i < s.block_count(); ++i) {
        block_root[i] = add();
        chain[i] = add();
        members[i].push_back({block_root[i], s.block(i).block.root()});
        members[i].push_back({chain[i], s.block(i).chain});
      }
      if (s.block_count() == 0) {
        link(spine_root_[j], tip_[j], 0);
      } else {
        link(spine_root_[j], block_root[0], 0);
        for (std::size_t i = 0; i + 1 < s.block_count(); ++i) link(chain[i], block_root[i + 1], 0);
        link(chain.back(), tip_[j], 0);
      }
      blocks_.push_back(std::move(members));
    }
    for (std::uint32_t j = 1; j < ms.k(); ++j) {
      auto node = place({ms.parent(j), ms.attach_point(j)});
      link(node, spine_root_[j], 0);
    }
    for (const auto& q : queries) query_.push_back(place(q));
    for (std::uint32_t j = 0; j < ms.k(); ++j) {
      const auto& s = ms.spine(j);
      for (std::size_t i = 0; i < s.block_count(); ++i) {
        const auto& mem = blocks_[j][i];
        const double scale = std::pow(s.mass_scale() * s.block(i).weight, s.gamma());
        for (std::size_t a = 0; a < mem.size(); ++a)
          for (std::size_t b = a + 1; b < mem.size(); ++b)
            link(mem[a].first, mem[b].first, scale * s.block(i).block.distance(mem[a].second, mem[b].second));
      }
    }
  }

  double distance(std::size_t qa, std::size_t qb) const {
    std::vector<double> dist(adj_.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[query_[qa]] = 0;
    pq.push({0, query_[qa]});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (auto [v, w] : adj_[u])
        if (d + w < dist[v]) pq.push({dist[v] = d + w, v});
    }
    return dist[query_[qb]];
  }

 private:
  std::size_t add() {
    adj_.emplace_back();
    return adj_.size() - 1;
  }
  void link(std::size_t a, std::size_t b, double w) {
    adj_[a].push_back({b, w});
    adj_[b].push_back({a, w});
  }
  std::size_t place(const MarginalPoint& p) {
    if (p.point.block == SpinePoint::kRoot) return spine_root_[p.spine];
    if (p.point.block == SpinePoint::kTip) return tip_[p.spine];
    auto node = add();
    blocks_[p.spine][p.point.block].push_back({node, p.point.local});
    return node;
  }

  const MarginalSpace& ms_;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
  std::vector<std::size_t> spine_root_, tip_, query_;
  std::vector<std::vector<std::vector<std::pair<std::size_t, BlockPoint>>>> blocks_;
};

}  // namespace

TEST_CASE("point kit gives a zero metric") {
  Rng rng(1);
  auto ms = build_marginal(1.5, 1.0, 1.0, 6, LimitKit::point(), coarse(1e-3), rng);
  auto pts = ms.sample_points(50, PointMeasure::UniformMass, rng);
  for (const auto& a : pts)
    for (const auto& b : pts) CHECK(ms.distance(a, b) == 0);
  CHECK(ms.distance(ms.tip(0), ms.tip(5)) == 0);
  CHECK_THROWS_AS(ms.sample_points(1, PointMeasure::BlockMass, rng), Error);
}

TEST_CASE("distance inside one block scales by (m P_i)^gamma") {
  Rng rng(2);
  for (double gamma : {1.0, 0.7}) {
    auto s = sample_decorated_spine(1.5, gamma, 1.0, 2.5, LimitKit::circle(), SpineOptions{1e-4, 100000}, rng);
    REQUIRE(s.block_count() > 0);
    std::uniform_int_distribution<std::size_t> pick(0, s.block_count() - 1);
    for (int r = 0; r < 500; ++r) {
      auto i = static_cast<std::uint32_t>(pick(rng));
      const auto& b = s.block(i);
      auto x = b.block.sample_nu(rng), y = b.block.sample_nu(rng);
      CHECK(s.distance({i, x}, {i, y}) ==
            doctest::Approx(std::pow(2.5 * b.weight, gamma) * b.block.distance(x, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("mean spine length") {
  Rng rng(3);
  // gamma = 1, circle: each block contributes P_i times a uniform arc distance of mean 1/4.
  std::vector<double> len;
  for (int i = 0; i < 4000; ++i)
    len.push_back(sample_decorated_spine(1.5, 1.0, 1.0, 1.0, LimitKit::circle(), SpineOptions{1e-3, 100000}, rng)
                      .length());
  CHECK(std::abs(mean_of(len) - 0.25) < 4 * se_of(len) + 1e-3);

  // gamma < 1: E sum P_i^gamma against direct GEM sampling.
  const double xi = 0.25, gamma = 0.6;
  std::vector<double> sums;
  for (int i = 0; i < 4000; ++i) {
    auto w = sample_gem(xi, xi, 1e-10, rng);
    double s = 0;
    for (double p : w.atoms) s += std::pow(p, gamma);
    sums.push_back(s);
  }
  CHECK(std::abs(mean_of(sums) - gem_power_sum_mean(xi, xi, gamma)) < 4 * se_of(sums) + 1e-4);
  for (const auto& s : {sample_decorated_spine(1.25, gamma, 1.0, 1.0, LimitKit::circle(), SpineOptions{1e-3, 100000}, rng)}) {
    CHECK(s.length() <= s.r_bound());
    CHECK(s.truncation_bound() >= 0);
  }
}

TEST_CASE("spine attachment follows the weighted recursive tree rule") {
  Rng rng(4);
  const int draws = 4000;
  double expected = 0;
  int root_attach = 0;
  for (int i = 0; i < draws; ++i) {
    auto ms = build_marginal(1.5, 1.0, 1.0, 3, LimitKit::point(), coarse(1e-2), rng);
    CHECK(ms.parent(1) == 0);
    const auto& m = ms.mlmc().increments;
    expected += m[0] / (m[0] + m[1]);
    root_attach += ms.parent(2) == 0;
  }
  expected /= draws;
  CHECK(std::abs(root_attach / double(draws) - expected) < 4 * std::sqrt(0.25 / draws));
}

TEST_CASE("mass-scale equivariance") {
  Rng rng(5);
  auto s = sample_decorated_spine(1.5, 0.8, 1.0, 1.0, LimitKit::circle(), SpineOptions{1e-4, 100000}, rng);
  auto t = s.with_mass_scale(3.0);
  for (int r = 0; r < 200; ++r) {
    auto a = s.sample_mu(rng), b = s.sample_mu(rng);
    CHECK(t.distance(a, b) == doctest::Approx(std::pow(3.0, 0.8) * s.distance(a, b)).epsilon(1e-12));
  }
  CHECK(t.nu_total() == doctest::Approx(3.0 * s.nu_total()));
  CHECK(t.length() == doctest::Approx(std::pow(3.0, 0.8) * s.length()));
}

TEST_CASE("marginal distance matches a materialised graph") {
  Rng rng(6);
  SegmentRule uniform;
  uniform.placement = SegmentRule::Placement::Uniform;
  LimitKit seg;
  seg.kind = LimitKit::Kind::Segment;
  seg.placement = SegmentRule::Placement::Uniform;
  for (const auto& kit : {LimitKit::circle(), seg})
    for (int rep = 0; rep < 3; ++rep) {
      auto ms = build_marginal(1.5, 1.0, 1.0, 3, kit, coarse(1e-2), rng);
      auto q = ms.sample_points(20, PointMeasure::UniformMass, rng);
      auto nu = ms.sample_points(10, PointMeasure::BlockMass, rng);
      q.insert(q.end(), nu.begin(), nu.end());
      for (std::uint32_t j = 0; j < 3; ++j) q.push_back(ms.tip(j));
      q.push_back(ms.root());
      GraphOracle g(ms, q);
      for (std::size_t a = 0; a < q.size(); ++a)
        for (std::size_t b = 0; b < q.size(); ++b)
          CHECK(ms.distance(q[a], q[b]) == doctest::Approx(g.distance(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("triangle inequality and symmetry") {
  Rng rng(7);
  auto ms = build_marginal(1.4, 0.8, 1.0, 20, LimitKit::circle(), coarse(1e-3), rng);
  auto pts = ms.sample_points(120, PointMeasure::UniformMass, rng);
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = 0; b < pts.size(); ++b) {
      CHECK(ms.distance(pts[a], pts[b]) == doctest::Approx(ms.distance(pts[b], pts[a])));
      CHECK(ms.uncertainty(pts[a], pts[b]) >= 0);
    }
  for (std::size_t a = 0; a + 2 < pts.size(); a += 3)
    for (std::size_t b = 0; b < pts.size(); ++b)
      CHECK(ms.distance(pts[a], pts[b]) <= ms.distance(pts[a], pts[a + 1]) + ms.distance(pts[a + 1], pts[b]) + 1e-12);
  CHECK(ms.distance(ms.root(), ms.tip(0)) == doctest::Approx(ms.distance_to_root(ms.tip(0))));
}

TEST_CASE("mu picks blocks with probability P_i") {
  Rng rng(8);
  auto s = sample_decorated_spine(1.5, 1.0, 1.0, 1.0, LimitKit::circle(), SpineOptions{1e-3, 100000}, rng);
  std::map<std::uint32_t, int> c;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) c[s.sample_mu(rng).block]++;
  const double total = s.sticks().allocated();
  for (std::uint32_t i = 0; i < s.block_count(); ++i) {
    const double p = s.block(i).weight / total;
    if (p > 0.01) CHECK(std::abs(c[i] / double(draws) - p) < 4 * std::sqrt(p * (1 - p) / draws));
  }
}

TEST_CASE("limit kits") {
  CHECK_THROWS_AS(LimitKit::from_kit(DecorationKit::custom({Decoration::point()})), Error);
  CHECK_THROWS_AS(LimitKit::from_kit(DecorationKit::cycle(0.8)), Error);
  CHECK(LimitKit::from_kit(DecorationKit::cycle()).kind == LimitKit::Kind::Circle);
  auto tree = LimitKit::from_kit(DecorationKit::bgw_tree(OffspringLaw::finite({0.5, 0, 0.5})));
  tree.surrogate_leaves = 200;
  Rng rng(9);
  auto ms = build_marginal(1.25, 0.5, 1.0, 8, tree, coarse(1e-2), rng);
  auto pts = ms.sample_points(30, PointMeasure::BlockMass, rng);
  for (const auto& a : pts) CHECK(std::isfinite(ms.distance_to_root(a)));
}

TEST_CASE("determinism") {
  Rng a(10), b(10);
  auto x = build_marginal(1.5, 1.0, 1.0, 16, LimitKit::circle(), coarse(1e-3), a);
  auto y = build_marginal(1.5, 1.0, 1.0, 16, LimitKit::circle(), coarse(1e-3), b);
  for (std::uint32_t i = 0; i < 16; ++i)
    for (std::uint32_t j = 0; j < 16; ++j) CHECK(x.distance(x.tip(i), x.tip(j)) == y.distance(y.tip(i), y.tip(j)));
}

TEST_CASE("root distance law is stable under truncation refinement") {
  Rng rng(11);
  auto c3 = continuum_root_distances(1.5, 1.0, LimitKit::circle(), 2000, coarse(1e-2), rng);
  auto c5 = continuum_root_distances(1.5, 1.0, LimitKit::circle(), 2000, coarse(1e-4), rng);
  auto ks = ks_two_sample(c3, c5);
  CHECK(ks.p_value > 0.001);
  CHECK(std::abs(mean_of(c3) - mean_of(c5)) < 4 * std::hypot(se_of(c3), se_of(c5)));
}

TEST_CASE("spine diameter moments are stable under truncation refinement") {
  // Far-end unit segments make the spine a path, so its diameter is its length.
  LimitKit seg;
  seg.kind = LimitKit::Kind::Segment;
  const int draws = 4000;
  std::vector<double> m1, m2;
  // The truncated tail shrinks like r^(gamma - xi), so keep gamma well above xi = alpha - 1.
  for (double eps : {1e-4, 1e-5}) {
    Rng rng = make_stream(31, "diam");
    double s1 = 0, s2 = 0;
    for (int i = 0; i < draws; ++i) {
      double d = sample_decorated_spine(1.25, 0.9, 1.0, 1.0, seg, SpineOptions{eps, 100000}, rng).length();
      s1 += d, s2 += d * d;
    }
    m1.push_back(s1 / draws);
    m2.push_back(s2 / draws);
  }
  MESSAGE("E diam " << m1[0] << " -> " << m1[1] << ", E diam^2 " << m2[0] << " -> " << m2[1]);
  CHECK(std::isfinite(m2[1]));
  CHECK(std::abs(m1[1] / m1[0] - 1) < 0.05);
  CHECK(std::abs(m2[1] / m2[0] - 1) < 0.05);
}
