#include "dstree/glue.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "dstree/error.hpp"

namespace dstree {

DecoratedTree::DecoratedTree(PlaneTree tree, std::vector<Decoration> decorations)
    : tree_(std::move(tree)), decs_(std::move(decorations)) {
  const std::size_t n = tree_.size();
  if (decs_.size() != n) fail(Errc::KitFailure, "need exactly one decoration per vertex");
  port_.assign(n, 0);
  prefix_.assign(n, 0.0);
  cum_mass_.resize(n);
  port_[0] = decs_[0].root();
  double acc = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (decs_[v].k() != tree_.outdegree(v))
      fail(Errc::KitFailure, "decoration at " + tree_.label(v) + " has " + std::to_string(decs_[v].k()) +
                                 " external roots for outdegree " + std::to_string(tree_.outdegree(v)));
    if (v > 0) {
      Vertex p = tree_.parent(v);
      port_[v] = decs_[p].external_root(tree_.child_index(v));
      prefix_[v] = prefix_[p] + decs_[p].distance(decs_[p].root(), port_[v]);
    }
    acc += decs_[v].total_mass();
    cum_mass_[v] = acc;
  }
}

void DecoratedTree::check(SpacePoint x) const {
  if (x.vertex >= tree_.size()) fail(Errc::InvalidPoint, "vertex outside the tree");
  if (x.local >= decs_[x.vertex].size()) fail(Errc::InvalidPoint, "point outside its decoration");
}

LocalPoint DecoratedTree::exit_point(Vertex w, SpacePoint x) const {
  if (x.vertex == w) return x.local;
  Vertex a = tree_.ancestor_at_depth(x.vertex, tree_.depth(w) + 1);
  return port_[a];
}

double DecoratedTree::distance_to_root(SpacePoint x) const {
  check(x);
  const auto& d = decs_[x.vertex];
  return prefix_[x.vertex] + d.distance(d.root(), x.local);
}

double DecoratedTree::distance(SpacePoint x, SpacePoint y) const {
  check(x);
  check(y);
  if (x.vertex == y.vertex) return decs_[x.vertex].distance(x.local, y.local);
  const Vertex w = tree_.lca(x.vertex, y.vertex);
  // Leg from a point up to rho_a, a the child of w toward it, plus the exit port in B_w.
  auto leg = [&](SpacePoint p) {
    if (p.vertex == w) return 0.0;
    Vertex a = tree_.ancestor_at_depth(p.vertex, tree_.depth(w) + 1);
    const auto& d = decs_[p.vertex];
    return d.distance(p.local, d.root()) + prefix_[p.vertex] - prefix_[a];
  };
  return leg(x) + decs_[w].distance(exit_point(w, x), exit_point(w, y)) + leg(y);
}

SpacePoint DecoratedTree::canonical(SpacePoint x) const {
  check(x);
  while (x.vertex != 0 && x.local == decs_[x.vertex].root()) x = {tree_.parent(x.vertex), port_[x.vertex]};
  return x;
}

SpacePoint DecoratedTree::sample_point(Rng& rng) const {
  const double total = total_mass();
  if (!(total > 0)) fail(Errc::ZeroMass, "decorated tree has zero mass");
  double u = uniform_open(rng) * total;
  auto it = std::upper_bound(cum_mass_.begin(), cum_mass_.end(), u);
  Vertex v = static_cast<Vertex>(std::min<std::size_t>(it - cum_mass_.begin(), cum_mass_.size() - 1));
  while (decs_[v].total_mass() <= 0) --v;  // only reachable through rounding at the top
  return {v, decs_[v].sample_nu(rng)};
}

double DecoratedTree::b1_diagnostic(double delta, double bn, double gamma) const {
  if (!(bn > 0)) fail(Errc::ParamOutOfRange, "b_n must be positive");
  const double cut = delta * bn;
  std::vector<double> acc(tree_.size(), 0.0);
  double best = 0;
  for (Vertex v = 0; v < tree_.size(); ++v) {
    double term = double(tree_.outdegree(v)) <= cut ? decs_[v].diameter() : 0.0;
    acc[v] = (v ? acc[tree_.parent(v)] : 0.0) + term;
    best = std::max(best, acc[v]);
  }
  return std::pow(bn, -gamma) * best;
}

namespace {

constexpr double kNone = -std::numeric_limits<double>::infinity();

// max over distinct points q1 != q2 of e(q1) + d(q1, q2) + e(q2).
double best_pair(const Decoration& d, const std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n < 2) return kNone;
  const double s = d.distance_scale();
  double best = kNone;
  switch (d.kind()) {
    case DecorationKind::Point: break;
    case DecorationKind::Segment: {
      double pre = e[0];
      for (std::size_t j = 1; j < n; ++j) {
        best = std::max(best, pre + e[j] + s * double(j));
        pre = std::max(pre, e[j] - s * double(j));
      }
      break;
    }
    case DecorationKind::Cycle: {
      // Short arc when j - i <= n/2, otherwise the wrap-around arc.
      const std::size_t half = n / 2;
      std::deque<std::size_t> win;  // indices with decreasing e_i - s i
      double far = kNone;            // max of e_i + s i over i < j - half
      std::size_t far_next = 0;
      for (std::size_t j = 0; j < n; ++j) {
        while (far_next + half < j) {
          far = std::max(far, e[far_next] + s * double(far_next));
          ++far_next;
        }
        while (!win.empty() && win.front() + half < j) win.pop_front();
        if (!win.empty()) {
          std::size_t i = win.front();
          best = std::max(best, e[i] - s * double(i) + e[j] + s * double(j));
        }
        if (far > kNone) best = std::max(best, far + e[j] - s * double(j) + s * double(n));
        double key = e[j] - s * double(j);
        while (!win.empty() && e[win.back()] - s * double(win.back()) <= key) win.pop_back();
        win.push_back(j);
      }
      break;
    }
    case DecorationKind::Tree: {
      const PlaneTree& t = *d.tree_structure();
      std::vector<double> down(n);
      for (std::size_t u = n; u-- > 0;) {
        double top1 = kNone, top2 = kNone;
        for (Vertex c : t.children(static_cast<Vertex>(u))) {
          double x = down[c] + s;
          if (x > top1) {
            top2 = top1;
            top1 = x;
          } else if (x > top2) {
            top2 = x;
          }
        }
        if (top1 > kNone) best = std::max(best, e[u] + top1);
        if (top2 > kNone) best = std::max(best, top1 + top2);
        down[u] = std::max(e[u], top1);
      }
      break;
    }
    case DecorationKind::Custom:
      for (LocalPoint i = 0; i < n; ++i)
        for (LocalPoint j = i + 1; j < n; ++j) best = std::max(best, e[i] + e[j] + d.distance(i, j));
      break;
  }
  return best;
}

}  // namespace

double DecoratedTree::diameter() const {
  const std::size_t n = tree_.size();
  // down[v]: farthest distance from rho_v into the glued subtree of v.
  std::vector<double> down(n, 0.0);
  double diam = 0;
  std::vector<double> e1, e2;
  for (std::size_t vi = n; vi-- > 0;) {
    const Vertex v = static_cast<Vertex>(vi);
    const auto& d = decs_[v];
    e1.assign(d.size(), 0.0);
    e2.assign(d.size(), 0.0);
    for (Vertex c : tree_.children(v)) {
      LocalPoint q = port_[c];
      double x = down[c];
      if (x > e1[q]) {
        e2[q] = e1[q];
        e1[q] = x;
      } else if (x > e2[q]) {
        e2[q] = x;
      }
    }
    double dn = 0;
    for (LocalPoint q = 0; q < d.size(); ++q) {
      dn = std::max(dn, d.distance(d.root(), q) + e1[q]);
      diam = std::max(diam, e1[q] + e2[q]);
    }
    down[v] = dn;
    diam = std::max(diam, best_pair(d, e1));
  }
  return diam;
}

DecoratedTree DecoratedTree::rescaled(double factor_dist, double factor_mass) const {
  std::vector<Decoration> decs;
  decs.reserve(decs_.size());
  for (const auto& d : decs_) decs.push_back(d.rescaled(factor_dist, factor_mass));
  return DecoratedTree(tree_, std::move(decs));
}

DecoratedTree glue(PlaneTree tree, const DecorationKit& kit, Rng& rng) {
  std::vector<Decoration> decs;
  decs.reserve(tree.size());
  for (Vertex v = 0; v < tree.size(); ++v) decs.push_back(kit.make(tree.outdegree(v), rng));
  return DecoratedTree(std::move(tree), std::move(decs));
}

}  // namespace dstree
