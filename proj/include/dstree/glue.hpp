#pragma once

#include <cstdint>
#include <vector>

#include "dstree/decorations.hpp"
#include "dstree/plane_tree.hpp"
#include "dstree/random.hpp"

namespace dstree {

struct SpacePoint {
  Vertex vertex = 0;
  LocalPoint local = 0;
  bool operator==(const SpacePoint&) const = default;
};

// Plane tree whose vertex v carries a decoration with d+(v) external roots; the
// i-th external root of B_v is identified with the internal root of B_{vi}.
class DecoratedTree {
 public:
  DecoratedTree(PlaneTree tree, std::vector<Decoration> decorations);

  const PlaneTree& tree() const { return tree_; }
  const Decoration& decoration(Vertex v) const { return decs_.at(v); }
  const std::vector<Decoration>& decorations() const { return decs_; }
  std::size_t size() const { return tree_.size(); }

  SpacePoint root_point() const { return {0, decs_[0].root()}; }
  // Point of B_{parent(v)} that B_v hangs from; the root point for v = 0.
  LocalPoint port(Vertex v) const { return port_.at(v); }
  // d(rho_root, rho_v).
  double prefix(Vertex v) const { return prefix_.at(v); }

  double distance(SpacePoint x, SpacePoint y) const;
  double distance_to_root(SpacePoint x) const;
  // Representative of x's gluing class: the copy in the shallowest decoration.
  SpacePoint canonical(SpacePoint x) const;

  double total_mass() const { return cum_mass_.empty() ? 0.0 : cum_mass_.back(); }
  // Vertex proportional to nu_v(B_v), then a point proportional to nu_v.
  SpacePoint sample_point(Rng& rng) const;

  // sup_v bn^-gamma sum_{w <= v} diam(B_w) 1{d+(w) <= delta bn}.
  double b1_diagnostic(double delta, double bn, double gamma) const;
  // Exact diameter of the glued space.
  double diameter() const;

  DecoratedTree rescaled(double factor_dist, double factor_mass) const;

 private:
  void check(SpacePoint x) const;
  // Point of B_w through which every path from B_w to x leaves (w an ancestor of x.vertex).
  LocalPoint exit_point(Vertex w, SpacePoint x) const;

  PlaneTree tree_;
  std::vector<Decoration> decs_;
  std::vector<LocalPoint> port_;
  std::vector<double> prefix_;
  std::vector<double> cum_mass_;
};

// Independent decorations per vertex, in preorder, drawn from the kit.
DecoratedTree glue(PlaneTree tree, const DecorationKit& kit, Rng& rng);

}  // namespace dstree
