#pragma once

#include <cstdint>
#include <vector>

#include "dstree/glue.hpp"

namespace dstree {

// Explicit quotient graph of a decorated tree with graph-kind decorations:
// every decoration point is a node, gluing identifications are merged with
// union-find, and distances come from breadth-first search.
class BfsOracle {
 public:
  explicit BfsOracle(const DecoratedTree& dt, std::size_t max_points = 10'000);

  std::size_t node_count() const { return adj_offset_.size() - 1; }
  std::size_t class_of(SpacePoint x) const;
  // Distance in hops times the common distance scale of the decorations.
  double distance(SpacePoint x, SpacePoint y) const;
  std::int64_t hops(SpacePoint x, SpacePoint y) const;
  // All hop distances from x (indexed by class).
  std::vector<std::int64_t> hops_from(SpacePoint x) const;

 private:
  std::vector<std::size_t> offset_;  // first global id of each decoration
  std::vector<std::size_t> cls_;     // global id -> class
  std::vector<std::size_t> adj_offset_;
  std::vector<std::size_t> adj_;
  double scale_ = 1.0;
};

BfsOracle bfs_oracle(const DecoratedTree& dt);

}  // namespace dstree
