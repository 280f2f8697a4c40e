#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dstree {

// Vertices are numbered 0..size-1 in lexicographic (depth-first) order; 0 is the root.
using Vertex = std::uint32_t;

struct LukasiewiczPath {
  std::vector<std::int64_t> values;  // W_0 = 0, ..., W_n = -1

  bool operator==(const LukasiewiczPath&) const = default;
};

namespace detail {
struct LiftTable;
}

class PlaneTree {
 public:
  // A single root.
  PlaneTree();

  static PlaneTree from_outdegrees(std::vector<std::uint32_t> outdegrees);
  static PlaneTree from_lukasiewicz(std::span<const std::int64_t> path);
  static PlaneTree from_lukasiewicz(const LukasiewiczPath& path) {
    return from_lukasiewicz(std::span<const std::int64_t>(path.values));
  }

  std::size_t size() const { return outdeg_.size(); }
  std::size_t leaf_count() const;
  std::uint32_t height() const;

  const std::vector<std::uint32_t>& outdegrees() const { return outdeg_; }
  std::uint32_t outdegree(Vertex v) const { return outdeg_[check(v)]; }

  // Parent of the root is the root itself.
  Vertex parent(Vertex v) const { return parent_[check(v)]; }
  // i is 0-based: child(v, 0) is the first child v1.
  Vertex child(Vertex v, std::uint32_t i) const;
  std::span<const Vertex> children(Vertex v) const;
  // Position of v among its siblings (0-based); 0 for the root.
  std::uint32_t child_index(Vertex v) const { return child_index_[check(v)]; }
  std::uint32_t depth(Vertex v) const { return depth_[check(v)]; }
  // One past the last vertex of the subtree rooted at v.
  Vertex subtree_end(Vertex v) const { return subtree_end_[check(v)]; }

  // True iff u is an ancestor of v (u == v allowed).
  bool is_ancestor(Vertex u, Vertex v) const;
  Vertex lca(Vertex u, Vertex v) const;
  // Ancestor of v at the given depth (depth <= depth(v)).
  Vertex ancestor_at_depth(Vertex v, std::uint32_t d) const;
  std::vector<Vertex> ancestors(Vertex v) const;

  LukasiewiczPath lukasiewicz() const;
  // Ulam-Harris label such as "1.2.1"; the root is "()".
  std::string label(Vertex v) const;

  bool operator==(const PlaneTree& o) const { return outdeg_ == o.outdeg_; }

 private:
  struct Raw {};
  explicit PlaneTree(Raw) {}
  Vertex check(Vertex v) const;
  const detail::LiftTable& lift() const;

  std::vector<std::uint32_t> outdeg_;
  std::vector<Vertex> parent_;
  std::vector<std::uint32_t> child_offset_;  // children of v: child_ids_[child_offset_[v] .. +outdeg]
  std::vector<Vertex> child_ids_;
  std::vector<std::uint32_t> child_index_;
  std::vector<std::uint32_t> depth_;
  std::vector<Vertex> subtree_end_;
  // Binary-lifting table, built on first lca query and shared between copies.
  std::shared_ptr<detail::LiftTable> lift_;
};

// Reference lca by walking parent pointers; used as a test oracle.
Vertex lca_by_walk(const PlaneTree& t, Vertex u, Vertex v);

}  // namespace dstree
