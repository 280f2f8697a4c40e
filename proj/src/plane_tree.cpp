#include "dstree/plane_tree.hpp"

#include <algorithm>
#include <bit>
#include <mutex>

#include "dstree/error.hpp"

namespace dstree {

namespace detail {
struct LiftTable {
  std::once_flag once;
  std::vector<std::vector<Vertex>> up;  // up[j][v] = 2^j-th ancestor (clamped at root)
};
}  // namespace detail

PlaneTree::PlaneTree() : PlaneTree(from_outdegrees({0})) {}

PlaneTree PlaneTree::from_outdegrees(std::vector<std::uint32_t> outdegrees) {
  const std::size_t n = outdegrees.size();
  if (n == 0) fail(Errc::InvalidPath, "empty outdegree sequence");
  if (n > 0xffffffffULL) fail(Errc::SizeLimit, "tree too large");
  std::int64_t w = 0;
  for (std::size_t k = 0; k < n; ++k) {
    w += static_cast<std::int64_t>(outdegrees[k]) - 1;
    if (k + 1 < n && w < 0)
      fail(Errc::InvalidPath, "prefix sum negative at step " + std::to_string(k + 1));
  }
  if (w != -1) fail(Errc::InvalidPath, "outdegrees must sum to size - 1");

  PlaneTree t{Raw{}};
  t.outdeg_ = std::move(outdegrees);
  t.parent_.assign(n, 0);
  t.child_offset_.assign(n + 1, 0);
  t.child_index_.assign(n, 0);
  t.depth_.assign(n, 0);
  t.subtree_end_.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) t.child_offset_[v + 1] = t.child_offset_[v] + t.outdeg_[v];
  t.child_ids_.assign(n - 1, 0);

  // Depth-first decode: stack of vertices still waiting for children.
  std::vector<Vertex> stack;
  std::vector<std::uint32_t> filled(n, 0);
  stack.reserve(64);
  for (Vertex v = 0; v < n; ++v) {
    if (v > 0) {
      Vertex p = stack.back();
      t.parent_[v] = p;
      t.depth_[v] = t.depth_[p] + 1;
      t.child_index_[v] = filled[p];
      t.child_ids_[t.child_offset_[p] + filled[p]] = v;
      if (++filled[p] == t.outdeg_[p]) stack.pop_back();
    }
    if (t.outdeg_[v] > 0) stack.push_back(v);
  }
  // Subtree ends by a reverse sweep.
  for (std::size_t i = n; i-- > 0;) {
    Vertex v = static_cast<Vertex>(i);
    t.subtree_end_[v] = t.outdeg_[v] == 0 ? v + 1 : t.subtree_end_[t.child_ids_[t.child_offset_[v + 1] - 1]];
  }
  t.lift_ = std::make_shared<detail::LiftTable>();
  return t;
}

PlaneTree PlaneTree::from_lukasiewicz(std::span<const std::int64_t> path) {
  if (path.size() < 2 || path[0] != 0) fail(Errc::InvalidPath, "path must start at 0 and have length >= 2");
  std::vector<std::uint32_t> deg(path.size() - 1);
  for (std::size_t k = 1; k < path.size(); ++k) {
    std::int64_t inc = path[k] - path[k - 1];
    if (inc < -1) fail(Errc::InvalidPath, "increment below -1 at step " + std::to_string(k));
    if (k + 1 < path.size() && path[k] < 0)
      fail(Errc::InvalidPath, "path hits -1 before the end at step " + std::to_string(k));
    deg[k - 1] = static_cast<std::uint32_t>(inc + 1);
  }
  if (path.back() != -1) fail(Errc::InvalidPath, "path must end at -1");
  return from_outdegrees(std::move(deg));
}

Vertex PlaneTree::check(Vertex v) const {
  if (v >= outdeg_.size())
    fail(Errc::IndexOutOfRange, "vertex " + std::to_string(v) + " not in tree of size " + std::to_string(outdeg_.size()));
  return v;
}

std::size_t PlaneTree::leaf_count() const {
  return static_cast<std::size_t>(std::count(outdeg_.begin(), outdeg_.end(), 0u));
}

std::uint32_t PlaneTree::height() const { return *std::max_element(depth_.begin(), depth_.end()); }

Vertex PlaneTree::child(Vertex v, std::uint32_t i) const {
  if (i >= outdegree(v)) fail(Errc::IndexOutOfRange, "child index out of range");
  return child_ids_[child_offset_[v] + i];
}

std::span<const Vertex> PlaneTree::children(Vertex v) const {
  check(v);
  return {child_ids_.data() + child_offset_[v], outdeg_[v]};
}

bool PlaneTree::is_ancestor(Vertex u, Vertex v) const {
  check(u);
  check(v);
  return u <= v && v < subtree_end_[u];
}

const detail::LiftTable& PlaneTree::lift() const {
  std::call_once(lift_->once, [this] {
    const std::size_t n = outdeg_.size();
    unsigned levels = std::max(1u, static_cast<unsigned>(std::bit_width(height())));
    auto& up = lift_->up;
    up.assign(levels, std::vector<Vertex>(n));
    up[0] = parent_;
    for (unsigned j = 1; j < levels; ++j)
      for (std::size_t v = 0; v < n; ++v) up[j][v] = up[j - 1][up[j - 1][v]];
  });
  return *lift_;
}

Vertex PlaneTree::lca(Vertex u, Vertex v) const {
  check(u);
  check(v);
  if (is_ancestor(u, v)) return u;
  if (is_ancestor(v, u)) return v;
  const auto& up = lift().up;
  for (std::size_t j = up.size(); j-- > 0;) {
    Vertex a = up[j][u];
    if (!(a <= v && v < subtree_end_[a])) u = a;
  }
  return parent_[u];
}

Vertex PlaneTree::ancestor_at_depth(Vertex v, std::uint32_t d) const {
  check(v);
  if (d > depth_[v]) fail(Errc::IndexOutOfRange, "ancestor depth exceeds vertex depth");
  std::uint32_t steps = depth_[v] - d;
  if (steps == 0) return v;
  const auto& up = lift().up;
  for (std::size_t j = 0; steps != 0; ++j, steps >>= 1)
    if (steps & 1u) v = up[j][v];
  return v;
}

std::vector<Vertex> PlaneTree::ancestors(Vertex v) const {
  check(v);
  std::vector<Vertex> out(depth_[v] + 1);
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = v;
    v = parent_[v];
  }
  return out;
}

LukasiewiczPath PlaneTree::lukasiewicz() const {
  LukasiewiczPath p;
  p.values.resize(outdeg_.size() + 1);
  p.values[0] = 0;
  for (std::size_t k = 0; k < outdeg_.size(); ++k)
    p.values[k + 1] = p.values[k] + static_cast<std::int64_t>(outdeg_[k]) - 1;
  return p;
}

std::string PlaneTree::label(Vertex v) const {
  if (check(v) == 0) return "()";
  std::string s;
  for (Vertex a : ancestors(v)) {
    if (a == 0) continue;
    if (!s.empty()) s += '.';
    s += std::to_string(child_index_[a] + 1);
  }
  return s;
}

Vertex lca_by_walk(const PlaneTree& t, Vertex u, Vertex v) {
  while (t.depth(u) > t.depth(v)) u = t.parent(u);
  while (t.depth(v) > t.depth(u)) v = t.parent(v);
  while (u != v) {
    u = t.parent(u);
    v = t.parent(v);
  }
  return u;
}

}  // namespace dstree
