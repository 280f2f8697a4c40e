#include "dstree/oracle.hpp"

#include <numeric>
#include <queue>

#include "dstree/error.hpp"

namespace dstree {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

BfsOracle::BfsOracle(const DecoratedTree& dt, std::size_t max_points) {
  const auto& t = dt.tree();
  offset_.resize(t.size() + 1, 0);
  bool first = true;
  for (Vertex v = 0; v < t.size(); ++v) {
    const auto& d = dt.decoration(v);
    if (!d.is_graph()) fail(Errc::NonGraphDecoration, "bfs oracle needs graph-kind decorations");
    if (d.size() > 1) {
      if (first) {
        scale_ = d.distance_scale();
        first = false;
      } else if (d.distance_scale() != scale_) {
        fail(Errc::NonGraphDecoration, "bfs oracle needs one common distance scale");
      }
    }
    offset_[v + 1] = offset_[v] + d.size();
  }
  const std::size_t total = offset_.back();
  if (total > max_points) fail(Errc::SizeLimit, "too many points for the bfs oracle");

  UnionFind uf(total);
  for (Vertex v = 1; v < t.size(); ++v) {
    Vertex p = t.parent(v);
    LocalPoint port = dt.decoration(p).external_root(t.child_index(v));
    uf.unite(offset_[v] + dt.decoration(v).root(), offset_[p] + port);
  }
  std::vector<std::size_t> id(total, SIZE_MAX);
  cls_.resize(total);
  std::size_t classes = 0;
  for (std::size_t g = 0; g < total; ++g) {
    std::size_t r = uf.find(g);
    if (id[r] == SIZE_MAX) id[r] = classes++;
    cls_[g] = id[r];
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (Vertex v = 0; v < t.size(); ++v)
    for (auto [a, b] : dt.decoration(v).edges()) edges.emplace_back(cls_[offset_[v] + a], cls_[offset_[v] + b]);
  adj_offset_.assign(classes + 1, 0);
  for (auto [a, b] : edges) {
    ++adj_offset_[a + 1];
    ++adj_offset_[b + 1];
  }
  for (std::size_t i = 0; i < classes; ++i) adj_offset_[i + 1] += adj_offset_[i];
  adj_.resize(adj_offset_.back());
  std::vector<std::size_t> fill(adj_offset_.begin(), adj_offset_.end() - 1);
  for (auto [a, b] : edges) {
    adj_[fill[a]++] = b;
    adj_[fill[b]++] = a;
  }
}

std::size_t BfsOracle::class_of(SpacePoint x) const {
  if (x.vertex + 1 >= offset_.size() || offset_[x.vertex] + x.local >= offset_[x.vertex + 1])
    fail(Errc::InvalidPoint, "point outside the decorated tree");
  return cls_[offset_[x.vertex] + x.local];
}

std::vector<std::int64_t> BfsOracle::hops_from(SpacePoint x) const {
  std::vector<std::int64_t> dist(node_count(), -1);
  std::queue<std::size_t> q;
  std::size_t s = class_of(x);
  dist[s] = 0;
  q.push(s);
  while (!q.empty()) {
    std::size_t u = q.front();
    q.pop();
    for (std::size_t i = adj_offset_[u]; i < adj_offset_[u + 1]; ++i) {
      std::size_t w = adj_[i];
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

std::int64_t BfsOracle::hops(SpacePoint x, SpacePoint y) const { return hops_from(x)[class_of(y)]; }

double BfsOracle::distance(SpacePoint x, SpacePoint y) const { return scale_ * double(hops(x, y)); }

BfsOracle bfs_oracle(const DecoratedTree& dt) { return BfsOracle(dt); }

}  // namespace dstree
