#include "dstree/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include "dstree/error.hpp"

namespace dstree {

namespace {

constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr const char* kRest = "#7f7f7f";

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

std::string render_svg(const DecoratedTree& dt, const RenderStyle& style, RenderStats* stats) {
  const PlaneTree& t = dt.tree();
  const std::size_t n = t.size();
  for (Vertex v = 0; v < n; ++v)
    if (!dt.decoration(v).is_graph())
      fail(Errc::NonGraphDecoration, "vertex " + std::to_string(v) + " carries a custom decoration");

  // Angular sectors proportional to leaf counts.
  std::vector<double> leaves(n, 0.0);
  for (Vertex v = static_cast<Vertex>(n); v-- > 0;) {
    if (t.outdegree(v) == 0) leaves[v] = 1.0;
    if (v) leaves[t.parent(v)] += leaves[v];
  }
  std::vector<double> lo(n), hi(n);
  lo[0] = 0.0;
  hi[0] = 2.0 * std::numbers::pi;
  for (Vertex v = 0; v < n; ++v) {
    double a = lo[v];
    for (Vertex c : t.children(v)) {
      lo[c] = a;
      a += (hi[v] - lo[v]) * leaves[c] / leaves[v];
      hi[c] = a;
    }
  }

  // Angle and radius of every canonical point.
  std::vector<std::size_t> offset(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) offset[v + 1] = offset[v] + dt.decoration(v).size();
  std::vector<double> angle(offset[n], 0.0), radius(offset[n], 0.0);
  std::vector<std::size_t> node_id(offset[n], 0);
  std::size_t nodes = 0;
  double rmax = 0.0;
  for (Vertex v = 0; v < n; ++v) {
    const Decoration& d = dt.decoration(v);
    const double mid = 0.5 * (lo[v] + hi[v]);
    std::vector<double> a(d.size(), mid);
    std::vector<char> set(d.size(), 0);
    auto kids = t.children(v);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      LocalPoint p = d.external_root(i);
      if (!set[p]) a[p] = 0.5 * (lo[kids[i]] + hi[kids[i]]), set[p] = 1;
    }
    if (d.kind() == DecorationKind::Tree) {
      // Interior tree vertices take the mean angle of the roots below them.
      const PlaneTree& s = *d.tree_structure();
      std::vector<double> sum(d.size(), 0.0), cnt(d.size(), 0.0);
      for (LocalPoint p = 0; p < d.size(); ++p)
        if (set[p]) sum[p] = a[p], cnt[p] = 1;
      for (Vertex u = static_cast<Vertex>(d.size()); u-- > 1;) {
        sum[s.parent(u)] += sum[u];
        cnt[s.parent(u)] += cnt[u];
      }
      for (LocalPoint p = 0; p < d.size(); ++p)
        if (!set[p] && cnt[p] > 0) a[p] = sum[p] / cnt[p];
    }
    for (LocalPoint p = 0; p < d.size(); ++p) {
      SpacePoint x{v, p};
      SpacePoint c = dt.canonical(x);
      std::size_t g = offset[v] + p;
      if (c == x) {
        angle[g] = a[p];
        radius[g] = dt.distance_to_root(x);
        rmax = std::max(rmax, radius[g]);
        node_id[g] = nodes++;
      } else {
        std::size_t h = offset[c.vertex] + c.local;
        angle[g] = angle[h];
        radius[g] = radius[h];
        node_id[g] = node_id[h];
      }
    }
  }

  // Color rank by outdegree, widest first.
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex x, Vertex y) { return t.outdegree(x) > t.outdegree(y); });
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;
  const std::size_t ranks = std::min<std::size_t>(style.palette_ranks, std::size(kPalette));

  const double half = 0.5 * style.size;
  const double scale = rmax > 0 ? (half - 10.0) / rmax : 0.0;
  auto px = [&](std::size_t g) { return half + scale * radius[g] * std::cos(angle[g]); };
  auto py = [&](std::size_t g) { return half + scale * radius[g] * std::sin(angle[g]); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(style.size) << "\" height=\""
     << fmt(style.size) << "\" viewBox=\"0 0 " << fmt(style.size) << ' ' << fmt(style.size) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<g stroke-width=\"" << fmt(style.stroke_width) << "\" stroke-linecap=\"round\">\n";
  std::size_t edges = 0;
  for (Vertex v = 0; v < n; ++v) {
    const Decoration& d = dt.decoration(v);
    const char* color = rank[v] < ranks ? kPalette[rank[v]] : kRest;
    for (auto [p, q] : d.edges()) {
      std::size_t g = offset[v] + p, h = offset[v] + q;
      os << "<line class=\"edge\" x1=\"" << fmt(px(g)) << "\" y1=\"" << fmt(py(g)) << "\" x2=\"" << fmt(px(h))
         << "\" y2=\"" << fmt(py(h)) << "\" stroke=\"" << color << "\"/>\n";
      ++edges;
    }
  }
  os << "</g>\n";
  if (style.node_radius > 0) {
    os << "<g fill=\"black\">\n";
    for (Vertex v = 0; v < n; ++v)
      for (LocalPoint p = 0; p < dt.decoration(v).size(); ++p) {
        std::size_t g = offset[v] + p;
        if (dt.canonical({v, p}) != SpacePoint{v, p}) continue;
        os << "<circle class=\"node\" cx=\"" << fmt(px(g)) << "\" cy=\"" << fmt(py(g)) << "\" r=\""
           << fmt(style.node_radius) << "\"/>\n";
      }
    os << "</g>\n";
  }
  os << "</svg>\n";
  if (stats) *stats = {nodes, edges};
  return os.str();
}

}  // namespace dstree
