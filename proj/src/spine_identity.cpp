#include "dstree/spine_identity.hpp"

#include <algorithm>

#include "dstree/enumeration.hpp"
#include "dstree/error.hpp"

namespace dstree {

namespace {

struct Context {
  const std::vector<Rational>& p;
  const LinePredicate& property;
  const MarkTable& marks;
  const SpineFunctional& f;
};

const std::vector<MarkAtom>& mark_law(const MarkTable& marks, std::uint32_t degree) {
  static const std::vector<MarkAtom> zero{MarkAtom{}};
  if (marks.empty()) return zero;
  return marks[std::min<std::size_t>(degree, marks.size() - 1)];
}

// Sum over all markings of t of  prob(marking) * sum_{u in S, u in targets} F(t,u,x) / |S|,
// where S is the set of vertices whose marked ancestral line has the property.
// targets empty means every vertex.
Rational marked_sum(const Context& ctx, const PlaneTree& t, const std::vector<Vertex>& targets) {
  const std::size_t n = t.size();
  std::vector<double> x(n, 0.0);
  std::vector<std::vector<Vertex>> lines(n);
  for (Vertex v = 0; v < n; ++v) lines[v] = t.ancestors(v);
  Rational total = 0;
  std::vector<LineEntry> line;
  auto visit = [&](auto&& self, Vertex v, const Rational& prob) -> void {
    if (v == n) {
      std::vector<Vertex> hit;
      for (Vertex w = 0; w < n; ++w) {
        line.clear();
        for (Vertex a : lines[w]) line.push_back({t.outdegree(a), x[a]});
        if (ctx.property(line)) hit.push_back(w);
      }
      if (hit.empty()) return;
      Rational acc = 0;
      for (Vertex u : hit) {
        if (!targets.empty() && std::find(targets.begin(), targets.end(), u) == targets.end()) continue;
        acc += ctx.f ? ctx.f(t, u, x) : Rational(1);
      }
      total += prob * acc / Rational(hit.size());
      return;
    }
    for (const auto& atom : mark_law(ctx.marks, t.outdegree(v))) {
      if (atom.prob == 0) continue;
      x[v] = atom.value;
      self(self, v + 1, prob * atom.prob);
    }
  };
  visit(visit, 0, Rational(1));
  return total;
}

struct SpineLevel {
  std::uint32_t degree;
  std::uint32_t pick;
  std::vector<std::size_t> bushes;  // indices into the tree list, in child order skipping `pick`
};

}  // namespace

SpineIdentityReport verify_spine_identity(const std::vector<Rational>& p, const LinePredicate& property,
                                          std::uint32_t n_max, const MarkTable& marks, const SpineFunctional& f) {
  if (n_max == 0 || n_max > 9) fail(Errc::SupportTooLarge, "spine identity enumeration needs 1 <= n_max <= 9");
  if (p.empty()) fail(Errc::ParamOutOfRange, "empty offspring law");
  Rational sum = 0, mean = 0;
  for (std::size_t d = 0; d < p.size(); ++d) {
    if (p[d] < 0) fail(Errc::ParamOutOfRange, "negative probability");
    sum += p[d];
    mean += Rational(d) * p[d];
  }
  if (sum != 1 || mean != 1) fail(Errc::ParamOutOfRange, "spine identity needs a critical probability law");
  const Context ctx{p, property, marks, f};

  // Every BGW tree with at most n_max vertices and its probability.
  std::vector<Outdegrees> trees;
  std::vector<Rational> prob;
  std::vector<char> allowed(std::min<std::size_t>(p.size(), n_max), 0);
  for (std::size_t d = 0; d < allowed.size(); ++d) allowed[d] = p[d] > 0;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    for (auto& t : enumerate_plane_trees(n, allowed)) {
      Rational w = 1;
      for (auto d : t) w *= p[d];
      trees.push_back(t);
      prob.push_back(w);
    }
  }

  SpineIdentityReport rep;
  for (std::size_t i = 0; i < trees.size(); ++i)
    rep.lhs += prob[i] * marked_sum(ctx, PlaneTree::from_outdegrees(trees[i]), {});
  rep.trees_enumerated = trees.size();

  // Kesten cut: spine levels (D_i, K_i, bushes), then the top tree at U*_k.
  std::vector<SpineLevel> plan;
  auto assemble = [&](std::size_t top, Outdegrees& seq, Vertex& u) {
    auto rec = [&](auto&& self, std::size_t level) -> void {
      if (level == plan.size()) {
        u = static_cast<Vertex>(seq.size());
        seq.insert(seq.end(), trees[top].begin(), trees[top].end());
        return;
      }
      const auto& L = plan[level];
      seq.push_back(L.degree);
      std::size_t b = 0;
      for (std::uint32_t c = 0; c < L.degree; ++c) {
        if (c == L.pick) {
          self(self, level + 1);
        } else {
          const auto& bush = trees[L.bushes[b++]];
          seq.insert(seq.end(), bush.begin(), bush.end());
        }
      }
    };
    rec(rec, 0);
  };
  auto finish = [&](std::size_t used, const Rational& w) {
    for (std::size_t top = 0; top < trees.size(); ++top) {
      if (used + trees[top].size() > n_max) continue;
      Outdegrees seq;
      Vertex u = 0;
      assemble(top, seq, u);
      PlaneTree t = PlaneTree::from_outdegrees(seq);
      rep.rhs += w * prob[top] * marked_sum(ctx, t, {u});
      ++rep.spine_configurations;
    }
  };
  // Choose bushes for the remaining slots of the current level.
  auto grow = [&](auto&& self, std::size_t used, const Rational& w) -> void {
    finish(used, w);
    // Another spine vertex needs itself plus at least one vertex below.
    if (used + 2 > n_max) return;
    for (std::uint32_t d = 1; d < p.size() && d < n_max; ++d) {
      if (p[d] == 0) continue;
      // mu*(d) * P(K = pick | D = d)
      const Rational step = Rational(d) * p[d] / Rational(d);
      for (std::uint32_t pick = 0; pick < d; ++pick) {
        plan.push_back({d, pick, {}});
        auto fill = [&](auto&& fself, std::uint32_t slot, std::size_t u2, const Rational& w2) -> void {
          if (slot == d - 1) {
            self(self, u2, w2);
            return;
          }
          for (std::size_t b = 0; b < trees.size(); ++b) {
            if (u2 + trees[b].size() + 1 > n_max) continue;
            plan.back().bushes.push_back(b);
            fself(fself, slot + 1, u2 + trees[b].size(), w2 * prob[b]);
            plan.back().bushes.pop_back();
          }
        };
        fill(fill, 0, used + 1, w * step);
        plan.pop_back();
      }
    }
  };
  grow(grow, 0, Rational(1));
  rep.discrepancy = rep.lhs > rep.rhs ? rep.lhs - rep.rhs : rep.rhs - rep.lhs;
  return rep;
}

}  // namespace dstree
