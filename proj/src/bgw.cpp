#include "dstree/bgw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dstree/error.hpp"

namespace dstree {

namespace {

// Degrees below this are counted with binomials, the rest drawn one by one.
constexpr std::uint64_t kCountedDegrees = 96;

// Unbounded knapsack: can `target` be written as a sum of parts from `parts`?
bool representable(std::uint64_t target, const std::vector<std::uint64_t>& parts) {
  if (target == 0) return true;
  if (std::find(parts.begin(), parts.end(), 1u) != parts.end()) return true;
  std::vector<char> reach(target + 1, 0);
  reach[0] = 1;
  for (std::uint64_t s : parts) {
    if (s == 0 || s > target) continue;
    for (std::uint64_t i = s; i <= target; ++i)
      if (reach[i - s]) reach[i] = 1;
  }
  return reach[target] != 0;
}

// Parts available for the knapsack: degrees (vertex mode) or degrees minus one (leaf mode).
std::vector<std::uint64_t> support_parts(const OffspringLaw& law, std::uint64_t shift, std::uint64_t limit) {
  std::vector<std::uint64_t> parts;
  std::uint64_t top = law.max_degree() ? std::min(*law.max_degree(), limit + shift) : limit + shift;
  for (std::uint64_t d = shift + 1; d <= top; ++d)
    if (law.pmf(d) > 0.0) parts.push_back(d - shift);
  return parts;
}

struct Counts {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> classes;  // (degree, multiplicity)
  std::vector<std::uint64_t> singles;                          // degrees drawn individually
  std::uint64_t sum = 0;
};

// Multinomial draw of `count` degrees from the law restricted to [first, inf), aborting
// as soon as the degree sum exceeds `budget`. Returns false on abort.
bool draw_counts(const OffspringLaw& law, std::uint64_t first, std::uint64_t count, std::uint64_t budget, Rng& rng,
                 Counts& out) {
  out.classes.clear();
  out.singles.clear();
  out.sum = 0;
  std::uint64_t left = count;
  std::uint64_t stop = law.max_degree() ? *law.max_degree() + 1 : std::min(budget + 2, kCountedDegrees);
  std::uint64_t k = first;
  for (; k < stop && left > 0; ++k) {
    double t = law.tail(k);
    if (!(t > 0.0)) {
      left = 0;
      break;
    }
    double p = std::min(1.0, law.pmf(k) / t);
    std::uint64_t nk = left;
    if (p < 1.0) {
      std::binomial_distribution<std::uint64_t> bin(left, p);
      nk = bin(rng);
    }
    if (nk == 0) continue;
    left -= nk;
    if (k > 0 && nk > (budget - out.sum) / k) return false;
    out.sum += k * nk;
    out.classes.emplace_back(k, nk);
  }
  for (; left > 0; --left) {
    std::uint64_t d = law.sample_at_least(k, budget - out.sum, rng);
    if (d > budget - out.sum) return false;
    out.sum += d;
    out.singles.push_back(d);
  }
  return true;
}

void expand(const Counts& c, std::vector<std::uint32_t>& seq) {
  for (auto [deg, mult] : c.classes) seq.insert(seq.end(), mult, static_cast<std::uint32_t>(deg));
  for (auto d : c.singles) seq.push_back(static_cast<std::uint32_t>(d));
}

}  // namespace

bool conditioning_feasible(const OffspringLaw& law, const Conditioning& c) {
  if (!law.sampleable() || c.n == 0) return false;
  if (law.pmf(0) <= 0.0) return false;
  if (c.mode == Conditioning::Mode::Vertices) {
    if (law.kind() == OffspringLaw::Kind::Geometric) return true;
    if (law.kind() == OffspringLaw::Kind::Stable && !law.max_degree()) return c.n != 2;
    return representable(c.n - 1, support_parts(law, 0, c.n - 1));
  }
  if (c.n == 1) return true;
  if (law.kind() == OffspringLaw::Kind::Geometric) return true;
  if (law.kind() == OffspringLaw::Kind::Stable && !law.max_degree()) return true;
  return representable(c.n - 1, support_parts(law, 1, c.n - 1));
}

std::vector<std::uint32_t> cycle_lemma_rotate(std::vector<std::uint32_t> degrees) {
  std::int64_t s = 0, best = 1;
  std::size_t cut = 0;
  for (std::size_t j = 0; j < degrees.size(); ++j) {
    s += static_cast<std::int64_t>(degrees[j]) - 1;
    if (s < best) {
      best = s;
      cut = j + 1;
    }
  }
  if (s != -1) fail(Errc::InvalidPath, "cycle lemma needs increments summing to -1");
  std::rotate(degrees.begin(), degrees.begin() + static_cast<std::ptrdiff_t>(cut % degrees.size()), degrees.end());
  return degrees;
}

PlaneTree sample_conditioned_bgw(const ConditionedBgwSpec& spec, Rng& rng) {
  const auto& law = spec.law;
  const auto& cond = spec.condition;
  if (!conditioning_feasible(law, cond))
    fail(Errc::InfeasibleConditioning, "no tree with " + std::to_string(cond.n) +
                                           (cond.mode == Conditioning::Mode::Vertices ? " vertices" : " leaves") +
                                           " has positive probability");
  Counts counts;
  std::vector<std::uint32_t> seq;
  const double p0 = law.pmf(0);
  const double nd = static_cast<double>(cond.n);
  auto log_binom = [&](std::uint64_t r) {
    const double rd = static_cast<double>(r);
    double lw = std::lgamma(nd + 1.0) - std::lgamma(rd + 1.0) - std::lgamma(nd - rd + 1.0);
    if (r > 0) lw += rd * std::log1p(-p0);
    if (r < cond.n) lw += (nd - rd) * std::log(p0);
    return lw;
  };
  const double log_binom_mode =
      p0 < 1.0 ? log_binom(std::min<std::uint64_t>(cond.n, static_cast<std::uint64_t>((nd + 1.0) * (1.0 - p0))))
               : 0.0;
  for (std::uint64_t attempt = 0; attempt < spec.max_retries; ++attempt) {
    seq.clear();
    if (cond.mode == Conditioning::Mode::Vertices) {
      // Non-leaf degrees form a renewal walk; stop when it reaches n - 1. A hit with r
      // non-leaves is accepted with weight Binomial(n, 1 - p0)(r) relative to its mode.
      const std::uint64_t n = cond.n;
      std::uint64_t sum = 0;
      while (sum < n - 1) {
        std::uint64_t d = law.sample_at_least(1, n - 1 - sum, rng);
        if (d > n - 1 - sum) break;
        sum += d;
        seq.push_back(static_cast<std::uint32_t>(d));
      }
      if (sum != n - 1) continue;
      if (std::log(uniform_open(rng)) > log_binom(seq.size()) - log_binom_mode) continue;
      seq.resize(n, 0);
      std::shuffle(seq.begin(), seq.end(), rng);
    } else {
      // i.i.d. degrees up to the n-th leaf: F non-leaves before it, exchangeable arrangement.
      const std::uint64_t n = cond.n;
      std::negative_binomial_distribution<std::uint64_t> negbin(n, law.pmf(0));
      const std::uint64_t f = negbin(rng);
      const std::uint64_t total = n + f;
      if (!draw_counts(law, 1, f, total - 1, rng, counts) || counts.sum != total - 1) continue;
      seq.reserve(total);
      seq.assign(n - 1, 0);
      expand(counts, seq);
      std::shuffle(seq.begin(), seq.end(), rng);
      seq.push_back(0);
    }
    // from_outdegrees re-validates the rotated sequence as a Lukasiewicz path.
    return PlaneTree::from_outdegrees(cycle_lemma_rotate(std::move(seq)));
  }
  fail(Errc::RetriesExhausted, "bridge rejection exceeded " + std::to_string(spec.max_retries) + " attempts");
}

PlaneTree sample_bgw(const OffspringLaw& law, std::uint64_t max_vertices, Rng& rng) {
  std::vector<std::uint32_t> seq;
  std::int64_t pending = 1;
  while (pending > 0) {
    if (seq.size() >= max_vertices) fail(Errc::SizeLimit, "BGW tree exceeded the vertex cap");
    std::uint64_t d = law.sample(rng);
    if (d > max_vertices) fail(Errc::SizeLimit, "BGW tree exceeded the vertex cap");
    seq.push_back(static_cast<std::uint32_t>(d));
    pending += static_cast<std::int64_t>(d) - 1;
  }
  return PlaneTree::from_outdegrees(std::move(seq));
}

MarkedSpineTree sample_kesten_cut(const OffspringLaw& law, std::uint32_t k, const MarkLaw& marks, Rng& rng,
                                  std::uint64_t max_vertices) {
  if (!law.sampleable() || !law.critical(1e-9)) fail(Errc::ParamOutOfRange, "Kesten tree needs a critical law");
  std::vector<std::uint32_t> seq;
  std::vector<Vertex> spine;
  auto append_tree = [&](const PlaneTree& t) {
    const auto& d = t.outdegrees();
    seq.insert(seq.end(), d.begin(), d.end());
  };
  // Spine degrees and child choices first, then bushes in depth-first order.
  std::vector<std::uint64_t> deg(k), pick(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    deg[i] = law.sample_size_biased(rng);
    pick[i] = std::uniform_int_distribution<std::uint64_t>(0, deg[i] - 1)(rng);
  }
  auto emit = [&](auto&& self, std::uint32_t level) -> void {
    if (seq.size() > max_vertices) fail(Errc::SizeLimit, "Kesten tree exceeded the vertex cap");
    spine.push_back(static_cast<Vertex>(seq.size()));
    if (level == k) {
      append_tree(sample_bgw(law, max_vertices, rng));
      return;
    }
    seq.push_back(static_cast<std::uint32_t>(deg[level]));
    for (std::uint64_t c = 0; c < deg[level]; ++c) {
      if (c == pick[level])
        self(self, level + 1);
      else
        append_tree(sample_bgw(law, max_vertices, rng));
    }
  };
  emit(emit, 0);
  MarkedSpineTree out{PlaneTree::from_outdegrees(std::move(seq)), std::move(spine), {}};
  out.marks.assign(out.tree.size(), 0.0);
  if (marks) {
    for (Vertex v = 0; v < out.tree.size(); ++v) {
      double m = marks(out.tree.outdegree(v), rng);
      if (!(m >= 0.0)) fail(Errc::ParamOutOfRange, "marks must be nonnegative");
      out.marks[v] = m;
    }
  }
  return out;
}

}  // namespace dstree
