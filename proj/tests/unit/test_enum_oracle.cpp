#include "doctest.h"

#include <functional>
#include <map>

#include "dstree/enumeration.hpp"
#include "dstree/error.hpp"
#include "dstree/glue.hpp"
#include "dstree/oracle.hpp"
#include "dstree/spine_identity.hpp"

using namespace dstree;

namespace {

// Weighted count of plane trees with n leaves and no outdegree-1 vertex, q per internal
// non-root vertex, by direct recursion over compositions of the leaf count.
unsigned __int128 recursive_count(std::uint32_t n, std::uint64_t q) {
  std::vector<unsigned __int128> sub(n + 1);  // weighted subtrees hanging below the root
  sub[1] = 1;
  std::function<unsigned __int128(std::uint32_t)> at_least_two = [&](std::uint32_t m) {
    std::vector<unsigned __int128> any(m + 1);  // compositions with >= 1 part
    for (std::uint32_t s = 1; s <= m; ++s) {
      any[s] = sub[s];
      for (std::uint32_t first = 1; first < s; ++first) any[s] += sub[first] * any[s - first];
    }
    return any[m] - sub[m];
  };
  for (std::uint32_t m = 2; m <= n; ++m) sub[m] = q * at_least_two(m);
  return n == 1 ? 1 : at_least_two(n);
}

// Outdegree sequences of plane trees with n vertices, by brute force over all tuples.
std::vector<Outdegrees> brute_trees(std::uint32_t n) {
  std::vector<Outdegrees> out;
  Outdegrees d(n, 0);
  std::function<void(std::uint32_t, std::int64_t)> rec = [&](std::uint32_t i, std::int64_t w) {
    if (i == n) {
      if (w == -1) out.push_back(d);
      return;
    }
    for (std::uint32_t k = 0; k < n; ++k) {
      std::int64_t nw = w + std::int64_t(k) - 1;
      if (nw < 0 && i + 1 < n) continue;
      d[i] = k;
      rec(i + 1, nw);
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace

TEST_CASE("printed series and closed form") {
  const std::vector<std::vector<int>> printed = {
      {1, 1, 3, 11, 45, 197}, {1, 1, 5, 31, 215, 1597}, {1, 1, 7, 61, 595, 6217}};
  for (std::uint32_t k = 0; k < 3; ++k)
    for (std::uint32_t n = 1; n <= 6; ++n) CHECK(count_marked_trees(n, k) == printed[k][n - 1]);
  for (std::uint32_t k = 0; k <= 3; ++k) {
    auto s = series_from_closed_form(k, 8);
    CHECK(s[0] == 0);
    for (std::uint32_t n = 1; n <= 8; ++n) {
      CHECK(s[n] == count_marked_trees(n, k));
      CHECK(count_marked_trees(n, k) == BigInt(std::uint64_t(recursive_count(n, k + 1))));
    }
  }
}

TEST_CASE("sum over marks equals the unmarked count") {
  for (std::uint32_t n = 1; n <= 8; ++n) {
    auto poly = marked_tree_polynomial(n);
    BigInt sum = 0, at2 = 0, pw = 1;
    for (const auto& c : poly) sum += c, at2 += c * pw, pw *= 2;
    CHECK(sum == count_marked_trees(n, 0));
    CHECK(at2 == count_marked_trees(n, 1));
  }
  CHECK_THROWS_AS(count_marked_trees(9, 0), Error);
}

TEST_CASE("enumeration against brute force") {
  for (std::uint32_t n = 1; n <= 7; ++n) {
    std::vector<char> all(n, 1);
    auto e = enumerate_plane_trees(n, all);
    CHECK(e == brute_trees(n));
  }
  CHECK(enumerate_plane_trees(8, std::vector<char>(8, 1)).size() == 429);  // Catalan(7)
}

TEST_CASE("exact conditioned laws") {
  auto binary = exact_conditioned_law({Rational(1, 2), 0, Rational(1, 2)}, 3);
  CHECK(binary.size() == 1);
  CHECK(binary.begin()->second == 1);
  auto b5 = exact_conditioned_law({Rational(1, 2), 0, Rational(1, 2)}, 5);
  CHECK(b5.size() == 2);
  for (const auto& [t, p] : b5) CHECK(p == Rational(1, 2));
  auto geo = exact_conditioned_law(OffspringLaw::geometric(0.5), 4);
  CHECK(geo.size() == 5);
  for (const auto& [t, p] : geo) CHECK(p == Rational(1, 5));

  // General finite law: weights proportional to the product of mu(d_i), summing to 1 exactly.
  std::vector<Rational> mu{Rational(1, 3), Rational(1, 6), Rational(1, 4), Rational(1, 4)};
  for (std::uint32_t n = 1; n <= 7; ++n) {
    auto law = exact_conditioned_law(mu, n);
    Rational total = 0, z = 0;
    for (const auto& t : brute_trees(n)) {
      Rational w = 1;
      for (auto d : t) w *= d < mu.size() ? mu[d] : Rational(0);
      z += w;
    }
    for (const auto& [t, p] : law) {
      Rational w = 1;
      for (auto d : t) w *= mu[d];
      CHECK(p == w / z);
      total += p;
    }
    CHECK(total == 1);
  }
  CHECK_THROWS_AS(exact_conditioned_law({Rational(1, 2), 0, Rational(1, 2)}, 4), Error);
}

TEST_CASE("BFS oracle") {
  Rng rng(1);
  auto cherry = glue(PlaneTree::from_outdegrees({2, 0, 0}), DecorationKit::cycle(), rng);
  BfsOracle o(cherry);
  CHECK(o.node_count() == 2);
  CHECK(o.hops({1, 0}, {2, 0}) == 1);
  CHECK(o.class_of({0, 0}) == o.class_of({1, 0}));

  auto star = glue(PlaneTree::from_outdegrees({3, 0, 0, 0}), DecorationKit::cycle(), rng);
  BfsOracle s(star);
  CHECK(s.node_count() == 3);
  CHECK(s.hops({2, 0}, {3, 0}) == 1);

  auto scaled = star.rescaled(0.5, 1.0);
  CHECK(BfsOracle(scaled).distance({2, 0}, {3, 0}) == 0.5);

  DecoratedTree custom(PlaneTree(), {Decoration::custom({0, 1, 1, 0}, 2, 0, {})});
  try {
    BfsOracle bad(custom);
    FAIL("expected NonGraphDecoration");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonGraphDecoration);
  }
}

TEST_CASE("spine identity for the binary law") {
  std::vector<Rational> p{Rational(1, 2), 0, Rational(1, 2)};
  // Property: the line contains a vertex of outdegree 2 below the root.
  auto deep_binary = [](std::span<const LineEntry> line) {
    for (std::size_t i = 1; i < line.size(); ++i)
      if (line[i].degree == 2) return true;
    return false;
  };
  auto r = verify_spine_identity(p, deep_binary, 7);
  CHECK(r.exact());

  // Independent left side: P(|T| <= 7 and some vertex has the property).
  Rational lhs = 0;
  for (std::uint32_t n = 1; n <= 7; n += 2)
    for (const auto& deg : enumerate_plane_trees(n, {1, 0, 1})) {
      auto t = PlaneTree::from_outdegrees(deg);
      bool hit = false;
      for (Vertex v = 1; v < t.size(); ++v) hit = hit || t.outdegree(v) == 2;
      if (!hit) continue;
      Rational w = 1;
      for (std::uint32_t i = 0; i < n; ++i) w /= 2;
      lhs += w;
    }
  CHECK(r.lhs == lhs);

  // Marks and a test function.
  MarkTable marks{{{0.0, 1}}, {{0.0, 1}}, {{1.0, Rational(1, 3)}, {2.0, Rational(2, 3)}}};
  auto heavy = [](std::span<const LineEntry> line) {
    double s = 0;
    for (auto e : line) s += e.mark;
    return s >= 3.0;
  };
  auto leaves = [](const PlaneTree& t, Vertex, std::span<const double>) { return Rational(t.leaf_count()); };
  auto m = verify_spine_identity(p, heavy, 7, marks, leaves);
  CHECK(m.exact());
  CHECK(m.lhs > 0);
  CHECK(m.spine_configurations > 0);
  CHECK_THROWS_AS(verify_spine_identity({Rational(1, 2), Rational(1, 2)}, heavy, 5), Error);
}
