#include "doctest.h"

#include <cmath>
#include <map>

#include "dstree/bgw.hpp"
#include "dstree/enumeration.hpp"
#include "dstree/error.hpp"
#include "dstree/spine_identity.hpp"

using namespace dstree;

namespace {

double tv_distance(const std::map<Outdegrees, Rational>& exact, const std::map<Outdegrees, double>& freq) {
  double tv = 0;
  for (const auto& [t, p] : exact) {
    auto it = freq.find(t);
    tv += std::abs(p.convert_to<double>() - (it == freq.end() ? 0.0 : it->second));
  }
  for (const auto& [t, f] : freq)
    if (!exact.count(t)) tv += f;
  return tv / 2;
}

std::map<Outdegrees, double> tally(const OffspringLaw& law, Conditioning c, int draws, Rng& rng) {
  std::map<Outdegrees, double> f;
  for (int i = 0; i < draws; ++i) f[sample_conditioned_bgw({law, c}, rng).outdegrees()] += 1.0 / draws;
  return f;
}

bool valid_lukasiewicz(const Outdegrees& d) {
  std::int64_t w = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    w += std::int64_t(d[i]) - 1;
    if (i + 1 < d.size() && w < 0) return false;
  }
  return w == -1;
}

}  // namespace

TEST_CASE("binary law conditioned on 3 and 5 vertices") {
  auto law = OffspringLaw::finite({0.5, 0.0, 0.5});
  Rng rng(1);
  for (int i = 0; i < 100; ++i)
    CHECK(sample_conditioned_bgw({law, Conditioning::vertices(3)}, rng).outdegrees() == Outdegrees{2, 0, 0});
  auto f = tally(law, Conditioning::vertices(5), 10000, rng);
  CHECK(f.size() == 2);
  const double se = std::sqrt(0.25 / 10000);
  for (const auto& [t, p] : f) CHECK(std::abs(p - 0.5) < 3 * se);
}

TEST_CASE("geometric law conditioned on 4 vertices: chi-square against enumeration") {
  auto law = OffspringLaw::geometric(0.5);
  auto exact = exact_conditioned_law(law, 4);
  CHECK(exact.size() == 5);
  Rng rng(2);
  const int draws = 100000;
  auto f = tally(law, Conditioning::vertices(4), draws, rng);
  double chi2 = 0;
  for (const auto& [t, p] : exact) {
    double e = p.convert_to<double>() * draws, o = f[t] * draws;
    chi2 += (o - e) * (o - e) / e;
  }
  CHECK(chi2 < 18.47);  // chi-square(4) upper 0.001 quantile
}

TEST_CASE("vertex mode total variation for finite laws, n <= 8") {
  Rng rng(3);
  for (auto p : {std::vector<double>{0.25, 0.5, 0.25}, std::vector<double>{0.5, 0.25, 0.0, 0.25}})
    for (std::uint64_t n = 4; n <= 8; ++n) {
      auto law = OffspringLaw::finite(p);
      auto exact = exact_conditioned_law(law, std::uint32_t(n));
      auto f = tally(law, Conditioning::vertices(n), 100000, rng);
      CHECK(tv_distance(exact, f) < 0.02);
    }
}

TEST_CASE("every accepted draw is a valid Lukasiewicz path") {
  Rng rng(4);
  auto law = OffspringLaw::stable(1.5);
  for (std::uint64_t n = 3; n < 300; ++n) {
    auto t = sample_conditioned_bgw({law, Conditioning::vertices(n)}, rng);
    CHECK(t.size() == n);
    CHECK(valid_lukasiewicz(t.outdegrees()));
  }
  auto rot = cycle_lemma_rotate({0, 2, 1, 0});
  CHECK(valid_lukasiewicz(rot));
  CHECK(rot == Outdegrees{2, 1, 0, 0});
}

TEST_CASE("leaf mode") {
  auto law = OffspringLaw::finite({0.5, 0.0, 0.5});
  Rng rng(5);
  auto exact = exact_leaf_conditioned_law({Rational(1, 2), 0, Rational(1, 2)}, 4);
  auto f = tally(law, Conditioning::leaves(4), 20000, rng);
  CHECK(tv_distance(exact, f) < 0.02);
  for (const auto& [t, p] : f) CHECK(PlaneTree::from_outdegrees(t).leaf_count() == 4);
  auto st = OffspringLaw::stable(1.5);
  for (int i = 0; i < 20; ++i)
    CHECK(sample_conditioned_bgw({st, Conditioning::leaves(50)}, rng).leaf_count() == 50);
}

TEST_CASE("infeasible conditioning") {
  Rng rng(6);
  auto law = OffspringLaw::finite({0.5, 0.0, 0.5});
  CHECK_FALSE(conditioning_feasible(law, Conditioning::vertices(4)));
  try {
    sample_conditioned_bgw({law, Conditioning::vertices(4)}, rng);
    FAIL("expected InfeasibleConditioning");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InfeasibleConditioning);
  }
}

TEST_CASE("Kesten cut") {
  Rng rng(7);
  auto zero = [](std::uint64_t, Rng&) { return 0.0; };
  auto binary = OffspringLaw::finite({0.5, 0.0, 0.5});
  for (int i = 0; i < 200; ++i) {
    auto m = sample_kesten_cut(binary, 4, zero, rng);
    REQUIRE(m.spine.size() == 5);
    for (std::size_t j = 0; j < 4; ++j) CHECK(m.tree.outdegree(m.spine[j]) == 2);
    for (std::size_t j = 0; j + 1 < m.spine.size(); ++j) CHECK(m.tree.parent(m.spine[j + 1]) == m.spine[j]);
  }
  auto k0 = sample_kesten_cut(binary, 0, zero, rng);
  CHECK(k0.spine == std::vector<Vertex>{0});

  // Root degree along the spine follows k mu(k); mean sum k^2 mu(k) = 3 for geometric(1/2).
  auto geo = OffspringLaw::geometric(0.5);
  const int draws = 50000;
  double s = 0, s2 = 0;
  std::map<std::uint32_t, double> freq;
  auto identity = [](std::uint64_t d, Rng&) { return double(d); };
  for (int i = 0; i < draws; ++i) {
    // The root degree is independent of the bush sizes, so redrawing oversized trees keeps its law.
    MarkedSpineTree m;
    for (;;) {
      try {
        m = sample_kesten_cut(geo, 1, identity, rng, 100000);
        break;
      } catch (const Error& e) {
        REQUIRE(e.code() == Errc::SizeLimit);
      }
    }
    double d = m.tree.outdegree(0);
    s += d, s2 += d * d;
    freq[m.tree.outdegree(0)] += 1.0 / draws;
    CHECK(m.marks[0] == d);
  }
  double mean = s / draws, se = std::sqrt((s2 / draws - mean * mean) / draws);
  CHECK(std::abs(mean - 3.0) < 3 * se);
  for (std::uint32_t k = 1; k <= 6; ++k) {
    double p = k * geo.pmf(k);
    CHECK(std::abs(freq[k] - p) < 3 * std::sqrt(p * (1 - p) / draws));
  }
}

TEST_CASE("spine identity, small cases") {
  std::vector<Rational> p{Rational(1, 2), 0, Rational(1, 2)};
  auto height1 = [](std::span<const LineEntry> line) { return line.size() >= 2; };
  auto r = verify_spine_identity(p, height1, 7);
  CHECK(r.exact());
  CHECK(r.lhs > 0);

  auto never = [](std::span<const LineEntry>) { return false; };
  auto z = verify_spine_identity(p, never, 7);
  CHECK(z.lhs == 0);
  CHECK(z.rhs == 0);

  // Property true at the root: both sides equal P(|T| <= 7) = P(|T| in {1,3,5,7}).
  auto at_root = [](std::span<const LineEntry> line) { return line.size() == 1; };
  auto a = verify_spine_identity(p, at_root, 7);
  CHECK(a.exact());
  Rational mass = 0;
  for (std::uint32_t n = 1; n <= 7; n += 2) {
    auto trees = enumerate_plane_trees(n, {1, 0, 1});
    Rational w = 1;
    for (std::uint32_t i = 0; i < n; ++i) w /= 2;
    mass += Rational(trees.size()) * w;
  }
  CHECK(a.lhs == mass);
  CHECK_THROWS_AS(verify_spine_identity(p, height1, 12), Error);
}
