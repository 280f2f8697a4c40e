#include "dstree/enumeration.hpp"

#include <cmath>
#include <stdexcept>

#include "dstree/error.hpp"

namespace dstree {

Rational to_rational(double x) {
  if (!std::isfinite(x)) fail(Errc::ParamOutOfRange, "cannot convert a non-finite value to a rational");
  int e = 0;
  double m = std::frexp(x, &e);
  // m * 2^53 is an integer.
  BigInt num = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  Rational r(num);
  if (e > 0) r *= Rational(BigInt(1) << e);
  if (e < 0) r /= Rational(BigInt(1) << (-e));
  return r;
}

namespace {

constexpr std::uint32_t kMaxEnumerated = 14;

void extend(std::uint32_t n, const std::vector<char>& allowed, Outdegrees& cur, std::int64_t w,
            std::vector<Outdegrees>& out) {
  const std::uint32_t i = static_cast<std::uint32_t>(cur.size());
  if (i == n) {
    if (w == -1) out.push_back(cur);
    return;
  }
  const std::int64_t remaining_after = static_cast<std::int64_t>(n - i - 1);
  for (std::uint32_t d = 0; d < allowed.size(); ++d) {
    if (!allowed[d]) continue;
    std::int64_t nw = w + static_cast<std::int64_t>(d) - 1;
    if (remaining_after > 0 && (nw < 0 || nw > remaining_after - 1)) continue;
    if (remaining_after == 0 && nw != -1) continue;
    cur.push_back(d);
    extend(n, allowed, cur, nw, out);
    cur.pop_back();
  }
}

std::vector<char> allowed_from(const std::vector<Rational>& p, std::uint32_t n) {
  std::vector<char> allowed(std::min<std::size_t>(p.size(), n), 0);
  for (std::size_t d = 0; d < allowed.size(); ++d) allowed[d] = p[d] > 0 ? 1 : 0;
  return allowed;
}

Rational weight(const Outdegrees& t, const std::vector<Rational>& p) {
  Rational w = 1;
  for (auto d : t) w *= p[d];
  return w;
}

std::map<Outdegrees, Rational> normalize(std::map<Outdegrees, Rational> m) {
  Rational z = 0;
  for (auto& [t, w] : m) z += w;
  if (z == 0) fail(Errc::InfeasibleConditioning, "conditioning event has probability zero");
  for (auto& [t, w] : m) w /= z;
  return m;
}

}  // namespace

std::vector<Outdegrees> enumerate_plane_trees(std::uint32_t n, const std::vector<char>& allowed) {
  if (n == 0) return {};
  if (n > kMaxEnumerated) fail(Errc::SupportTooLarge, "exhaustive enumeration limited to 14 vertices");
  std::vector<Outdegrees> out;
  Outdegrees cur;
  extend(n, allowed, cur, 0, out);
  return out;
}

std::map<Outdegrees, Rational> exact_conditioned_law(const std::vector<Rational>& p, std::uint32_t n) {
  std::map<Outdegrees, Rational> law;
  for (auto& t : enumerate_plane_trees(n, allowed_from(p, n))) law.emplace(t, weight(t, p));
  return normalize(std::move(law));
}

std::map<Outdegrees, Rational> exact_conditioned_law(const OffspringLaw& law, std::uint32_t n) {
  if (!law.sampleable()) fail(Errc::SupportTooLarge, "law has no probability mass function");
  if (n > kMaxEnumerated) fail(Errc::SupportTooLarge, "exhaustive enumeration limited to 14 vertices");
  // Degrees >= n cannot occur in an n-vertex tree.
  std::vector<Rational> p;
  for (std::uint32_t d = 0; d < n; ++d) p.push_back(to_rational(law.pmf(d)));
  return exact_conditioned_law(p, n);
}

std::map<Outdegrees, Rational> exact_leaf_conditioned_law(const std::vector<Rational>& p, std::uint32_t leaves) {
  if (p.size() > 1 && p[1] != 0) fail(Errc::SupportTooLarge, "leaf conditioning with p_1 > 0 has infinite support");
  if (leaves == 0) fail(Errc::InfeasibleConditioning, "need at least one leaf");
  std::map<Outdegrees, Rational> law;
  // Without outdegree 1 a tree with L leaves has at most 2L - 1 vertices.
  for (std::uint32_t n = leaves; n <= 2 * leaves - 1; ++n) {
    for (auto& t : enumerate_plane_trees(n, allowed_from(p, n))) {
      std::uint32_t l = 0;
      for (auto d : t) l += d == 0;
      if (l == leaves) law.emplace(t, weight(t, p));
    }
  }
  return normalize(std::move(law));
}

std::vector<BigInt> marked_tree_polynomial(std::uint32_t n_leaves) {
  if (n_leaves == 0 || n_leaves > 30) fail(Errc::SizeLimit, "leaf count must lie in [1, 30]");
  using Poly = std::vector<BigInt>;
  auto add_into = [](Poly& a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  };
  auto mul = [](const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return Poly{};
    Poly c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  const std::uint32_t n = n_leaves;
  // sub[j]: a non-root subtree with j leaves (internal vertices weighted by q).
  // forest[j]: ordered sequences of >= 2 subtrees with j leaves in total.
  std::vector<Poly> sub(n + 1), forest(n + 1);
  sub[1] = Poly{1};
  for (std::uint32_t j = 2; j <= n; ++j) {
    // seq[d][l]: sequences of d subtrees with l leaves; only l <= j matters.
    std::vector<std::vector<Poly>> seq(j + 1, std::vector<Poly>(j + 1));
    for (std::uint32_t l = 1; l < j; ++l) seq[1][l] = sub[l];
    Poly total;
    for (std::uint32_t d = 2; d <= j; ++d) {
      for (std::uint32_t l = d; l <= j; ++l) {
        for (std::uint32_t first = 1; first + (d - 1) <= l && first < j; ++first)
          add_into(seq[d][l], mul(sub[first], seq[d - 1][l - first]));
      }
      add_into(total, seq[d][j]);
    }
    forest[j] = total;
    sub[j] = Poly{0};
    add_into(sub[j], mul(Poly{0, 1}, forest[j]));
  }
  Poly root = n == 1 ? Poly{1} : forest[n];
  while (root.size() > 1 && root.back() == 0) root.pop_back();
  return root;
}

BigInt count_marked_trees(std::uint32_t n_leaves, std::uint32_t k) {
  if (n_leaves == 0 || n_leaves > 8) fail(Errc::SizeLimit, "count_marked_trees supports 1 to 8 leaves");
  auto poly = marked_tree_polynomial(n_leaves);
  BigInt q = k + 1, acc = 0, pw = 1;
  for (auto& c : poly) {
    acc += c * pw;
    pw *= q;
  }
  return acc;
}

std::vector<BigInt> series_from_closed_form(std::uint32_t k, std::uint32_t n_max) {
  if (n_max > 30) fail(Errc::SizeLimit, "series expansion limited to 30 terms");
  const Rational kk = k;
  // sqrt(1 + a z + b z^2)
  const Rational a = -(4 * kk + 6), b = 1;
  std::vector<Rational> s(n_max + 1);
  s[0] = 1;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    Rational c = n == 1 ? a : (n == 2 ? b : Rational(0));
    for (std::uint32_t i = 1; i < n; ++i) c -= s[i] * s[n - i];
    s[n] = c / 2;
  }
  const Rational denom = 2 * (kk + 1) * (kk + 2);
  std::vector<BigInt> out(n_max + 1);
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    Rational num = -s[n];
    if (n == 0) num += 1;
    if (n == 1) num += 2 * kk * kk + 4 * kk + 1;
    Rational coef = num / denom;
    if (denominator(coef) != 1) throw std::logic_error("non-integer series coefficient");
    out[n] = numerator(coef);
  }
  return out;
}

}  // namespace dstree
