#include "dstree/decorations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dstree/bgw.hpp"
#include "dstree/error.hpp"

namespace dstree {

const char* decoration_kind_name(DecorationKind k) {
  switch (k) {
    case DecorationKind::Point: return "point";
    case DecorationKind::Cycle: return "cycle";
    case DecorationKind::Segment: return "segment";
    case DecorationKind::Tree: return "tree";
    case DecorationKind::Custom: return "custom";
  }
  return "?";
}

const char* kit_kind_name(DecorationKit::Kind k) {
  switch (k) {
    case DecorationKit::Kind::Point: return "point";
    case DecorationKit::Kind::Cycle: return "cycle";
    case DecorationKit::Kind::Segment: return "segment";
    case DecorationKit::Kind::BgwTree: return "bgw_tree";
    case DecorationKit::Kind::Custom: return "custom";
  }
  return "?";
}

void Decoration::check_point(LocalPoint p) const {
  if (p >= n_) fail(Errc::InvalidPoint, "point " + std::to_string(p) + " outside a decoration of size " + std::to_string(n_));
}

void Decoration::finish() {
  for (auto p : ext_) check_point(p);
  check_point(root_);
  switch (kind_) {
    case DecorationKind::Point: raw_diam_ = 0; break;
    case DecorationKind::Cycle: raw_diam_ = static_cast<double>(n_ / 2); break;
    case DecorationKind::Segment: raw_diam_ = static_cast<double>(n_ - 1); break;
    case DecorationKind::Tree: {
      // Longest path: for each vertex, sum of its two deepest child branches.
      const auto& t = *tree_;
      std::vector<std::uint32_t> h(n_, 0);
      std::uint32_t best = 0;
      for (std::size_t i = n_; i-- > 0;) {
        std::uint32_t a = 0, b = 0;
        for (Vertex c : t.children(static_cast<Vertex>(i))) {
          std::uint32_t x = h[c] + 1;
          if (x > a) {
            b = a;
            a = x;
          } else if (x > b) {
            b = x;
          }
        }
        h[i] = a;
        best = std::max(best, a + b);
      }
      raw_diam_ = best;
      break;
    }
    case DecorationKind::Custom:
      raw_diam_ = n_ ? *std::max_element(matrix_->begin(), matrix_->end()) : 0.0;
      break;
  }
  if (raw_mass_.empty()) {
    raw_total_mass_ = static_cast<double>(n_ - 1);
  } else {
    if (raw_mass_.size() != n_) fail(Errc::ParamOutOfRange, "mass vector length differs from the point count");
    raw_total_mass_ = 0;
    for (double m : raw_mass_) {
      if (!(m >= 0) || !std::isfinite(m)) fail(Errc::ParamOutOfRange, "masses must be finite and nonnegative");
      raw_total_mass_ += m;
    }
  }
  if (!weights_.empty()) {
    if (weights_.size() != ext_.size()) fail(Errc::ParamOutOfRange, "slot weights length differs from k");
    double s = 0;
    for (double w : weights_) {
      if (!(w >= 0)) fail(Errc::ParamOutOfRange, "slot weights must be nonnegative");
      s += w;
    }
    if (std::abs(s - 1) > 1e-9) fail(Errc::ParamOutOfRange, "slot weights must sum to 1");
  }
}

Decoration Decoration::point() {
  Decoration d;
  d.finish();
  return d;
}

Decoration Decoration::cycle(std::uint64_t n_points) {
  if (n_points < 2) return point();
  if (n_points > UINT32_MAX) fail(Errc::SizeLimit, "cycle too large");
  Decoration d;
  d.kind_ = DecorationKind::Cycle;
  d.n_ = n_points;
  d.finish();
  return d;
}

Decoration Decoration::segment(std::uint64_t length, std::vector<LocalPoint> external_roots) {
  if (length >= UINT32_MAX) fail(Errc::SizeLimit, "segment too long");
  Decoration d;
  d.kind_ = length ? DecorationKind::Segment : DecorationKind::Point;
  d.n_ = length + 1;
  d.ext_ = std::move(external_roots);
  d.finish();
  return d;
}

Decoration Decoration::tree(std::shared_ptr<const PlaneTree> t, std::vector<LocalPoint> external_roots) {
  if (!t) fail(Errc::ParamOutOfRange, "null tree");
  Decoration d;
  d.kind_ = t->size() == 1 ? DecorationKind::Point : DecorationKind::Tree;
  d.n_ = t->size();
  if (d.kind_ == DecorationKind::Tree) d.tree_ = std::move(t);
  d.ext_ = std::move(external_roots);
  d.finish();
  return d;
}

Decoration Decoration::custom(std::vector<double> matrix, std::size_t n, LocalPoint root,
                              std::vector<LocalPoint> external_roots) {
  if (n == 0 || matrix.size() != n * n) fail(Errc::ParamOutOfRange, "custom matrix must be n x n with n >= 1");
  auto at = [&](std::size_t i, std::size_t j) { return matrix[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != 0) fail(Errc::ParamOutOfRange, "custom metric needs a zero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      double x = at(i, j);
      if (!(x >= 0) || !std::isfinite(x)) fail(Errc::ParamOutOfRange, "custom metric entries must be finite and >= 0");
      if (x != at(j, i)) fail(Errc::ParamOutOfRange, "custom metric must be symmetric");
    }
  }
  if (n <= 200) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          if (at(i, l) > at(i, j) + at(j, l) + 1e-12 * (1 + at(i, l)))
            fail(Errc::ParamOutOfRange, "custom metric violates the triangle inequality");
  }
  Decoration d;
  d.kind_ = DecorationKind::Custom;
  d.n_ = n;
  d.root_ = root;
  d.matrix_ = std::make_shared<const std::vector<double>>(std::move(matrix));
  d.ext_ = std::move(external_roots);
  d.finish();
  return d;
}

LocalPoint Decoration::external_root(std::size_t i) const {
  if (i >= ext_.size()) fail(Errc::IndexOutOfRange, "external root slot out of range");
  return ext_[i];
}

double Decoration::raw_distance(LocalPoint a, LocalPoint b) const {
  check_point(a);
  check_point(b);
  switch (kind_) {
    case DecorationKind::Point: return 0.0;
    case DecorationKind::Cycle: {
      std::uint64_t g = a > b ? a - b : b - a;
      return static_cast<double>(std::min<std::uint64_t>(g, n_ - g));
    }
    case DecorationKind::Segment: return a > b ? double(a - b) : double(b - a);
    case DecorationKind::Tree: {
      const auto& t = *tree_;
      Vertex c = t.lca(a, b);
      return double(t.depth(a)) + double(t.depth(b)) - 2.0 * double(t.depth(c));
    }
    case DecorationKind::Custom: return (*matrix_)[std::size_t(a) * n_ + b];
  }
  return 0.0;
}

std::int64_t Decoration::graph_distance(LocalPoint a, LocalPoint b) const {
  if (!is_graph()) fail(Errc::NonGraphDecoration, "custom decorations carry no graph metric");
  return static_cast<std::int64_t>(raw_distance(a, b));
}

double Decoration::mass(LocalPoint p) const {
  check_point(p);
  double m = raw_mass_.empty() ? (p == root_ ? 0.0 : 1.0) : raw_mass_[p];
  return mass_scale_ * m;
}

std::vector<std::pair<LocalPoint, LocalPoint>> Decoration::edges() const {
  std::vector<std::pair<LocalPoint, LocalPoint>> e;
  switch (kind_) {
    case DecorationKind::Point: break;
    case DecorationKind::Cycle:
      for (LocalPoint i = 0; i < n_; ++i) e.emplace_back(i, static_cast<LocalPoint>((i + 1) % n_));
      break;
    case DecorationKind::Segment:
      for (LocalPoint i = 0; i + 1 < n_; ++i) e.emplace_back(i, i + 1);
      break;
    case DecorationKind::Tree:
      for (Vertex v = 1; v < n_; ++v) e.emplace_back(tree_->parent(v), v);
      break;
    case DecorationKind::Custom: fail(Errc::NonGraphDecoration, "custom decorations carry no graph metric");
  }
  return e;
}

std::span<const double> Decoration::matrix() const {
  if (!matrix_) return {};
  return *matrix_;
}

LocalPoint Decoration::sample_nu(Rng& rng) const {
  if (!(raw_total_mass_ > 0)) fail(Errc::ZeroMass, "decoration has zero mass");
  if (raw_mass_.empty()) {
    // Uniform over the n-1 non-root points.
    std::uniform_int_distribution<std::uint64_t> u(0, n_ - 2);
    LocalPoint p = static_cast<LocalPoint>(u(rng));
    return p >= root_ ? p + 1 : p;
  }
  double x = uniform_open(rng) * raw_total_mass_;
  for (LocalPoint p = 0; p < n_; ++p) {
    x -= raw_mass_[p];
    if (x < 0) return p;
  }
  for (LocalPoint p = static_cast<LocalPoint>(n_); p-- > 0;)
    if (raw_mass_[p] > 0) return p;
  return root_;
}

LocalPoint Decoration::sample_mu(Rng& rng) const {
  if (ext_.empty()) return root_;
  if (weights_.empty()) {
    std::uniform_int_distribution<std::size_t> u(0, ext_.size() - 1);
    return ext_[u(rng)];
  }
  double x = uniform_open(rng);
  for (std::size_t i = 0; i < ext_.size(); ++i) {
    x -= weights_[i];
    if (x < 0) return ext_[i];
  }
  return ext_.back();
}

Decoration Decoration::rescaled(double factor_dist, double factor_mass) const {
  if (!(factor_dist > 0) || !(factor_mass > 0) || !std::isfinite(factor_dist) || !std::isfinite(factor_mass))
    fail(Errc::ParamOutOfRange, "scaling factors must be positive and finite");
  Decoration d = *this;
  d.dist_scale_ *= factor_dist;
  d.mass_scale_ *= factor_mass;
  return d;
}

Decoration Decoration::with_external_roots(std::vector<LocalPoint> roots) const {
  Decoration d = *this;
  d.ext_ = std::move(roots);
  if (d.weights_.size() != d.ext_.size()) d.weights_.clear();
  d.finish();
  return d;
}

Decoration Decoration::with_mass(std::vector<double> raw_mass) const {
  Decoration d = *this;
  d.raw_mass_ = std::move(raw_mass);
  d.finish();
  return d;
}

Decoration Decoration::with_slot_weights(std::vector<double> weights) const {
  Decoration d = *this;
  d.weights_ = std::move(weights);
  d.finish();
  return d;
}

Decoration make_cycle(std::uint64_t k) {
  if (k < 2) return Decoration::point().with_external_roots(std::vector<LocalPoint>(k, 0));
  Decoration d = Decoration::cycle(k);
  std::vector<LocalPoint> ext(k);
  std::iota(ext.begin(), ext.end(), LocalPoint{0});
  return d.with_external_roots(std::move(ext));
}

Decoration make_segment(std::uint64_t k, const SegmentRule& rule) {
  if (!(rule.length_per_root > 0) || !std::isfinite(rule.length_per_root))
    fail(Errc::BadRule, "length_per_root must be positive and finite");
  if (k == 0) return Decoration::point();
  std::uint64_t len = rule.length ? *rule.length
                                  : static_cast<std::uint64_t>(std::ceil(rule.length_per_root * double(k) - 1e-9));
  std::vector<LocalPoint> ext(k);
  for (std::uint64_t i = 1; i <= k; ++i) {
    std::uint64_t pos = len;
    if (rule.placement == SegmentRule::Placement::Uniform) pos = (i * len + k - 1) / k;
    ext[i - 1] = static_cast<LocalPoint>(pos);
  }
  return Decoration::segment(len, std::move(ext));
}

Decoration make_bgw_decoration(std::uint64_t k, const OffspringLaw& inner, Rng& rng) {
  if (inner.pmf(1) != 0) fail(Errc::InfeasibleConditioning, "inner law must have p_1 = 0");
  if (!inner.critical()) fail(Errc::InfeasibleConditioning, "inner law must be critical");
  if (k == 0) return Decoration::point();
  auto c = Conditioning::leaves(k);
  if (!conditioning_feasible(inner, c)) fail(Errc::InfeasibleConditioning, "no tree with that many leaves");
  auto t = std::make_shared<const PlaneTree>(sample_conditioned_bgw({inner, c}, rng));
  std::vector<LocalPoint> leaves;
  leaves.reserve(k);
  for (Vertex v = 0; v < t->size(); ++v)
    if (t->outdegree(v) == 0) leaves.push_back(v);
  return Decoration::tree(std::move(t), std::move(leaves));
}

Decoration shuffle_external_roots(const Decoration& d, Rng& rng) {
  std::vector<std::size_t> perm(d.k());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Fisher-Yates with our own uniform draws keeps the stream portable.
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> u(0, i - 1);
    std::swap(perm[i - 1], perm[u(rng)]);
  }
  std::vector<LocalPoint> roots(d.k());
  std::vector<double> w;
  for (std::size_t i = 0; i < perm.size(); ++i) roots[i] = d.external_root(perm[i]);
  if (!d.slot_weights().empty()) {
    w.resize(d.k());
    for (std::size_t i = 0; i < perm.size(); ++i) w[i] = d.slot_weights()[perm[i]];
  }
  return d.with_external_roots(std::move(roots)).with_slot_weights(std::move(w));
}

Decoration rescale(const Decoration& d, double factor_dist, double factor_mass) {
  return d.rescaled(factor_dist, factor_mass);
}

DecorationKit DecorationKit::cycle(double gamma, double beta) {
  DecorationKit k;
  k.kind = Kind::Cycle;
  k.gamma = gamma;
  k.beta = beta;
  return k;
}

DecorationKit DecorationKit::segment_kit(SegmentRule rule, double gamma, double beta) {
  DecorationKit k;
  k.kind = Kind::Segment;
  k.segment = rule;
  k.gamma = gamma;
  k.beta = beta;
  return k;
}

DecorationKit DecorationKit::point_kit() {
  DecorationKit k;
  k.kind = Kind::Point;
  return k;
}

DecorationKit DecorationKit::bgw_tree(OffspringLaw inner, double gamma, double beta) {
  DecorationKit k;
  k.kind = Kind::BgwTree;
  k.inner = std::move(inner);
  k.gamma = gamma;
  k.beta = beta;
  return k;
}

DecorationKit DecorationKit::custom(std::vector<Decoration> table, double gamma, double beta) {
  DecorationKit k;
  k.kind = Kind::Custom;
  k.table = std::move(table);
  k.gamma = gamma;
  k.beta = beta;
  return k;
}

Decoration DecorationKit::make(std::uint64_t k, Rng& rng) const {
  Decoration d = Decoration::point();
  switch (kind) {
    case Kind::Point: d = Decoration::point().with_external_roots(std::vector<LocalPoint>(k, 0)); break;
    case Kind::Cycle: d = make_cycle(k); break;
    case Kind::Segment:
      try {
        d = make_segment(k, segment);
      } catch (const Error& e) {
        fail(Errc::KitFailure, std::string("segment kit: ") + e.what());
      }
      break;
    case Kind::BgwTree:
      if (!inner) fail(Errc::KitFailure, "bgw_tree kit without an inner law");
      try {
        d = make_bgw_decoration(k, *inner, rng);
      } catch (const Error& e) {
        fail(Errc::KitFailure, std::string("bgw_tree kit: ") + e.what());
      }
      break;
    case Kind::Custom:
      if (k >= table.size()) fail(Errc::KitFailure, "custom kit has no decoration of size " + std::to_string(k));
      d = table[k];
      if (d.k() != k) fail(Errc::KitFailure, "custom kit entry has the wrong number of external roots");
      break;
  }
  if (shuffle) d = shuffle_external_roots(d, rng);
  return d;
}

}  // namespace dstree
