#include "dstree/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dstree/error.hpp"

namespace dstree {

LimitKit LimitKit::from_kit(const DecorationKit& kit) {
  LimitKit out;
  switch (kit.kind) {
    case DecorationKit::Kind::Point: return point();
    case DecorationKit::Kind::Cycle:
      if (kit.gamma != 1.0) fail(Errc::KitFailure, "k^-gamma C_k converges only for gamma = 1");
      return circle();
    case DecorationKit::Kind::Segment:
      if (kit.segment.length) return point();
      if (kit.gamma != 1.0) fail(Errc::KitFailure, "segments of length c k converge only for gamma = 1");
      out.kind = Kind::Segment;
      out.length = kit.segment.length_per_root;
      out.placement = kit.segment.placement;
      return out;
    case DecorationKit::Kind::BgwTree:
      if (!kit.inner) fail(Errc::KitFailure, "bgw_tree kit without an inner law");
      out.kind = Kind::Tree;
      out.inner = kit.inner;
      out.kit_gamma = kit.gamma;
      out.kit_beta = kit.beta;
      return out;
    case DecorationKit::Kind::Custom: break;
  }
  fail(Errc::KitFailure, "custom kits have no known scaling limit");
}

LimitBlock LimitBlock::make(const LimitKit& kit, double weight_hint, Rng& rng) {
  LimitBlock b;
  b.kind_ = kit.kind;
  b.length_ = kit.length;
  b.uniform_mu_ = kit.placement == SegmentRule::Placement::Uniform;
  if (kit.kind == LimitKit::Kind::Tree) {
    const double hint = std::clamp(weight_hint, 0.0, 1.0);
    auto leaves = static_cast<std::uint64_t>(std::llround(double(kit.surrogate_leaves) * hint));
    leaves = std::clamp<std::uint64_t>(leaves, std::min(kit.min_surrogate_leaves, kit.surrogate_leaves),
                                       kit.surrogate_leaves);
    const double l = double(leaves);
    b.surrogate_ = std::make_shared<const Decoration>(
        make_bgw_decoration(leaves, *kit.inner, rng).rescaled(std::pow(l, -kit.kit_gamma), std::pow(l, -kit.kit_beta)));
  }
  return b;
}

double LimitBlock::distance(BlockPoint a, BlockPoint b) const {
  switch (kind_) {
    case LimitKit::Kind::Point: return 0.0;
    case LimitKit::Kind::Circle: {
      double g = std::abs(a.x - b.x);
      return std::min(g, length_ - g);
    }
    case LimitKit::Kind::Segment: return std::abs(a.x - b.x);
    case LimitKit::Kind::Tree: return surrogate_->distance(a.p, b.p);
  }
  return 0.0;
}

BlockPoint LimitBlock::sample_mu(Rng& rng) const {
  BlockPoint p;
  switch (kind_) {
    case LimitKit::Kind::Point: break;
    case LimitKit::Kind::Circle: p.x = length_ * uniform_open(rng); break;
    case LimitKit::Kind::Segment: p.x = uniform_mu_ ? length_ * uniform_open(rng) : length_; break;
    case LimitKit::Kind::Tree: p.p = surrogate_->sample_mu(rng); break;
  }
  return p;
}

BlockPoint LimitBlock::sample_nu(Rng& rng) const {
  BlockPoint p;
  switch (kind_) {
    case LimitKit::Kind::Point: fail(Errc::ZeroMass, "point blocks carry no mass");
    case LimitKit::Kind::Circle:
    case LimitKit::Kind::Segment: p.x = length_ * uniform_open(rng); break;
    case LimitKit::Kind::Tree: p.p = surrogate_->sample_nu(rng); break;
  }
  return p;
}

double LimitBlock::diameter() const {
  switch (kind_) {
    case LimitKit::Kind::Point: return 0.0;
    case LimitKit::Kind::Circle: return length_ / 2;
    case LimitKit::Kind::Segment: return length_;
    case LimitKit::Kind::Tree: return surrogate_->diameter();
  }
  return 0.0;
}

double LimitBlock::nu_total() const {
  switch (kind_) {
    case LimitKit::Kind::Point: return 0.0;
    case LimitKit::Kind::Circle:
    case LimitKit::Kind::Segment: return length_;
    case LimitKit::Kind::Tree: return surrogate_->total_mass();
  }
  return 0.0;
}

double gem_power_sum_mean(double xi, double theta, double gamma) {
  if (!(gamma > xi)) fail(Errc::ParamOutOfRange, "need gamma > xi");
  return std::exp(std::lgamma(theta + 1) + std::lgamma(gamma - xi) - std::lgamma(1 - xi) - std::lgamma(theta + gamma));
}

void DecoratedSpine::check(const SpinePoint& p) const {
  if (p.block == SpinePoint::kRoot || p.block == SpinePoint::kTip) return;
  if (p.block >= blocks_.size()) fail(Errc::InvalidPoint, "block index outside the spine");
  const auto& b = blocks_[p.block].block;
  if (b.kind() == LimitKit::Kind::Tree && p.local.p >= b.surrogate()->size())
    fail(Errc::InvalidPoint, "point outside its block");
}

double DecoratedSpine::unit_distance(const SpinePoint& a, const SpinePoint& b) const {
  check(a);
  check(b);
  const std::int64_t n = static_cast<std::int64_t>(blocks_.size());
  auto pos = [&](const SpinePoint& p) -> std::int64_t {
    if (p.block == SpinePoint::kRoot) return -1;
    if (p.block == SpinePoint::kTip) return n;
    return p.block;
  };
  const SpinePoint* lo = &a;
  const SpinePoint* hi = &b;
  if (pos(*lo) > pos(*hi)) std::swap(lo, hi);
  const std::int64_t i = pos(*lo), j = pos(*hi);
  if (i == j) {
    if (i < 0 || i == n) return 0.0;
    const auto& blk = blocks_[i];
    return blk.unit_scale * blk.block.distance(lo->local, hi->local);
  }
  double left = 0, right = 0;
  std::size_t from = 0, to = static_cast<std::size_t>(n);
  if (i >= 0) {
    const auto& blk = blocks_[i];
    left = blk.unit_scale * blk.block.distance(lo->local, blk.chain);
    from = static_cast<std::size_t>(i) + 1;
  }
  if (j < n) {
    const auto& blk = blocks_[j];
    right = blk.unit_scale * blk.block.distance(blk.block.root(), hi->local);
    to = static_cast<std::size_t>(j);
  }
  return left + (chain_[to] - chain_[from]) + right;
}

double DecoratedSpine::r_bound() const {
  double r = 0;
  for (const auto& b : blocks_) r += b.unit_scale * b.block.diameter();
  return mg_ * r;
}

SpinePoint DecoratedSpine::sample_mu(Rng& rng) const {
  if (blocks_.empty() || !(cum_p_.back() > 0)) return SpinePoint{};
  double u = uniform_open(rng) * cum_p_.back();
  auto i = static_cast<std::uint32_t>(std::min<std::size_t>(
      std::upper_bound(cum_p_.begin(), cum_p_.end(), u) - cum_p_.begin(), blocks_.size() - 1));
  return {i, blocks_[i].block.sample_mu(rng)};
}

double DecoratedSpine::nu_total() const { return cum_nu_.empty() ? 0.0 : std::pow(m_, beta_) * cum_nu_.back(); }

SpinePoint DecoratedSpine::sample_nu(Rng& rng) const {
  if (cum_nu_.empty() || !(cum_nu_.back() > 0)) fail(Errc::ZeroMass, "spine carries no mass");
  double u = uniform_open(rng) * cum_nu_.back();
  auto i = static_cast<std::uint32_t>(std::min<std::size_t>(
      std::upper_bound(cum_nu_.begin(), cum_nu_.end(), u) - cum_nu_.begin(), blocks_.size() - 1));
  while (blocks_[i].block.nu_total() <= 0) --i;
  return {i, blocks_[i].block.sample_nu(rng)};
}

DecoratedSpine DecoratedSpine::with_mass_scale(double m) const {
  if (!(m > 0)) fail(Errc::ParamOutOfRange, "mass scale must be positive");
  DecoratedSpine s = *this;
  s.m_ = m;
  s.mg_ = std::pow(m, gamma_);
  return s;
}

DecoratedSpine sample_decorated_spine(double alpha, double gamma, double beta, double m, const LimitKit& kit,
                                      const SpineOptions& opts, Rng& rng) {
  if (!(alpha > 1 && alpha < 2)) fail(Errc::ParamOutOfRange, "alpha must lie in (1,2)");
  if (!(gamma > alpha - 1 && gamma <= 1)) fail(Errc::ParamOutOfRange, "gamma must lie in (alpha-1, 1]");
  if (!(beta > 0)) fail(Errc::ParamOutOfRange, "beta must be positive");
  if (!(m > 0) || !std::isfinite(m)) fail(Errc::ParamOutOfRange, "mass scale must be positive");
  DecoratedSpine s;
  s.m_ = m;
  s.mg_ = std::pow(m, gamma);
  s.gamma_ = gamma;
  s.beta_ = beta;
  const double xi = alpha - 1;
  s.sticks_ = sample_gem(xi, xi, GemOptions{opts.trunc_eps, opts.max_atoms, false}, rng);
  const auto& atoms = s.sticks_.atoms;
  const double pmax = atoms.empty() ? 1.0 : *std::max_element(atoms.begin(), atoms.end());
  s.blocks_.resize(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    auto& b = s.blocks_[i];
    b.weight = atoms[i];
    b.unit_scale = std::pow(atoms[i], gamma);
    b.y = uniform_open(rng);
    b.block = LimitBlock::make(kit, atoms[i] / pmax, rng);
    b.chain = b.block.sample_mu(rng);
  }
  std::sort(s.blocks_.begin(), s.blocks_.end(), [](const SpineBlock& a, const SpineBlock& b) { return a.y < b.y; });
  const std::size_t n = s.blocks_.size();
  s.chain_.assign(n + 1, 0.0);
  s.cum_p_.resize(n);
  s.cum_nu_.resize(n);
  double cp = 0, cn = 0, dmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = s.blocks_[i];
    s.chain_[i + 1] = s.chain_[i] + b.unit_scale * b.block.distance(b.block.root(), b.chain);
    cp += b.weight;
    cn += std::pow(b.weight, beta) * b.block.nu_total();
    s.cum_p_[i] = cp;
    s.cum_nu_[i] = cn;
    dmax = std::max(dmax, b.block.diameter());
  }
  // The unallocated stick is r times an independent GEM(xi, theta + n xi).
  const double r = s.sticks_.residual;
  if (r > 0) s.unit_trunc_ = std::pow(r, gamma) * gem_power_sum_mean(xi, xi + double(n) * xi, gamma) * dmax;
  return s;
}

const char* point_measure_name(PointMeasure m) {
  switch (m) {
    case PointMeasure::UniformMass: return "uniform_mass";
    case PointMeasure::BlockMass: return "block_mass";
    case PointMeasure::Tips: return "tips";
  }
  return "?";
}

void MarginalSpace::check(const MarginalPoint& x) const {
  if (x.spine >= spines_.size()) fail(Errc::InvalidPoint, "spine index out of range");
  spines_[x.spine].check(x.point);
}

std::uint32_t MarginalSpace::lca(std::uint32_t a, std::uint32_t b) const {
  while (depth_[a] > depth_[b]) a = parent_[a];
  while (depth_[b] > depth_[a]) b = parent_[b];
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
  }
  return a;
}

std::uint32_t MarginalSpace::child_toward(std::uint32_t w, std::uint32_t j) const {
  while (parent_[j] != w) j = parent_[j];
  return j;
}

SpinePoint MarginalSpace::exit_point(std::uint32_t w, const MarginalPoint& x) const {
  if (x.spine == w) return x.point;
  return attach_[child_toward(w, x.spine)];
}

double MarginalSpace::distance_to_root(const MarginalPoint& x) const {
  check(x);
  return prefix_[x.spine] + spines_[x.spine].distance(SpinePoint{}, x.point);
}

double MarginalSpace::distance(const MarginalPoint& x, const MarginalPoint& y) const {
  check(x);
  check(y);
  if (x.spine == y.spine) return spines_[x.spine].distance(x.point, y.point);
  const std::uint32_t w = lca(x.spine, y.spine);
  auto leg = [&](const MarginalPoint& p) {
    if (p.spine == w) return 0.0;
    std::uint32_t a = child_toward(w, p.spine);
    return spines_[p.spine].distance(SpinePoint{}, p.point) + prefix_[p.spine] - prefix_[a];
  };
  return leg(x) + spines_[w].distance(exit_point(w, x), exit_point(w, y)) + leg(y);
}

double MarginalSpace::uncertainty(const MarginalPoint& x, const MarginalPoint& y) const {
  check(x);
  check(y);
  const std::uint32_t w = lca(x.spine, y.spine);
  double u = spines_[w].truncation_bound();
  for (std::uint32_t j = x.spine; j != w; j = parent_[j]) u += spines_[j].truncation_bound();
  for (std::uint32_t j = y.spine; j != w; j = parent_[j]) u += spines_[j].truncation_bound();
  return u;
}

std::vector<MarginalPoint> MarginalSpace::sample_points(std::size_t n, PointMeasure measure, Rng& rng) const {
  std::vector<MarginalPoint> out;
  out.reserve(n);
  const std::size_t k = spines_.size();
  std::vector<double> cum(k);
  double acc = 0;
  for (std::size_t j = 0; j < k; ++j) {
    switch (measure) {
      case PointMeasure::UniformMass: acc += mlmc_.increments[j]; break;
      case PointMeasure::BlockMass: acc += spines_[j].nu_total(); break;
      case PointMeasure::Tips: acc += 1; break;
    }
    cum[j] = acc;
  }
  if (!(acc > 0)) fail(Errc::ZeroMass, "marginal carries no mass for this measure");
  for (std::size_t i = 0; i < n; ++i) {
    double u = uniform_open(rng) * acc;
    auto j = static_cast<std::uint32_t>(
        std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(), k - 1));
    switch (measure) {
      case PointMeasure::UniformMass: out.push_back({j, spines_[j].sample_mu(rng)}); break;
      case PointMeasure::BlockMass:
        while (spines_[j].nu_total() <= 0) --j;
        out.push_back({j, spines_[j].sample_nu(rng)});
        break;
      case PointMeasure::Tips: out.push_back(tip(j)); break;
    }
  }
  return out;
}

MarginalSpace build_marginal(double alpha, double gamma, double beta, std::size_t k, const LimitKit& kit,
                             const MarginalOptions& opts, Rng& rng) {
  if (k == 0) fail(Errc::ParamOutOfRange, "need at least one spine");
  if (!(opts.trunc_eps > 0)) fail(Errc::ParamOutOfRange, "trunc_eps must be positive");
  if (!(alpha > 1 && alpha < 2)) fail(Errc::ParamOutOfRange, "alpha must lie in (1,2)");
  MarginalSpace ms;
  ms.alpha_ = alpha;
  ms.gamma_ = gamma;
  ms.beta_ = beta;
  ms.mlmc_ = sample_mlmc(1.0 / alpha, 1.0 - 1.0 / alpha, k, rng);
  ms.spines_.reserve(k);
  ms.parent_.assign(k, 0);
  ms.depth_.assign(k, 0);
  ms.attach_.assign(k, SpinePoint{});
  ms.prefix_.assign(k, 0.0);
  std::vector<double> cum;
  cum.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double m = ms.mlmc_.increments[j];
    const double eps = std::min(0.5, opts.trunc_eps / m);
    ms.spines_.push_back(sample_decorated_spine(alpha, gamma, beta, m, kit, SpineOptions{eps, opts.max_atoms}, rng));
    if (j > 0) {
      double u = uniform_open(rng) * cum.back();
      auto p = static_cast<std::uint32_t>(
          std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(), j - 1));
      ms.parent_[j] = p;
      ms.depth_[j] = ms.depth_[p] + 1;
      ms.attach_[j] = ms.spines_[p].sample_mu(rng);
      ms.prefix_[j] = ms.prefix_[p] + ms.spines_[p].distance(SpinePoint{}, ms.attach_[j]);
    }
    cum.push_back((cum.empty() ? 0.0 : cum.back()) + m);
  }
  return ms;
}

}  // namespace dstree
