#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "dstree/decorations.hpp"
#include "dstree/laws.hpp"
#include "dstree/random.hpp"

namespace dstree {

// Scaling limit of a decoration kit, k^-gamma B_k as k grows.
struct LimitKit {
  enum class Kind { Point, Circle, Segment, Tree };
  Kind kind = Kind::Circle;
  double length = 1.0;  // circumference of the circle or length of the segment
  SegmentRule::Placement placement = SegmentRule::Placement::FarEnd;
  // Tree: rescaled leaf-conditioned BGW(inner) surrogate with up to `surrogate_leaves` leaves.
  std::optional<OffspringLaw> inner;
  std::uint64_t surrogate_leaves = 10'000;
  std::uint64_t min_surrogate_leaves = 8;
  double kit_gamma = 0.5;  // surrogate distances scaled by leaves^-kit_gamma
  double kit_beta = 1.0;   // surrogate masses scaled by leaves^-kit_beta

  static LimitKit circle() { return {}; }
  static LimitKit point() {
    LimitKit k;
    k.kind = Kind::Point;
    return k;
  }
  // KitFailure for kits without a known limit (custom tables, fixed-length segments).
  static LimitKit from_kit(const DecorationKit& kit);
};

struct BlockPoint {
  double x = 0.0;      // position on a circle or segment
  LocalPoint p = 0;    // vertex of a tree surrogate
};

// One unit-scale limit decoration.
class LimitBlock {
 public:
  LimitBlock() = default;
  static LimitBlock make(const LimitKit& kit, double weight_hint, Rng& rng);

  LimitKit::Kind kind() const { return kind_; }
  double distance(BlockPoint a, BlockPoint b) const;
  BlockPoint root() const { return BlockPoint{}; }
  BlockPoint sample_mu(Rng& rng) const;
  BlockPoint sample_nu(Rng& rng) const;
  double diameter() const;
  double nu_total() const;
  const Decoration* surrogate() const { return surrogate_.get(); }

 private:
  LimitKit::Kind kind_ = LimitKit::Kind::Point;
  double length_ = 0.0;
  bool uniform_mu_ = false;
  std::shared_ptr<const Decoration> surrogate_;
};

struct SpinePoint {
  static constexpr std::uint32_t kRoot = std::numeric_limits<std::uint32_t>::max();
  static constexpr std::uint32_t kTip = kRoot - 1;
  std::uint32_t block = kRoot;  // index in increasing Y order, or kRoot / kTip
  BlockPoint local;
};

struct SpineBlock {
  double y = 0.0;         // position along the spine
  double weight = 0.0;    // stick P_i
  double unit_scale = 0;  // P_i^gamma
  BlockPoint chain;       // Z_i ~ mu_i
  LimitBlock block;
};

struct SpineOptions {
  double trunc_eps = 1e-8;
  std::size_t max_atoms = 100'000;
};

// Skewer of scaled limit decorations in uniform random order. Distances are kept at
// unit mass scale and multiplied by m^gamma on the way out.
class DecoratedSpine {
 public:
  DecoratedSpine() = default;

  double mass_scale() const { return m_; }
  double gamma() const { return gamma_; }
  double beta() const { return beta_; }
  std::size_t block_count() const { return blocks_.size(); }
  const SpineBlock& block(std::size_t i) const { return blocks_.at(i); }
  const GemWeights& sticks() const { return sticks_; }

  double distance(const SpinePoint& a, const SpinePoint& b) const { return mg_ * unit_distance(a, b); }
  double unit_distance(const SpinePoint& a, const SpinePoint& b) const;
  // Root-to-tip length, sum_i (m P_i)^gamma d_i(rho_i, Z_i).
  double length() const { return mg_ * chain_.back(); }
  // m^gamma sum_i P_i^gamma diam(B_i) over retained blocks.
  double r_bound() const;
  // Estimated contribution of the truncated sticks to any distance.
  double truncation_bound() const { return mg_ * unit_trunc_; }

  SpinePoint sample_mu(Rng& rng) const;  // block proportional to P_i, point ~ mu_i
  SpinePoint sample_nu(Rng& rng) const;  // block proportional to P_i^beta nu_i(B_i), point ~ nu_i
  double nu_total() const;               // m^beta sum P_i^beta nu_i(B_i)
  void check(const SpinePoint& p) const;

  // Same spine with mass scale m.
  DecoratedSpine with_mass_scale(double m) const;

 private:
  friend DecoratedSpine sample_decorated_spine(double, double, double, double, const LimitKit&,
                                               const SpineOptions&, Rng&);
  double m_ = 1.0, mg_ = 1.0, gamma_ = 1.0, beta_ = 1.0;
  GemWeights sticks_;
  std::vector<SpineBlock> blocks_;
  std::vector<double> chain_;   // chain_[i] = sum_{j<i} P_j^gamma d_j(rho_j, Z_j), size blocks+1
  std::vector<double> cum_p_;   // prefix sums of P in Y order
  std::vector<double> cum_nu_;  // prefix sums of P^beta nu_i(B_i) in Y order
  double unit_trunc_ = 0.0;
};

DecoratedSpine sample_decorated_spine(double alpha, double gamma, double beta, double m, const LimitKit& kit,
                                      const SpineOptions& opts, Rng& rng);

struct MarginalPoint {
  std::uint32_t spine = 0;
  SpinePoint point;
};

enum class PointMeasure { UniformMass, BlockMass, Tips };
const char* point_measure_name(PointMeasure m);

struct MarginalOptions {
  // Spine j keeps sticks until its unallocated mass times m_j drops below trunc_eps.
  double trunc_eps = 1e-8;
  std::size_t max_atoms = 100'000;
};

// Spines 1..k with MLMC(1/alpha, 1 - 1/alpha) mass scales, attached by the
// weighted recursive tree rule at mu-random points of the parent spine.
class MarginalSpace {
 public:
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  double beta() const { return beta_; }
  std::size_t k() const { return spines_.size(); }
  const DecoratedSpine& spine(std::size_t j) const { return spines_.at(j); }
  const MlmcState& mlmc() const { return mlmc_; }
  // Parent spine of spine j (j >= 1); spine 0 has none.
  std::uint32_t parent(std::size_t j) const { return parent_.at(j); }
  const SpinePoint& attach_point(std::size_t j) const { return attach_.at(j); }

  MarginalPoint root() const { return {0, SpinePoint{}}; }
  MarginalPoint tip(std::uint32_t j) const { return {j, SpinePoint{SpinePoint::kTip, {}}}; }

  double distance(const MarginalPoint& x, const MarginalPoint& y) const;
  double distance_to_root(const MarginalPoint& x) const;
  // Sum of truncation bounds of the spines visited by the geodesic.
  double uncertainty(const MarginalPoint& x, const MarginalPoint& y) const;

  std::vector<MarginalPoint> sample_points(std::size_t n, PointMeasure measure, Rng& rng) const;

 private:
  friend MarginalSpace build_marginal(double, double, double, std::size_t, const LimitKit&,
                                      const MarginalOptions&, Rng&);
  void check(const MarginalPoint& x) const;
  std::uint32_t lca(std::uint32_t a, std::uint32_t b) const;
  SpinePoint exit_point(std::uint32_t w, const MarginalPoint& x) const;
  std::uint32_t child_toward(std::uint32_t w, std::uint32_t j) const;

  double alpha_ = 1.5, gamma_ = 1.0, beta_ = 1.0;
  MlmcState mlmc_;
  std::vector<DecoratedSpine> spines_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> depth_;
  std::vector<SpinePoint> attach_;
  std::vector<double> prefix_;  // distance from the root to the root of spine j
};

MarginalSpace build_marginal(double alpha, double gamma, double beta, std::size_t k, const LimitKit& kit,
                             const MarginalOptions& opts, Rng& rng);

// Expected sum of Q_j^gamma over GEM(xi, theta) weights Q.
double gem_power_sum_mean(double xi, double theta, double gamma);

}  // namespace dstree
