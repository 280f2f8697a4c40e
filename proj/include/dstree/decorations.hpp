#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dstree/offspring.hpp"
#include "dstree/plane_tree.hpp"
#include "dstree/random.hpp"

namespace dstree {

using LocalPoint = std::uint32_t;

enum class DecorationKind { Point, Cycle, Segment, Tree, Custom };

const char* decoration_kind_name(DecorationKind k);

// A finite pointed metric space with ordered external roots and a mass measure.
// Graph kinds (point, cycle, segment, tree) keep an integer graph metric and a
// separate distance factor, so unscaled distances stay exact.
class Decoration {
 public:
  static Decoration point();
  static Decoration cycle(std::uint64_t n_points);
  // Path 0 - 1 - ... - length, internal root 0.
  static Decoration segment(std::uint64_t length, std::vector<LocalPoint> external_roots);
  // Tree metric on the vertices of t, internal root = t's root.
  static Decoration tree(std::shared_ptr<const PlaneTree> t, std::vector<LocalPoint> external_roots);
  // Row-major n x n matrix; validated as a metric.
  static Decoration custom(std::vector<double> matrix, std::size_t n, LocalPoint root,
                           std::vector<LocalPoint> external_roots);

  DecorationKind kind() const { return kind_; }
  bool is_graph() const { return kind_ != DecorationKind::Custom; }
  std::size_t size() const { return n_; }  // number of points
  std::size_t k() const { return ext_.size(); }
  LocalPoint root() const { return root_; }
  std::span<const LocalPoint> external_roots() const { return ext_; }
  LocalPoint external_root(std::size_t i) const;  // 0-based slot

  double distance(LocalPoint a, LocalPoint b) const { return dist_scale_ * raw_distance(a, b); }
  // Unscaled metric; an integer for graph kinds.
  double raw_distance(LocalPoint a, LocalPoint b) const;
  std::int64_t graph_distance(LocalPoint a, LocalPoint b) const;
  double diameter() const { return dist_scale_ * raw_diam_; }
  double raw_diameter() const { return raw_diam_; }
  double distance_scale() const { return dist_scale_; }

  // nu; by default counting measure on non-root points.
  double mass(LocalPoint p) const;
  double total_mass() const { return mass_scale_ * raw_total_mass_; }
  double mass_scale() const { return mass_scale_; }
  bool default_mass() const { return raw_mass_.empty(); }
  const std::vector<double>& raw_mass() const { return raw_mass_; }
  // Probability of each external-root slot under mu; uniform when empty.
  const std::vector<double>& slot_weights() const { return weights_; }

  // Graph edges (unscaled, unit length); NonGraphDecoration for the custom kind.
  std::vector<std::pair<LocalPoint, LocalPoint>> edges() const;
  const PlaneTree* tree_structure() const { return tree_.get(); }
  std::span<const double> matrix() const;
  std::uint64_t segment_length() const { return kind_ == DecorationKind::Segment ? n_ - 1 : 0; }

  LocalPoint sample_nu(Rng& rng) const;  // ZeroMass if total mass is 0
  LocalPoint sample_mu(Rng& rng) const;  // external root slot per slot weights; root when k = 0

  Decoration rescaled(double factor_dist, double factor_mass) const;
  Decoration with_external_roots(std::vector<LocalPoint> roots) const;
  Decoration with_mass(std::vector<double> raw_mass) const;
  Decoration with_slot_weights(std::vector<double> weights) const;

 private:
  Decoration() = default;
  void check_point(LocalPoint p) const;
  void finish();

  DecorationKind kind_ = DecorationKind::Point;
  std::size_t n_ = 1;
  LocalPoint root_ = 0;
  std::vector<LocalPoint> ext_;
  std::shared_ptr<const PlaneTree> tree_;
  std::shared_ptr<const std::vector<double>> matrix_;
  std::vector<double> raw_mass_;
  std::vector<double> weights_;
  double dist_scale_ = 1.0;
  double mass_scale_ = 1.0;
  double raw_diam_ = 0.0;
  double raw_total_mass_ = 0.0;
};

// k >= 2: cycle on k vertices, root 0, l(i) = vertex i-1; k in {0,1}: a point.
Decoration make_cycle(std::uint64_t k);

struct SegmentRule {
  enum class Placement { FarEnd, Uniform };
  std::optional<std::uint64_t> length;  // fixed length, or ceil(length_per_root * k)
  double length_per_root = 1.0;
  Placement placement = Placement::FarEnd;
};
// FarEnd: every root at the far end. Uniform: l(i) at ceil(i * length / k).
Decoration make_segment(std::uint64_t k, const SegmentRule& rule = {});

// BGW(inner) conditioned on k leaves; external roots are the leaves in preorder.
Decoration make_bgw_decoration(std::uint64_t k, const OffspringLaw& inner, Rng& rng);

Decoration shuffle_external_roots(const Decoration& d, Rng& rng);
Decoration rescale(const Decoration& d, double factor_dist, double factor_mass);

struct DecorationKit {
  enum class Kind { Point, Cycle, Segment, BgwTree, Custom };
  Kind kind = Kind::Cycle;
  double gamma = 1.0;
  double beta = 1.0;
  SegmentRule segment;
  std::optional<OffspringLaw> inner;  // bgw_tree
  std::vector<Decoration> table;      // custom: decoration used for size k = index
  bool shuffle = false;

  static DecorationKit cycle(double gamma = 1.0, double beta = 1.0);
  static DecorationKit segment_kit(SegmentRule rule = {}, double gamma = 1.0, double beta = 1.0);
  static DecorationKit point_kit();
  static DecorationKit bgw_tree(OffspringLaw inner, double gamma = 0.5, double beta = 1.0);
  static DecorationKit custom(std::vector<Decoration> table, double gamma = 1.0, double beta = 1.0);

  // A decoration with k external roots; KitFailure when the kit cannot produce one.
  Decoration make(std::uint64_t k, Rng& rng) const;
  bool deterministic() const { return kind != Kind::BgwTree && !shuffle; }
};

const char* kit_kind_name(DecorationKit::Kind k);

}  // namespace dstree
