#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dstree/random.hpp"

namespace dstree {

// Reproduction law mu on {0,1,2,...}.
//
//   finite     p_0..p_K given explicitly
//   geometric  p_k = (1-q) q^k
//   stable     generating function s + (1-s)^alpha / alpha, alpha in (1,2]; critical,
//              p_1 = 0, tail P(D >= k) ~ c k^-alpha. alpha = 2 is the binary law {0:1/2, 2:1/2}.
//   power_tail tail-only description P(X >= x) = c x^-alpha of the step variable; used for
//              normalizing constants only, cannot be sampled.
class OffspringLaw {
 public:
  enum class Kind { Finite, Geometric, Stable, PowerTail };

  static OffspringLaw finite(std::vector<double> p);
  static OffspringLaw geometric(double q);
  static OffspringLaw stable(double alpha);
  static OffspringLaw power_tail(double alpha, double c);

  Kind kind() const { return kind_; }
  bool sampleable() const { return kind_ != Kind::PowerTail; }
  // Largest degree with positive mass, or nullopt for unbounded support.
  std::optional<std::uint64_t> max_degree() const;
  // Tail index in (1,2) if the law is in a stable domain of attraction with infinite variance.
  std::optional<double> alpha() const;
  double tail_constant() const { return c_; }
  double param() const { return param_; }
  const std::vector<double>& finite_probs() const { return p_; }

  double pmf(std::uint64_t k) const;
  // P(D >= k).
  double tail(std::uint64_t k) const;
  // P(D* >= k) for the size-biased law D* ~ k mu(k); requires mean 1.
  double size_biased_tail(std::uint64_t k) const;
  double mean() const;
  bool critical(double tol = 1e-9) const;

  // P(|D - 1| >= x), the two-sided tail of a walk step (power_tail: c x^-alpha capped at 1).
  double step_tail(double x) const;

  std::uint64_t sample(Rng& rng) const;
  std::uint64_t sample_size_biased(Rng& rng) const;
  // D conditioned on D >= k, by inversion; values above `cap` are reported as cap + 1.
  std::uint64_t sample_at_least(std::uint64_t k, std::uint64_t cap, Rng& rng) const;

 private:
  OffspringLaw() = default;
  void build_tables();
  template <class Tail>
  std::uint64_t invert_tail(const Tail& tail, std::uint64_t k, double v, std::uint64_t cap) const;

  Kind kind_ = Kind::Finite;
  double param_ = 0.0;  // q for geometric, alpha for stable/power_tail
  double c_ = 0.0;      // tail constant
  std::vector<double> p_;
  // Cached pmf/tail for small degrees (all kinds except power_tail).
  std::vector<double> pmf_table_;
  std::vector<double> tail_table_;
};

// b_n = |(1-alpha)/Gamma(2-alpha)|^{-1/alpha} * inf{x : P(|X| >= x) <= 1/n}, X = D - 1.
double bn_normalizer(const OffspringLaw& law, std::uint64_t n);
// Leaf-count variant: (|Gamma(1-alpha)| / P(D=0))^{1/alpha} * inf{x >= 0 : P(D > x) <= 1/n}.
double bn_normalizer_leaves(const OffspringLaw& law, std::uint64_t n);

}  // namespace dstree
