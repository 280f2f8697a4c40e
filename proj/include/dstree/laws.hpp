#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "dstree/random.hpp"

namespace dstree {

// One-sided stable variable with Laplace transform exp(-lambda^alpha), alpha in (0,1).
double sample_positive_stable(double alpha, Rng& rng);

// E[M^p] for M ~ ML(eta, theta).
double ml_moment(double eta, double theta, int p);

// Generalized Mittag-Leffler law ML(eta, theta): the law of S^-eta under the
// theta-polynomially tilted one-sided eta-stable law.
class MittagLefflerSampler {
 public:
  MittagLefflerSampler(double eta, double theta);
  double operator()(Rng& rng) const;

  double eta() const { return eta_; }
  double theta() const { return theta_; }

 private:
  double sample_nonnegative(Rng& rng) const;
  double log_weight(double u) const;  // log of the tilted density of U, up to a constant

  double eta_;
  double theta_;
  double base_theta_;  // theta, or theta + 1 when theta < 0
  double tilt_;        // c = base_theta (1 - eta) / eta
  double log_a0_;
  std::vector<double> cell_left_;
  std::vector<double> cell_width_;
  std::vector<double> cell_logw_;
  std::vector<double> cell_cum_;  // cumulative envelope mass
};

double sample_ml(double eta, double theta, Rng& rng);

struct GemOptions {
  double trunc_eps = 1e-8;
  // Hard cap on the number of sticks; GEM(xi, .) residuals decay only like n^{-(1-xi)/xi}.
  std::size_t max_atoms = 1'000'000;
  bool ranked = false;
};

struct GemWeights {
  double xi = 0.0;
  double theta = 0.0;
  std::vector<double> atoms;  // stick order, or decreasing when ranked
  double residual = 1.0;      // unallocated stick mass
  bool ranked = false;

  double allocated() const;
  GemWeights ranked_copy() const;
};

GemWeights sample_gem(double xi, double theta, const GemOptions& opts, Rng& rng);
GemWeights sample_gem(double xi, double theta, double trunc_eps, Rng& rng);

struct MlmcState {
  double eta = 0.0;
  double theta = 0.0;
  std::vector<double> values;      // M_1 .. M_k
  std::vector<double> increments;  // m_j = M_j - M_{j-1}, M_0 = 0
};

// M_k ~ ML(eta, theta + k - 1), then M_n = beta_n M_{n+1} backwards.
MlmcState sample_mlmc(double eta, double theta, std::size_t k, Rng& rng);

struct DiversityEstimate {
  double value = 0.0;   // Gamma(1 - xi) r P_(r)^xi at the deepest trusted rank r
  double spread = 0.0;  // half-range of the same statistic over ranks in [r/10, r]
  std::size_t rank = 0;
};

// Ranks whose atom exceeds the residual are exact; fewer than 50 of them is an error.
DiversityEstimate diversity_estimate(const GemWeights& w);

}  // namespace dstree
