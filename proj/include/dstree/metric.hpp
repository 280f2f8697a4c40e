#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dstree/random.hpp"

namespace dstree {

class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  // Row-major n x n matrix. Checks zero diagonal and symmetry always, the
  // triangle inequality exhaustively up to 300 points and on random triples beyond.
  static FiniteMetricSpace from_matrix(std::vector<double> d, std::size_t n, std::vector<double> mass = {});
  static FiniteMetricSpace from_function(std::size_t n, const std::function<double(std::size_t, std::size_t)>& d);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  const std::vector<double>& matrix() const { return d_; }
  const std::vector<double>& mass() const { return mass_; }
  double diameter() const;
  double eccentricity(std::size_t i) const;
  FiniteMetricSpace scaled(double c) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
  std::vector<double> mass_;
};

// Lower bound on the Gromov-Hausdorff distance: a correspondence with distortion D
// pairs points whose distance sets lie within Hausdorff distance D, so
// GH >= (1/2) max_x min_y H(D_x, D_y) (and symmetrically). Large inputs use the
// eccentricity sets instead of the full distance sets.
double gh_lower_bound(const FiniteMetricSpace& a, const FiniteMetricSpace& b);

struct CorrespondenceResult {
  double bound = 0.0;  // half the distortion
  std::vector<std::size_t> f;  // a -> b
  std::vector<std::size_t> g;  // b -> a
  bool exhaustive = false;
};

// Distortion of the correspondence graph(f) union graph(g)^T.
double correspondence_distortion(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                                 const std::vector<std::size_t>& f, const std::vector<std::size_t>& g);

// Upper bound: exhaustive over map pairs for tiny inputs, otherwise seeded anchor
// matching plus local improvement, best of `iterations` restarts; never above
// max(diam a, diam b)/2. SizeLimit above 5000 points.
CorrespondenceResult gh_upper_bound(const FiniteMetricSpace& a, const FiniteMetricSpace& b, int iterations, Rng& rng);

// True iff sup |d_b(f x, f y) - d_a(x, y)| < eps and every b-point is within eps of f(a).
bool epsilon_isometry_check(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                            const std::vector<std::size_t>& map, double eps);

struct DimensionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  std::vector<double> scales;
  std::vector<double> counts;
  std::vector<double> residuals;
  double rms_residual = 0.0;
};

// Covering number by a greedy eps-net under an arbitrary distance oracle.
std::size_t greedy_net_size(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist, double eps);

// Least-squares slope of log N(eps) against log(1/eps); DegenerateScales for fewer than
// two distinct positive scales.
DimensionFit box_dimension(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist,
                           const std::vector<double>& scales);
DimensionFit box_dimension(const FiniteMetricSpace& x, const std::vector<double>& scales);
// Embedded mode: occupied grid cells of side eps. Not a metric invariant.
DimensionFit box_dimension_embedded(const std::vector<std::vector<double>>& points, const std::vector<double>& scales);

std::vector<double> geometric_scales(double hi, double lo, std::size_t count);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0, n2 = 0;
  // 95% critical value c(0.05) sqrt((n1+n2)/(n1 n2)).
  double critical_95 = 0.0;
};

KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);
// P(K > t) for the Kolmogorov distribution.
double kolmogorov_survival(double t);

struct RunConfigKey {
  double alpha = 1.5, gamma = 1.0, beta = 1.0;
  std::string kit;
  bool operator==(const RunConfigKey&) const = default;
};

struct ConvergenceRow {
  std::uint64_t n = 0;
  KsResult ks;
};

struct ConvergenceReport {
  std::string statistic;
  std::vector<ConvergenceRow> rows;
  bool strictly_decreasing = false;
  double null_band = 0.0;  // critical value at the largest n
};

// KS distance of each discrete sample (one per n) against the continuum sample.
// ConfigMismatch unless `discrete_key` matches `continuum_key`.
ConvergenceReport convergence_diagnostic(const RunConfigKey& discrete_key, const RunConfigKey& continuum_key,
                                         const std::vector<std::uint64_t>& ns,
                                         const std::vector<std::vector<double>>& discrete,
                                         const std::vector<double>& continuum, const std::string& statistic);

}  // namespace dstree
