#include "dstree/laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dstree/error.hpp"

namespace dstree {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kCells = 256;
constexpr double kCutLog = -40.0;

double log_sinc(double x) {
  if (x < 1e-4) return -x * x / 6.0;
  return std::log(std::sin(x) / x);
}

double log_a_zero(double eta) { return (eta * std::log(eta) + (1.0 - eta) * std::log1p(-eta)) / (1.0 - eta); }

// log of Zolotarev's function
// A(u) = [sin(eta pi u)^eta sin((1-eta) pi u)^(1-eta) / sin(pi u)]^(1/(1-eta)), u in (0,1).
double log_zolotarev(double eta, double u, double log_a0) {
  const double x = kPi * u;
  return (eta * log_sinc(eta * x) + (1.0 - eta) * log_sinc((1.0 - eta) * x) - log_sinc(x)) / (1.0 - eta) + log_a0;
}

void check_ml_params(double eta, double theta) {
  if (!(eta > 0.0 && eta < 1.0)) fail(Errc::ParamOutOfRange, "eta must lie in (0,1)");
  if (!(theta > -eta) || !std::isfinite(theta)) fail(Errc::ParamOutOfRange, "theta must exceed -eta");
}

}  // namespace

double sample_positive_stable(double alpha, Rng& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::ParamOutOfRange, "one-sided stable needs alpha in (0,1)");
  const double u = uniform_open(rng);
  const double e = -std::log(uniform_open(rng));
  const double la = log_zolotarev(alpha, u, log_a_zero(alpha));
  return std::exp((1.0 - alpha) / alpha * (la - std::log(e)));
}

double ml_moment(double eta, double theta, int p) {
  check_ml_params(eta, theta);
  if (p < 0) fail(Errc::ParamOutOfRange, "moment order must be nonnegative");
  if (p == 0) return 1.0;
  const double pd = static_cast<double>(p);
  return std::exp(std::lgamma(theta + 1.0) + std::lgamma(theta / eta + pd + 1.0) - std::lgamma(theta / eta + 1.0) -
                  std::lgamma(theta + pd * eta + 1.0));
}

MittagLefflerSampler::MittagLefflerSampler(double eta, double theta) : eta_(eta), theta_(theta) {
  check_ml_params(eta, theta);
  base_theta_ = theta < 0.0 ? theta + 1.0 : theta;
  tilt_ = base_theta_ * (1.0 - eta) / eta;
  log_a0_ = log_a_zero(eta);
  if (tilt_ == 0.0) return;

  // The tilted density of U is proportional to A(u)^-c, decreasing on (0,1). Envelope it
  // by its value at the left end of each cell; beyond u_cut the density is below e^-40.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (log_weight(mid) > kCutLog)
      lo = mid;
    else
      hi = mid;
  }
  const double u_cut = hi;
  for (std::size_t j = 0; j < kCells; ++j) {
    cell_left_.push_back(u_cut * static_cast<double>(j) / kCells);
    cell_width_.push_back(u_cut / kCells);
  }
  if (u_cut < 1.0) {
    cell_left_.push_back(u_cut);
    cell_width_.push_back(1.0 - u_cut);
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < cell_left_.size(); ++j) {
    cell_logw_.push_back(log_weight(cell_left_[j]));
    acc += std::exp(cell_logw_[j]) * cell_width_[j];
    cell_cum_.push_back(acc);
  }
}

double MittagLefflerSampler::log_weight(double u) const {
  return -tilt_ * (log_zolotarev(eta_, u, log_a0_) - log_a0_);
}

double MittagLefflerSampler::sample_nonnegative(Rng& rng) const {
  double u;
  if (tilt_ == 0.0) {
    u = uniform_open(rng);
  } else {
    for (;;) {
      double pick = uniform_open(rng) * cell_cum_.back();
      std::size_t j = static_cast<std::size_t>(std::upper_bound(cell_cum_.begin(), cell_cum_.end(), pick) -
                                               cell_cum_.begin());
      j = std::min(j, cell_cum_.size() - 1);
      u = cell_left_[j] + cell_width_[j] * uniform_open(rng);
      if (u >= 1.0) continue;
      if (std::log(uniform_open(rng)) <= log_weight(u) - cell_logw_[j]) break;
    }
  }
  std::gamma_distribution<double> gamma(1.0 + tilt_, 1.0);
  const double e = gamma(rng);
  return std::exp((1.0 - eta_) * (std::log(e) - log_zolotarev(eta_, u, log_a0_)));
}

double MittagLefflerSampler::operator()(Rng& rng) const {
  double m = sample_nonnegative(rng);
  if (theta_ < 0.0) m *= sample_beta(theta_ / eta_ + 1.0, 1.0 / eta_ - 1.0, rng);
  return m;
}

double sample_ml(double eta, double theta, Rng& rng) { return MittagLefflerSampler(eta, theta)(rng); }

double GemWeights::allocated() const {
  // Kahan summation; atom counts can reach 10^6.
  double s = 0.0, comp = 0.0;
  for (double p : atoms) {
    double y = p - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

GemWeights GemWeights::ranked_copy() const {
  GemWeights r = *this;
  if (!r.ranked) std::sort(r.atoms.begin(), r.atoms.end(), std::greater<>());
  r.ranked = true;
  return r;
}

GemWeights sample_gem(double xi, double theta, const GemOptions& opts, Rng& rng) {
  if (!(xi > 0.0 && xi < 1.0)) fail(Errc::ParamOutOfRange, "xi must lie in (0,1)");
  if (!(theta > -xi)) fail(Errc::ParamOutOfRange, "theta must exceed -xi");
  if (!(opts.trunc_eps > 0.0 && opts.trunc_eps < 1.0)) fail(Errc::ParamOutOfRange, "trunc_eps must lie in (0,1)");
  if (opts.max_atoms == 0) fail(Errc::ParamOutOfRange, "max_atoms must be positive");
  GemWeights g;
  g.xi = xi;
  g.theta = theta;
  double rest = 1.0;
  for (std::size_t i = 1; rest >= opts.trunc_eps && g.atoms.size() < opts.max_atoms; ++i) {
    double w = sample_beta(1.0 - xi, theta + static_cast<double>(i) * xi, rng);
    g.atoms.push_back(w * rest);
    rest *= 1.0 - w;
  }
  g.residual = rest;
  if (opts.ranked) {
    std::sort(g.atoms.begin(), g.atoms.end(), std::greater<>());
    g.ranked = true;
  }
  return g;
}

GemWeights sample_gem(double xi, double theta, double trunc_eps, Rng& rng) {
  GemOptions o;
  o.trunc_eps = trunc_eps;
  return sample_gem(xi, theta, o, rng);
}

MlmcState sample_mlmc(double eta, double theta, std::size_t k, Rng& rng) {
  if (eta == 1.0) fail(Errc::DegenerateBeta, "Beta(., 1/eta - 1) degenerates at eta = 1");
  check_ml_params(eta, theta);
  if (k == 0) fail(Errc::ParamOutOfRange, "k must be at least 1");
  MlmcState s;
  s.eta = eta;
  s.theta = theta;
  s.values.assign(k, 0.0);
  s.values[k - 1] = MittagLefflerSampler(eta, theta + static_cast<double>(k) - 1.0)(rng);
  for (std::size_t n = k - 1; n >= 1; --n) {
    double a = (theta + static_cast<double>(n) - 1.0) / eta + 1.0;
    s.values[n - 1] = sample_beta(a, 1.0 / eta - 1.0, rng) * s.values[n];
  }
  s.increments.resize(k);
  double prev = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    s.increments[j] = s.values[j] - prev;
    prev = s.values[j];
  }
  return s;
}

DiversityEstimate diversity_estimate(const GemWeights& w) {
  GemWeights r = w.ranked_copy();
  std::size_t trusted = 0;
  while (trusted < r.atoms.size() && r.atoms[trusted] > w.residual) ++trusted;
  if (trusted < 50)
    fail(Errc::InsufficientAtoms, "only " + std::to_string(trusted) + " ranks exceed the residual mass");
  const double g = std::tgamma(1.0 - w.xi);
  auto stat = [&](std::size_t rank) { return g * static_cast<double>(rank) * std::pow(r.atoms[rank - 1], w.xi); };
  DiversityEstimate d;
  d.rank = trusted;
  d.value = stat(trusted);
  double lo = d.value, hi = d.value;
  for (std::size_t k = std::max<std::size_t>(1, trusted / 10); k <= trusted; ++k) {
    double v = stat(k);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  d.spread = 0.5 * (hi - lo);
  return d;
}

}  // namespace dstree
