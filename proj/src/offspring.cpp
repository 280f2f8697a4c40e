#include "dstree/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dstree/error.hpp"

namespace dstree {

namespace {

constexpr std::uint64_t kStableTable = 2048;

bool is_binary_stable(OffspringLaw::Kind kind, double alpha) {
  return kind == OffspringLaw::Kind::Stable && alpha == 2.0;
}

// log |Gamma(1 - alpha)| for alpha in (1,2).
double log_abs_gamma_1ma(double alpha) { return std::lgamma(1.0 - alpha); }

}  // namespace

OffspringLaw OffspringLaw::finite(std::vector<double> p) {
  if (p.empty()) fail(Errc::ParamOutOfRange, "finite law needs at least one probability");
  double s = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail(Errc::ParamOutOfRange, "probabilities must be finite and nonnegative");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-9) fail(Errc::ParamOutOfRange, "probabilities must sum to 1");
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
  OffspringLaw law;
  law.kind_ = Kind::Finite;
  law.p_ = std::move(p);
  law.build_tables();
  return law;
}

OffspringLaw OffspringLaw::geometric(double q) {
  if (!(q > 0.0 && q < 1.0)) fail(Errc::ParamOutOfRange, "geometric parameter must lie in (0,1)");
  OffspringLaw law;
  law.kind_ = Kind::Geometric;
  law.param_ = q;
  law.build_tables();
  return law;
}

OffspringLaw OffspringLaw::stable(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) fail(Errc::ParamOutOfRange, "stable offspring law needs alpha in (1,2]");
  OffspringLaw law;
  law.kind_ = Kind::Stable;
  law.param_ = alpha;
  if (alpha < 2.0) law.c_ = (alpha - 1.0) / (alpha * std::tgamma(2.0 - alpha));
  law.build_tables();
  return law;
}

OffspringLaw OffspringLaw::power_tail(double alpha, double c) {
  if (!(alpha > 1.0 && alpha < 2.0)) fail(Errc::ParamOutOfRange, "power tail needs alpha in (1,2)");
  if (!(c > 0.0)) fail(Errc::ParamOutOfRange, "power tail constant must be positive");
  OffspringLaw law;
  law.kind_ = Kind::PowerTail;
  law.param_ = alpha;
  law.c_ = c;
  return law;
}

void OffspringLaw::build_tables() {
  std::uint64_t n = 0;
  switch (kind_) {
    case Kind::Finite: n = p_.size(); break;
    case Kind::Geometric: n = 64; break;
    case Kind::Stable: n = is_binary_stable(kind_, param_) ? 3 : kStableTable; break;
    case Kind::PowerTail: return;
  }
  // pmf() and tail() consult the tables, so fill local copies first.
  std::vector<double> pmf_t(n), tail_t(n + 1);
  for (std::uint64_t k = 0; k < n; ++k) pmf_t[k] = pmf(k);
  for (std::uint64_t k = 0; k <= n; ++k) tail_t[k] = tail(k);
  pmf_table_ = std::move(pmf_t);
  tail_table_ = std::move(tail_t);
}

std::optional<std::uint64_t> OffspringLaw::max_degree() const {
  if (kind_ == Kind::Finite) return p_.size() - 1;
  if (is_binary_stable(kind_, param_)) return 2;
  return std::nullopt;
}

std::optional<double> OffspringLaw::alpha() const {
  if (kind_ == Kind::PowerTail) return param_;
  if (kind_ == Kind::Stable && param_ < 2.0) return param_;
  return std::nullopt;
}

double OffspringLaw::pmf(std::uint64_t k) const {
  switch (kind_) {
    case Kind::Finite: return k < p_.size() ? p_[k] : 0.0;
    case Kind::Geometric: return (1.0 - param_) * std::pow(param_, static_cast<double>(k));
    case Kind::Stable: {
      const double a = param_;
      if (k == 0) return 1.0 / a;
      if (k == 1) return 0.0;
      if (a == 2.0) return k == 2 ? 0.5 : 0.0;
      if (k < pmf_table_.size()) return pmf_table_[k];
      double kd = static_cast<double>(k);
      return (a - 1.0) * std::exp(std::lgamma(kd - a) - std::lgamma(2.0 - a) - std::lgamma(kd + 1.0));
    }
    case Kind::PowerTail: fail(Errc::ParamOutOfRange, "power-tail law has no probability mass function");
  }
  return 0.0;
}

double OffspringLaw::tail(std::uint64_t k) const {
  if (k == 0) return 1.0;
  if (k < tail_table_.size()) return tail_table_[k];
  switch (kind_) {
    case Kind::Finite: {
      double s = 0.0;
      for (std::uint64_t j = k; j < p_.size(); ++j) s += p_[j];
      return s;
    }
    case Kind::Geometric: return std::pow(param_, static_cast<double>(k));
    case Kind::Stable: {
      const double a = param_;
      if (a == 2.0) return k <= 2 ? 0.5 : 0.0;
      if (k == 1) return 1.0 - 1.0 / a;
      double kd = static_cast<double>(k);
      return std::exp(std::lgamma(kd - a) - std::lgamma(kd) - std::log(a) - log_abs_gamma_1ma(a));
    }
    case Kind::PowerTail: return std::min(1.0, c_ * std::pow(static_cast<double>(k), -param_));
  }
  return 0.0;
}

double OffspringLaw::size_biased_tail(std::uint64_t k) const {
  if (k <= 1) return 1.0;
  switch (kind_) {
    case Kind::Finite: {
      double s = 0.0;
      for (std::uint64_t j = k; j < p_.size(); ++j) s += static_cast<double>(j) * p_[j];
      return s / mean();
    }
    case Kind::Geometric: {
      const double q = param_;
      return std::pow(q, static_cast<double>(k)) * (static_cast<double>(k) + q / (1.0 - q)) / mean();
    }
    case Kind::Stable: {
      const double a = param_;
      if (a == 2.0) return k <= 2 ? 1.0 : 0.0;
      double kd = static_cast<double>(k);
      double rest = std::exp(std::lgamma(kd + 1.0 - a) - std::lgamma(kd) - std::log(a) - std::log(a - 1.0) -
                             log_abs_gamma_1ma(a));
      return kd * tail(k) + rest;
    }
    case Kind::PowerTail: fail(Errc::ParamOutOfRange, "power-tail law cannot be size-biased");
  }
  return 0.0;
}

double OffspringLaw::mean() const {
  switch (kind_) {
    case Kind::Finite: {
      double m = 0.0;
      for (std::size_t k = 0; k < p_.size(); ++k) m += static_cast<double>(k) * p_[k];
      return m;
    }
    case Kind::Geometric: return param_ / (1.0 - param_);
    case Kind::Stable: return 1.0;
    case Kind::PowerTail: return std::numeric_limits<double>::quiet_NaN();
  }
  return 0.0;
}

bool OffspringLaw::critical(double tol) const {
  if (kind_ == Kind::PowerTail) return false;
  return std::abs(mean() - 1.0) <= tol;
}

double OffspringLaw::step_tail(double x) const {
  if (kind_ == Kind::PowerTail) return x <= 0.0 ? 1.0 : std::min(1.0, c_ * std::pow(x, -param_));
  if (x <= 0.0) return 1.0;
  // |D - 1| >= x  <=>  D >= 1 + ceil(x), or D = 0 when x <= 1.
  double j = std::ceil(x);
  double up = j + 1.0 >= 1.8e19 ? 0.0 : tail(static_cast<std::uint64_t>(j) + 1);
  return up + (x <= 1.0 ? pmf(0) : 0.0);
}

template <class Tail>
std::uint64_t OffspringLaw::invert_tail(const Tail& tailf, std::uint64_t k, double v, std::uint64_t cap) const {
  // Largest j >= k with tail(j) > v, given tail(k) > v.
  std::uint64_t lo = k, hi = k + 1;
  while (tailf(hi) > v) {
    lo = hi;
    if (hi > cap) return cap + 1;
    hi = hi * 2;
  }
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (tailf(mid) > v)
      lo = mid;
    else
      hi = mid;
  }
  return lo > cap ? cap + 1 : lo;
}

std::uint64_t OffspringLaw::sample(Rng& rng) const {
  if (!sampleable()) fail(Errc::ParamOutOfRange, "power-tail law cannot be sampled");
  double u = uniform_open(rng);
  // tail_table_ is nonincreasing; find the last index with tail > u.
  if (u < tail_table_.back()) {
    return invert_tail([this](std::uint64_t j) { return tail(j); }, tail_table_.size() - 1, u,
                       std::numeric_limits<std::uint64_t>::max() / 4);
  }
  auto it = std::partition_point(tail_table_.begin(), tail_table_.end(), [u](double t) { return t > u; });
  return static_cast<std::uint64_t>(it - tail_table_.begin()) - 1;
}

std::uint64_t OffspringLaw::sample_size_biased(Rng& rng) const {
  if (!sampleable()) fail(Errc::ParamOutOfRange, "power-tail law cannot be sampled");
  double u = uniform_open(rng);
  return invert_tail([this](std::uint64_t j) { return size_biased_tail(j); }, 1, u,
                     std::numeric_limits<std::uint64_t>::max() / 4);
}

std::uint64_t OffspringLaw::sample_at_least(std::uint64_t k, std::uint64_t cap, Rng& rng) const {
  if (!sampleable()) fail(Errc::ParamOutOfRange, "power-tail law cannot be sampled");
  double tk = tail(k);
  if (!(tk > 0.0)) fail(Errc::InfeasibleConditioning, "no mass at or above requested degree");
  double v = uniform_open(rng) * tk;
  return invert_tail([this](std::uint64_t j) { return tail(j); }, k, v, cap);
}

namespace {

double stable_prefactor(double a) { return std::pow(std::abs((1.0 - a) / std::tgamma(2.0 - a)), -1.0 / a); }

}  // namespace

double bn_normalizer(const OffspringLaw& law, std::uint64_t n) {
  auto a = law.alpha();
  if (!a) fail(Errc::TailNotRegular, "law has no tail index in (1,2)");
  if (n == 0) fail(Errc::ParamOutOfRange, "n must be positive");
  const double pre = stable_prefactor(*a);
  const double target = 1.0 / static_cast<double>(n);
  if (law.kind() == OffspringLaw::Kind::PowerTail) {
    // c x^-alpha = 1/n, or 0 if the tail never exceeds 1/n.
    double x = std::pow(law.tail_constant() * static_cast<double>(n), 1.0 / *a);
    return pre * x;
  }
  // Integer steps: P(|X| >= y) is constant on (j-1, j]; the infimum is j* - 1 for the
  // smallest integer j* with P(|X| >= j*) <= 1/n.
  if (law.step_tail(0.0) <= target) return 0.0;
  std::uint64_t lo = 0, hi = 1;  // step_tail(lo) > target
  while (law.step_tail(static_cast<double>(hi)) > target) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (law.step_tail(static_cast<double>(mid)) > target)
      lo = mid;
    else
      hi = mid;
  }
  return pre * static_cast<double>(hi - 1);
}

double bn_normalizer_leaves(const OffspringLaw& law, std::uint64_t n) {
  auto a = law.alpha();
  if (!a) fail(Errc::TailNotRegular, "law has no tail index in (1,2)");
  if (!law.sampleable()) fail(Errc::TailNotRegular, "leaf normalizer needs a full offspring law");
  if (n == 0) fail(Errc::ParamOutOfRange, "n must be positive");
  const double target = 1.0 / static_cast<double>(n);
  const double pre = std::pow(std::exp(std::lgamma(1.0 - *a)) / law.pmf(0), 1.0 / *a);
  // P(D > x) = tail(floor(x) + 1); smallest integer m >= 0 with tail(m + 1) <= 1/n.
  std::uint64_t lo = 0, hi = 1;
  if (law.tail(1) <= target) return 0.0;
  while (law.tail(hi + 1) > target) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (law.tail(mid + 1) > target)
      lo = mid;
    else
      hi = mid;
  }
  return pre * static_cast<double>(hi);
}

}  // namespace dstree
