#include "dstree/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "dstree/error.hpp"

namespace dstree {

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<double> d, std::size_t n, std::vector<double> mass) {
  if (d.size() != n * n) fail(Errc::ParamOutOfRange, "distance matrix must be n x n");
  if (!mass.empty() && mass.size() != n) fail(Errc::ParamOutOfRange, "mass vector must have n entries");
  auto at = [&](std::size_t i, std::size_t j) { return d[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != 0) fail(Errc::ParamOutOfRange, "distance matrix needs a zero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(at(i, j) >= 0) || !std::isfinite(at(i, j))) fail(Errc::ParamOutOfRange, "distances must be finite and >= 0");
      if (at(i, j) != at(j, i)) fail(Errc::ParamOutOfRange, "distance matrix must be symmetric");
    }
  }
  auto violated = [&](std::size_t i, std::size_t j, std::size_t k) {
    return at(i, k) > at(i, j) + at(j, k) + 1e-9 * (1 + at(i, k));
  };
  if (n <= 300) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = i + 1; k < n; ++k)
          if (violated(i, j, k)) fail(Errc::ParamOutOfRange, "triangle inequality fails");
  } else {
    Rng rng(n);
    std::uniform_int_distribution<std::size_t> u(0, n - 1);
    for (int t = 0; t < 100'000; ++t)
      if (violated(u(rng), u(rng), u(rng))) fail(Errc::ParamOutOfRange, "triangle inequality fails");
  }
  FiniteMetricSpace s;
  s.n_ = n;
  s.d_ = std::move(d);
  s.mass_ = std::move(mass);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::from_function(std::size_t n,
                                                   const std::function<double(std::size_t, std::size_t)>& d) {
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = m[j * n + i] = d(i, j);
  return from_matrix(std::move(m), n);
}

double FiniteMetricSpace::diameter() const { return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end()); }

double FiniteMetricSpace::eccentricity(std::size_t i) const {
  double e = 0;
  for (std::size_t j = 0; j < n_; ++j) e = std::max(e, (*this)(i, j));
  return e;
}

FiniteMetricSpace FiniteMetricSpace::scaled(double c) const {
  if (!(c > 0)) fail(Errc::ParamOutOfRange, "scale must be positive");
  FiniteMetricSpace s = *this;
  for (auto& x : s.d_) x *= c;
  return s;
}

namespace {

// Hausdorff distance between two sorted finite subsets of the line.
double hausdorff_sorted(const std::vector<double>& s, const std::vector<double>& t) {
  auto one_side = [](const std::vector<double>& a, const std::vector<double>& b) {
    double h = 0;
    std::size_t j = 0;
    for (double x : a) {
      while (j + 1 < b.size() && b[j + 1] <= x) ++j;
      double d = std::abs(x - b[j]);
      if (j + 1 < b.size()) d = std::min(d, std::abs(b[j + 1] - x));
      h = std::max(h, d);
    }
    return h;
  };
  return std::max(one_side(s, t), one_side(t, s));
}

std::vector<double> sorted_row(const FiniteMetricSpace& a, std::size_t i) {
  std::vector<double> r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = a(i, j);
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace

double gh_lower_bound(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  const std::size_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0) fail(Errc::ParamOutOfRange, "spaces must be nonempty");
  const double work = double(na) * double(nb) * double(na + nb);
  std::vector<std::vector<double>> ra(na), rb(nb);
  if (work <= 2e8) {
    for (std::size_t i = 0; i < na; ++i) ra[i] = sorted_row(a, i);
    for (std::size_t j = 0; j < nb; ++j) rb[j] = sorted_row(b, j);
  } else {
    for (std::size_t i = 0; i < na; ++i) ra[i] = {a.eccentricity(i)};
    for (std::size_t j = 0; j < nb; ++j) rb[j] = {b.eccentricity(j)};
  }
  std::vector<double> h(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) h[i * nb + j] = hausdorff_sorted(ra[i], rb[j]);
  double best = 0;
  for (std::size_t i = 0; i < na; ++i) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nb; ++j) m = std::min(m, h[i * nb + j]);
    best = std::max(best, m);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < na; ++i) m = std::min(m, h[i * nb + j]);
    best = std::max(best, m);
  }
  return best / 2;
}

double correspondence_distortion(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                                 const std::vector<std::size_t>& f, const std::vector<std::size_t>& g) {
  const std::size_t na = a.size(), nb = b.size();
  double dis = 0;
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = x + 1; y < na; ++y) dis = std::max(dis, std::abs(a(x, y) - b(f[x], f[y])));
  for (std::size_t x = 0; x < nb; ++x)
    for (std::size_t y = x + 1; y < nb; ++y) dis = std::max(dis, std::abs(b(x, y) - a(g[x], g[y])));
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y) dis = std::max(dis, std::abs(a(x, g[y]) - b(f[x], y)));
  return dis;
}

namespace {

// f(x) = argmin_y max_j |d_a(x, anchor_a[j]) - d_b(y, anchor_b[j])|
std::vector<std::size_t> anchored_map(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                                      const std::vector<std::size_t>& anchor_a,
                                      const std::vector<std::size_t>& anchor_b) {
  std::vector<std::size_t> f(a.size(), 0);
  for (std::size_t x = 0; x < a.size(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < b.size(); ++y) {
      double c = 0;
      for (std::size_t j = 0; j < anchor_a.size() && c < best; ++j)
        c = std::max(c, std::abs(a(x, anchor_a[j]) - b(y, anchor_b[j])));
      if (c < best) {
        best = c;
        f[x] = y;
      }
    }
  }
  return f;
}

// One sweep: move each f(x) to the target minimizing its worst pairwise mismatch.
void improve(const FiniteMetricSpace& a, const FiniteMetricSpace& b, std::vector<std::size_t>& f) {
  for (std::size_t x = 0; x < a.size(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = f[x];
    for (std::size_t y = 0; y < b.size(); ++y) {
      double c = 0;
      for (std::size_t z = 0; z < a.size() && c < best; ++z)
        if (z != x) c = std::max(c, std::abs(a(x, z) - b(y, f[z])));
      if (c < best || (c == best && y == f[x])) {
        best = c;
        arg = y;
      }
    }
    f[x] = arg;
  }
}

}  // namespace

CorrespondenceResult gh_upper_bound(const FiniteMetricSpace& a, const FiniteMetricSpace& b, int iterations,
                                    Rng& rng) {
  const std::size_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0) fail(Errc::ParamOutOfRange, "spaces must be nonempty");
  if (na > 5000 || nb > 5000) fail(Errc::SizeLimit, "gh_upper_bound supports at most 5000 points");
  CorrespondenceResult best;
  best.bound = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<std::size_t>& f, const std::vector<std::size_t>& g) {
    double d = correspondence_distortion(a, b, f, g) / 2;
    if (d < best.bound) {
      best.bound = d;
      best.f = f;
      best.g = g;
    }
  };
  const double space = std::pow(double(nb), double(na)) * std::pow(double(na), double(nb));
  if (space <= 1e6) {
    std::vector<std::size_t> f(na, 0), g(nb, 0);
    auto next = [](std::vector<std::size_t>& v, std::size_t base) {
      for (auto& d : v) {
        if (++d < base) return true;
        d = 0;
      }
      return false;
    };
    do {
      std::fill(g.begin(), g.end(), 0);
      do consider(f, g);
      while (next(g, na));
    } while (next(f, nb));
    best.exhaustive = true;
    return best;
  }
  if (na == nb) {
    std::vector<std::size_t> id(na);
    std::iota(id.begin(), id.end(), std::size_t{0});
    consider(id, id);
  }
  const bool polish = na <= 300 && nb <= 300;
  const std::size_t n_anchor = std::min<std::size_t>({8, na, nb});
  std::uniform_int_distribution<std::size_t> ua(0, na - 1), ub(0, nb - 1);
  for (int it = 0; it < std::max(1, iterations); ++it) {
    std::vector<std::size_t> anc_a{ua(rng)}, anc_b{ub(rng)};
    std::vector<double> near(na, std::numeric_limits<double>::infinity());
    while (anc_a.size() < n_anchor) {
      // Next anchor: farthest point of a from the anchors; partner chosen by the same rule.
      std::size_t far = 0;
      for (std::size_t x = 0; x < na; ++x) {
        near[x] = std::min(near[x], a(x, anc_a.back()));
        if (near[x] > near[far]) far = x;
      }
      auto partner = anchored_map(a, b, anc_a, anc_b)[far];
      anc_a.push_back(far);
      anc_b.push_back(partner);
    }
    auto f = anchored_map(a, b, anc_a, anc_b);
    auto g = anchored_map(b, a, anc_b, anc_a);
    if (polish) {
      for (int pass = 0; pass < 2; ++pass) {
        improve(a, b, f);
        improve(b, a, g);
      }
    }
    consider(f, g);
  }
  // Trivial correspondence: everything to a single point on each side.
  const double trivial = std::max(a.diameter(), b.diameter()) / 2;
  if (trivial < best.bound) {
    best.bound = trivial;
    best.f.assign(na, 0);
    best.g.assign(nb, 0);
  }
  return best;
}

bool epsilon_isometry_check(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                            const std::vector<std::size_t>& map, double eps) {
  if (map.size() != a.size()) fail(Errc::ParamOutOfRange, "map must be total on the source");
  for (auto y : map)
    if (y >= b.size()) fail(Errc::ParamOutOfRange, "map target out of range");
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = x + 1; y < a.size(); ++y)
      if (!(std::abs(b(map[x], map[y]) - a(x, y)) < eps)) return false;
  for (std::size_t z = 0; z < b.size(); ++z) {
    bool hit = false;
    for (auto y : map)
      if (b(z, y) < eps) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

std::size_t greedy_net_size(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist, double eps) {
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < n; ++i) {
    bool covered = false;
    for (auto c : centers)
      if (dist(i, c) <= eps) {
        covered = true;
        break;
      }
    if (!covered) centers.push_back(i);
  }
  return centers.size();
}

namespace {

std::vector<double> check_scales(const std::vector<double>& scales) {
  std::vector<double> s;
  for (double e : scales)
    if (e > 0 && std::isfinite(e)) s.push_back(e);
  std::sort(s.begin(), s.end(), std::greater<>());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.size() < 2 || s.size() != scales.size())
    fail(Errc::DegenerateScales, "need at least two distinct positive scales");
  return s;
}

DimensionFit fit(std::vector<double> scales, std::vector<double> counts) {
  DimensionFit r;
  const std::size_t m = scales.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = std::log(1 / scales[i]);
    y[i] = std::log(counts[i]);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(m);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / double(m);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss = 0;
  r.residuals.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    r.residuals[i] = y[i] - (r.intercept + r.slope * x[i]);
    ss += r.residuals[i] * r.residuals[i];
  }
  r.r2 = syy > 0 ? 1 - ss / syy : 1.0;
  r.rms_residual = std::sqrt(ss / double(m));
  r.scales = std::move(scales);
  r.counts = std::move(counts);
  return r;
}

}  // namespace

DimensionFit box_dimension(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist,
                           const std::vector<double>& scales) {
  auto s = check_scales(scales);
  if (n == 0) fail(Errc::DegenerateScales, "empty sample");
  std::vector<double> counts;
  for (double e : s) counts.push_back(double(greedy_net_size(n, dist, e)));
  return fit(std::move(s), std::move(counts));
}

DimensionFit box_dimension(const FiniteMetricSpace& x, const std::vector<double>& scales) {
  return box_dimension(x.size(), [&](std::size_t i, std::size_t j) { return x(i, j); }, scales);
}

DimensionFit box_dimension_embedded(const std::vector<std::vector<double>>& points, const std::vector<double>& scales) {
  auto s = check_scales(scales);
  if (points.empty()) fail(Errc::DegenerateScales, "empty sample");
  std::vector<double> counts;
  for (double e : s) {
    std::set<std::vector<long long>> cells;
    for (const auto& p : points) {
      std::vector<long long> c(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) c[i] = static_cast<long long>(std::floor(p[i] / e));
      cells.insert(std::move(c));
    }
    counts.push_back(double(cells.size()));
  }
  return fit(std::move(s), std::move(counts));
}

std::vector<double> geometric_scales(double hi, double lo, std::size_t count) {
  if (!(hi > lo) || !(lo > 0) || count < 2) fail(Errc::DegenerateScales, "need hi > lo > 0 and count >= 2");
  std::vector<double> s(count);
  for (std::size_t i = 0; i < count; ++i) s[i] = hi * std::pow(lo / hi, double(i) / double(count - 1));
  return s;
}

double kolmogorov_survival(double t) {
  if (t <= 0) return 1.0;
  if (t < 0.2) return 1.0;
  double s = 0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 ? 1 : -1) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2 * s, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) fail(Errc::ParamOutOfRange, "KS needs two nonempty samples");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n1 = double(x.size()), n2 = double(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(double(i) / n1 - double(j) / n2));
  }
  KsResult r;
  r.statistic = d;
  r.n1 = x.size();
  r.n2 = y.size();
  const double en = std::sqrt(n1 * n2 / (n1 + n2));
  r.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
  r.critical_95 = 1.358 / en;
  return r;
}

ConvergenceReport convergence_diagnostic(const RunConfigKey& discrete_key, const RunConfigKey& continuum_key,
                                         const std::vector<std::uint64_t>& ns,
                                         const std::vector<std::vector<double>>& discrete,
                                         const std::vector<double>& continuum, const std::string& statistic) {
  if (!(discrete_key == continuum_key)) fail(Errc::ConfigMismatch, "discrete and continuum configurations differ");
  if (ns.size() != discrete.size() || ns.empty()) fail(Errc::ParamOutOfRange, "one discrete sample per n");
  ConvergenceReport rep;
  rep.statistic = statistic;
  for (std::size_t i = 0; i < ns.size(); ++i) rep.rows.push_back({ns[i], ks_two_sample(discrete[i], continuum)});
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (!(rep.rows[i].ks.statistic < rep.rows[i - 1].ks.statistic)) rep.strictly_decreasing = false;
  rep.null_band = rep.rows.back().ks.critical_95;
  return rep;
}

}  // namespace dstree
