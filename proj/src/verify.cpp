#include "dstree/verify.hpp"

#include <cmath>
#include <sstream>

#include "dstree/bgw.hpp"
#include "dstree/enumeration.hpp"
#include "dstree/error.hpp"
#include "dstree/glue.hpp"
#include "dstree/laws.hpp"
#include "dstree/oracle.hpp"

namespace dstree {

namespace {

// Coefficients of z^1..z^6 printed for L = M_0, M = M_1 and M_2.
const std::vector<std::vector<int>> kPrintedSeries = {
    {1, 1, 3, 11, 45, 197},
    {1, 1, 5, 31, 215, 1597},
    {1, 1, 7, 61, 595, 6217},
};

std::vector<CheckResult> gf_suite() {
  std::vector<CheckResult> out;
  for (std::uint32_t k = 0; k < kPrintedSeries.size(); ++k) {
    std::ostringstream os;
    bool ok = true;
    for (std::uint32_t n = 1; n <= 6; ++n) {
      BigInt c = count_marked_trees(n, k);
      os << (n > 1 ? " " : "") << c;
      ok = ok && c == kPrintedSeries[k][n - 1];
    }
    out.push_back({"printed series k=" + std::to_string(k), ok, os.str()});
  }
  for (std::uint32_t k = 0; k <= 2; ++k) {
    auto series = series_from_closed_form(k, 8);
    bool ok = series[0] == 0;
    for (std::uint32_t n = 1; n <= 8; ++n) ok = ok && series[n] == count_marked_trees(n, k);
    out.push_back({"closed form k=" + std::to_string(k) + " n<=8", ok, ""});
  }
  bool ok = true;
  for (std::uint32_t n = 1; n <= 6; ++n) {
    BigInt sum = 0;
    for (const auto& c : marked_tree_polynomial(n)) sum += c;
    ok = ok && sum == kPrintedSeries[0][n - 1];
  }
  out.push_back({"sum over m equals leaf count series n<=6", ok, ""});
  return out;
}

SpacePoint uniform_point(const DecoratedTree& dt, Rng& rng) {
  std::uniform_int_distribution<Vertex> pick_v(0, static_cast<Vertex>(dt.size() - 1));
  Vertex v = pick_v(rng);
  std::uniform_int_distribution<LocalPoint> pick_p(0, static_cast<LocalPoint>(dt.decoration(v).size() - 1));
  return {v, pick_p(rng)};
}

std::vector<CheckResult> oracle_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng = make_stream(seed, "verify.oracle");
  SegmentRule uniform;
  uniform.placement = SegmentRule::Placement::Uniform;
  const std::vector<std::pair<std::string, DecorationKit>> kits = {
      {"cycle", DecorationKit::cycle()},
      {"segment", DecorationKit::segment_kit(uniform)},
      {"bgw_tree", DecorationKit::bgw_tree(OffspringLaw::finite({0.5, 0.0, 0.5}))},
  };
  for (const auto& [name, base] : kits) {
    std::size_t mismatches = 0, pairs = 0;
    for (int rep = 0; rep < 4; ++rep) {
      DecorationKit kit = base;
      kit.shuffle = rep % 2 == 1;
      std::uniform_int_distribution<std::uint64_t> size(2, 120);
      auto tree = sample_conditioned_bgw({OffspringLaw::stable(1.5), Conditioning::vertices(size(rng))}, rng);
      auto dt = glue(std::move(tree), kit, rng);
      BfsOracle oracle(dt);
      for (int i = 0; i < 100; ++i, ++pairs) {
        auto x = uniform_point(dt, rng), y = uniform_point(dt, rng);
        if (dt.distance(x, y) != oracle.distance(x, y)) ++mismatches;
      }
    }
    out.push_back({"glued distance equals BFS, " + name + " kit", mismatches == 0,
                   std::to_string(mismatches) + " mismatches in " + std::to_string(pairs) + " pairs"});
  }
  return out;
}

CheckResult moment_check(const std::string& name, const std::vector<double>& draws, double exact, int p) {
  double mean = 0, sq = 0;
  for (double x : draws) {
    double v = std::pow(x, p);
    mean += v;
    sq += v * v;
  }
  const double n = static_cast<double>(draws.size());
  mean /= n;
  const double se = std::sqrt(std::max(0.0, sq / n - mean * mean) / n);
  const double z = se > 0 ? (mean - exact) / se : 0.0;
  std::ostringstream os;
  os << "empirical " << mean << " exact " << exact << " z " << z;
  return {name, std::abs(z) <= 4.0, os.str()};
}

std::vector<CheckResult> laws_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::size_t draws = 20000;
  for (double alpha : {1.25, 1.5, 1.8}) {
    Rng rng = make_stream(seed, "verify.ml", static_cast<std::uint64_t>(alpha * 100));
    const double eta = 1.0 / alpha, theta = 1.0 - 1.0 / alpha;
    MittagLefflerSampler ml(eta, theta);
    std::vector<double> x(draws);
    for (auto& v : x) v = ml(rng);
    for (int p = 1; p <= 3; ++p) {
      std::ostringstream name;
      name << "ML moment alpha=" << alpha << " p=" << p;
      out.push_back(moment_check(name.str(), x, ml_moment(eta, theta, p), p));
    }
  }
  {
    const double alpha = 1.5, eta = 1.0 / alpha, theta = 1.0 - 1.0 / alpha;
    Rng rng = make_stream(seed, "verify.mlmc");
    std::vector<std::vector<double>> cols(5, std::vector<double>(draws));
    for (std::size_t i = 0; i < draws; ++i) {
      auto s = sample_mlmc(eta, theta, 5, rng);
      for (std::size_t j = 0; j < 5; ++j) cols[j][i] = s.values[j];
    }
    for (std::size_t j = 0; j < 5; ++j)
      for (int p = 1; p <= 2; ++p)
        out.push_back(moment_check("MLMC M_" + std::to_string(j + 1) + " p=" + std::to_string(p), cols[j],
                                   ml_moment(eta, theta + static_cast<double>(j), p), p));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"gf", "oracle", "laws"};
  return names;
}

std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "gf") return gf_suite();
  if (suite == "oracle") return oracle_suite(seed);
  if (suite == "laws") return laws_suite(seed);
  fail(Errc::Config, "unknown verify suite '" + suite + "' (gf, oracle, laws, all)");
}

Json check_results_to_json(const std::string& suite, const std::vector<CheckResult>& results) {
  Json j;
  j["suite"] = suite;
  bool all = true;
  Json checks = Json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    checks.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  j["pass"] = all;
  j["checks"] = std::move(checks);
  return j;
}

}  // namespace dstree
