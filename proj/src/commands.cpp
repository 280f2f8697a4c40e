#include "dstree/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "dstree/bgw.hpp"
#include "dstree/enumeration.hpp"
#include "dstree/error.hpp"
#include "dstree/render.hpp"
#include "dstree/verify.hpp"

namespace dstree {

namespace {

std::filesystem::path out_dir(const RunConfig& cfg) {
  std::filesystem::path p(cfg.out.empty() ? "." : cfg.out);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) fail(Errc::Io, "cannot create output directory " + p.string() + ": " + ec.message());
  return p;
}

Json header(const RunConfig& cfg, const char* format) {
  Json j;
  j["format"] = format;
  j["config"] = config_to_json(cfg);
  return j;
}

Conditioning conditioning_of(const RunConfig& cfg) {
  if (cfg.conditioning == "vertices") return Conditioning::vertices(cfg.n);
  if (cfg.conditioning == "leaves") return Conditioning::leaves(cfg.n);
  fail(Errc::Config, "conditioning must be 'vertices' or 'leaves'");
}

PointMeasure measure_of(const std::string& s) {
  if (s == "tips") return PointMeasure::Tips;
  if (s == "uniform_mass") return PointMeasure::UniformMass;
  if (s == "block_mass") return PointMeasure::BlockMass;
  fail(Errc::Config, "measure must be 'tips', 'uniform_mass' or 'block_mass'");
}

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r) << '/' << denominator(r);
  return os.str();
}

}  // namespace

Json cmd_sample(const RunConfig& cfg) {
  check_regime(cfg.alpha, cfg.gamma);
  const std::uint64_t seed = require_seed(cfg);
  if (cfg.n < 1) fail(Errc::Config, "n must be at least 1");
  const auto law = law_from_json(cfg.law, cfg.alpha);
  const auto kit = kit_from_json(cfg.kit, cfg.gamma, cfg.beta);
  const auto cond = conditioning_of(cfg);

  Rng tree_rng = make_stream(seed, "sample.tree");
  Rng kit_rng = make_stream(seed, "sample.kit");
  Rng point_rng = make_stream(seed, "sample.points");
  auto tree = sample_conditioned_bgw({law, cond}, tree_rng);
  auto dt = glue(std::move(tree), kit, kit_rng);

  const double bn = cond.mode == Conditioning::Mode::Vertices ? bn_normalizer(law, cfg.n)
                                                              : bn_normalizer_leaves(law, cfg.n);
  const double scale = std::pow(bn, -cfg.gamma);
  std::uint32_t max_deg = 0;
  for (auto d : dt.tree().outdegrees()) max_deg = std::max(max_deg, d);
  double mean_root = 0.0;
  const int points = 1000;
  if (dt.total_mass() > 0) {
    for (int i = 0; i < points; ++i) mean_root += dt.distance_to_root(dt.sample_point(point_rng));
    mean_root /= points;
  }
  const double diam = dt.diameter();

  Json stats;
  stats["vertices"] = dt.size();
  stats["leaves"] = dt.tree().leaf_count();
  stats["height"] = dt.tree().height();
  stats["max_outdegree"] = max_deg;
  stats["total_mass"] = dt.total_mass();
  stats["diameter"] = diam;
  stats["b_n"] = bn;
  stats["rescaled_diameter"] = diam * scale;
  stats["b1_delta"] = cfg.b1_delta;
  stats["b1_diagnostic"] = dt.b1_diagnostic(cfg.b1_delta, bn, cfg.gamma);
  stats["mean_root_distance"] = mean_root;
  stats["rescaled_mean_root_distance"] = mean_root * scale;

  const auto dir = out_dir(cfg);
  Json tj = header(cfg, "dstree.tree");
  tj["law"] = law_to_json(law);
  tj["outdegrees"] = dt.tree().outdegrees();
  write_text_file((dir / "tree.json").string(), dump_json(tj));

  Json dj = header(cfg, "dstree.decorated_tree");
  dj["law"] = law_to_json(law);
  dj["kit"] = kit_to_json(kit);
  dj["decorated_tree"] = decorated_tree_to_json(dt);
  write_text_file((dir / "decorated_tree.json").string(), dump_json(dj));

  Json summary = header(cfg, "dstree.summary");
  summary["stats"] = stats;
  write_text_file((dir / "summary.json").string(), dump_json(summary));
  return summary;
}

Json cmd_marginal(const RunConfig& cfg) {
  check_regime(cfg.alpha, cfg.gamma);
  const std::uint64_t seed = require_seed(cfg);
  if (cfg.k < 1) fail(Errc::Config, "k must be at least 1");
  const auto kit = LimitKit::from_kit(kit_from_json(cfg.kit, cfg.gamma, cfg.beta));
  const auto measure = measure_of(cfg.measure);
  MarginalOptions opts{cfg.trunc_eps, static_cast<std::size_t>(cfg.max_atoms)};

  Rng rng = make_stream(seed, "marginal.build");
  Rng point_rng = make_stream(seed, "marginal.points");
  auto ms = build_marginal(cfg.alpha, cfg.gamma, cfg.beta, cfg.k, kit, opts, rng);
  const std::size_t count = cfg.points ? cfg.points : cfg.k;
  if (count > 5000) fail(Errc::Config, "at most 5000 sample points");
  // Default tips run: every spine tip once, in spine order.
  std::vector<MarginalPoint> pts;
  if (measure == PointMeasure::Tips && !cfg.points)
    for (std::uint32_t j = 0; j < count; ++j) pts.push_back(ms.tip(j));
  else
    pts = ms.sample_points(count, measure, point_rng);

  std::vector<double> dist(count * count), unc(count * count);
  double diam = 0.0, max_unc = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j) {
      double d = ms.distance(pts[i], pts[j]);
      double u = ms.uncertainty(pts[i], pts[j]);
      dist[i * count + j] = dist[j * count + i] = d;
      unc[i * count + j] = unc[j * count + i] = u;
      diam = std::max(diam, d);
      max_unc = std::max(max_unc, u);
    }

  Json spines = Json::array();
  double max_trunc = 0.0;
  for (std::size_t j = 0; j < ms.k(); ++j) {
    const auto& s = ms.spine(j);
    Json e;
    e["mass_scale"] = s.mass_scale();
    e["length"] = s.length();
    e["blocks"] = s.block_count();
    e["r_bound"] = s.r_bound();
    e["truncation_bound"] = s.truncation_bound();
    if (j > 0) e["parent"] = ms.parent(j);
    max_trunc = std::max(max_trunc, s.truncation_bound());
    spines.push_back(std::move(e));
  }

  const auto dir = out_dir(cfg);
  Json mj = header(cfg, "dstree.marginal");
  mj["limit_kit"] = cfg.kit;
  mj["points"] = count;
  mj["measure"] = point_measure_name(measure);
  mj["sample_diameter"] = diam;
  mj["max_uncertainty"] = max_unc;
  mj["max_truncation_bound"] = max_trunc;
  mj["mlmc"] = ms.mlmc().values;
  mj["spines"] = std::move(spines);
  write_text_file((dir / "marginal.json").string(), dump_json(mj));

  const std::string comment = "config " + config_to_json(cfg).dump();
  std::ostringstream dcsv, ucsv;
  write_matrix_csv(dcsv, dist, count, {comment, "distances between sampled points"});
  write_matrix_csv(ucsv, unc, count, {comment, "truncation uncertainty per pair"});
  write_text_file((dir / "distances.csv").string(), dcsv.str());
  write_text_file((dir / "uncertainty.csv").string(), ucsv.str());

  Json summary;
  summary["k"] = ms.k();
  summary["points"] = count;
  summary["sample_diameter"] = diam;
  summary["max_uncertainty"] = max_unc;
  summary["max_truncation_bound"] = max_trunc;
  return summary;
}

Json cmd_analyze(const RunConfig& cfg) {
  if (cfg.input.empty()) fail(Errc::Config, "analyze needs --input <distance CSV>");
  auto a = read_matrix_csv_file(cfg.input);
  Json j = header(cfg, "dstree.analysis");
  j["input"] = std::filesystem::path(cfg.input).filename().string();
  j["points"] = a.size();
  const double diam = a.diameter();
  j["diameter"] = diam;

  double min_pos = diam;
  for (double d : a.matrix())
    if (d > 0) min_pos = std::min(min_pos, d);
  Json dim;
  if (a.size() >= 2 && diam > 0 && cfg.scales >= 2) {
    try {
      auto fit = box_dimension(a, geometric_scales(diam / 2.0, std::max(min_pos, diam * 1e-6), cfg.scales));
      dim["slope"] = fit.slope;
      dim["r2"] = fit.r2;
      dim["rms_residual"] = fit.rms_residual;
      dim["scales"] = fit.scales;
      dim["counts"] = fit.counts;
      dim["residuals"] = fit.residuals;
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateScales) throw;
      dim["error"] = e.what();
    }
  } else {
    dim["error"] = "fewer than two points at distinct positions";
  }
  j["box_dimension"] = std::move(dim);

  if (!cfg.compare.empty()) {
    auto b = read_matrix_csv_file(cfg.compare);
    Rng rng = make_stream(require_seed(cfg), "analyze.gh");
    Json gh;
    gh["compare"] = std::filesystem::path(cfg.compare).filename().string();
    gh["lower"] = gh_lower_bound(a, b);
    auto up = gh_upper_bound(a, b, 4, rng);
    gh["upper"] = up.bound;
    gh["exhaustive"] = up.exhaustive;
    j["gh_bounds"] = std::move(gh);
  }
  write_text_file((out_dir(cfg) / "analysis.json").string(), dump_json(j));
  return j;
}

Json cmd_render(const RunConfig& cfg) {
  if (cfg.input.empty()) fail(Errc::Config, "render needs --input <decorated_tree.json>");
  Json in = read_json_file(cfg.input);
  const Json& body = in.contains("decorated_tree") ? in.at("decorated_tree") : in;
  auto dt = decorated_tree_from_json(body);
  RenderStats stats;
  std::string svg = render_svg(dt, {}, &stats);
  write_text_file((out_dir(cfg) / "render.svg").string(), svg);
  Json j;
  j["nodes"] = stats.nodes;
  j["edges"] = stats.edges;
  j["bytes"] = svg.size();
  return j;
}

Json cmd_verify(const RunConfig& cfg) {
  const std::uint64_t seed = cfg.seed.value_or(1);
  std::vector<std::string> suites;
  if (cfg.suite == "all")
    suites = verify_suite_names();
  else
    suites = {cfg.suite};
  Json j;
  j["format"] = "dstree.verify";
  j["seed"] = seed;
  bool all = true;
  Json reports = Json::array();
  for (const auto& s : suites) {
    Json r = check_results_to_json(s, run_verify_suite(s, seed));
    all = all && r["pass"].get<bool>();
    reports.push_back(std::move(r));
  }
  j["pass"] = all;
  j["suites"] = std::move(reports);
  write_text_file((out_dir(cfg) / "verify.json").string(), dump_json(j));
  return j;
}

Json cmd_enum(const RunConfig& cfg) {
  if (cfg.n < 1 || cfg.n > 14) fail(Errc::Config, "enum supports 1 <= n <= 14");
  if (cfg.max_marks > 10) fail(Errc::Config, "max_marks must be at most 10");
  const auto n = static_cast<std::uint32_t>(cfg.n);
  Json j;
  j["format"] = "dstree.enum";
  j["n"] = n;
  Json series = Json::array();
  for (std::uint32_t k = 0; k <= cfg.max_marks; ++k) {
    Json row;
    row["k"] = k;
    Json counts = Json::array(), closed = Json::array();
    auto cf = series_from_closed_form(k, n);
    for (std::uint32_t m = 1; m <= n; ++m) {
      counts.push_back(count_marked_trees(m, k).str());
      closed.push_back(cf[m].str());
    }
    row["counts"] = std::move(counts);
    row["closed_form"] = std::move(closed);
    series.push_back(std::move(row));
  }
  j["marked_tree_series"] = std::move(series);
  Json poly = Json::array();
  for (auto& c : marked_tree_polynomial(n)) poly.push_back(c.str());
  j["polynomial_in_k_plus_1"] = std::move(poly);

  if (!cfg.law.is_null()) {
    auto law = law_from_json(cfg.law, cfg.alpha);
    if (law.kind() != OffspringLaw::Kind::Finite) fail(Errc::Config, "exact laws need a finite law");
    if (n > 12) fail(Errc::Config, "exact conditioned law limited to n <= 12");
    Json trees = Json::array();
    for (const auto& [deg, p] : exact_conditioned_law(law, n))
      trees.push_back({{"outdegrees", deg}, {"probability", rational_string(p)}, {"value", p.convert_to<double>()}});
    j["law"] = law_to_json(law);
    j["exact_conditioned_law"] = std::move(trees);
  }
  write_text_file((out_dir(cfg) / "enum.json").string(), dump_json(j));
  return j;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Json r;
    if (name == "sample")
      r = cmd_sample(cfg);
    else if (name == "marginal")
      r = cmd_marginal(cfg);
    else if (name == "analyze")
      r = cmd_analyze(cfg);
    else if (name == "render")
      r = cmd_render(cfg);
    else if (name == "verify")
      r = cmd_verify(cfg);
    else if (name == "enum")
      r = cmd_enum(cfg);
    else
      fail(Errc::Config, "unknown command '" + name + "'");
    out << r.dump(2) << '\n';
    if (name == "verify" && !r["pass"].get<bool>()) return kExitFailed;
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case Errc::Config:
      case Errc::ParamOutOfRange:
      case Errc::BadRule:
      case Errc::ConfigMismatch:
      case Errc::InfeasibleConditioning:
      case Errc::DegenerateBeta:
      case Errc::TailNotRegular:
      case Errc::KitFailure:
        return kExitConfig;
      default:
        return kExitRuntime;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace dstree
