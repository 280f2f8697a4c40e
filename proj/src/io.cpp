#include "dstree/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dstree/error.hpp"

namespace dstree {

namespace {

template <class T>
T get_as(const Json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Config, "field '" + key + "': " + e.what());
  }
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) fail(Errc::Config, what + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) fail(Errc::Config, what + ": unknown field '" + it.key() + "'");
  }
}

const char* placement_name(SegmentRule::Placement p) {
  return p == SegmentRule::Placement::Uniform ? "uniform" : "far_end";
}

SegmentRule::Placement placement_from(const std::string& s) {
  if (s == "far_end") return SegmentRule::Placement::FarEnd;
  if (s == "uniform") return SegmentRule::Placement::Uniform;
  fail(Errc::Config, "segment placement must be 'far_end' or 'uniform', got '" + s + "'");
}

}  // namespace

RunConfig config_from_json(const Json& j, RunConfig c) {
  check_keys(j,
             {"alpha", "gamma", "beta", "n", "k", "kit", "law", "offspring", "conditioning", "condition", "seed", "out",
              "trunc_eps", "max_atoms", "measure", "points", "b1_delta", "input", "compare", "scales", "suite",
              "max_marks"},
             "config");
  if (j.contains("alpha")) c.alpha = get_as<double>(j, "alpha");
  if (j.contains("gamma")) c.gamma = get_as<double>(j, "gamma");
  if (j.contains("beta")) c.beta = get_as<double>(j, "beta");
  if (j.contains("n")) c.n = get_as<std::uint64_t>(j, "n");
  if (j.contains("k")) c.k = get_as<std::uint64_t>(j, "k");
  if (j.contains("kit")) c.kit = j.at("kit");
  if (j.contains("law")) c.law = j.at("law");
  if (j.contains("offspring")) c.law = j.at("offspring");
  if (j.contains("conditioning")) c.conditioning = get_as<std::string>(j, "conditioning");
  if (j.contains("condition")) {
    // {"vertices": n} or {"leaves": n}
    const Json& cj = j.at("condition");
    check_keys(cj, {"vertices", "leaves"}, "condition");
    if (cj.size() != 1) fail(Errc::Config, "condition must name exactly one of 'vertices' or 'leaves'");
    c.conditioning = cj.begin().key();
    c.n = get_as<std::uint64_t>(cj, c.conditioning);
  }
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("out")) c.out = get_as<std::string>(j, "out");
  if (j.contains("trunc_eps")) c.trunc_eps = get_as<double>(j, "trunc_eps");
  if (j.contains("max_atoms")) c.max_atoms = get_as<std::uint64_t>(j, "max_atoms");
  if (j.contains("measure")) c.measure = get_as<std::string>(j, "measure");
  if (j.contains("points")) c.points = get_as<std::uint64_t>(j, "points");
  if (j.contains("b1_delta")) c.b1_delta = get_as<double>(j, "b1_delta");
  if (j.contains("input")) c.input = get_as<std::string>(j, "input");
  if (j.contains("compare")) c.compare = get_as<std::string>(j, "compare");
  if (j.contains("scales")) c.scales = get_as<std::uint64_t>(j, "scales");
  if (j.contains("suite")) c.suite = get_as<std::string>(j, "suite");
  if (j.contains("max_marks")) c.max_marks = get_as<std::uint64_t>(j, "max_marks");
  return c;
}

// Output paths are left out so that runs into different directories stay byte-identical.
Json config_to_json(const RunConfig& c) {
  Json j;
  j["alpha"] = c.alpha;
  j["gamma"] = c.gamma;
  j["beta"] = c.beta;
  j["n"] = c.n;
  j["k"] = c.k;
  j["kit"] = c.kit;
  if (!c.law.is_null()) j["law"] = c.law;
  j["conditioning"] = c.conditioning;
  if (c.seed) j["seed"] = *c.seed;
  j["trunc_eps"] = c.trunc_eps;
  j["max_atoms"] = c.max_atoms;
  j["measure"] = c.measure;
  j["points"] = c.points;
  j["b1_delta"] = c.b1_delta;
  return j;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  return config_from_json(read_json_file(path), std::move(base));
}

void check_regime(double alpha, double gamma) {
  if (!(alpha > 1.0 && alpha < 2.0))
    fail(Errc::Config, "alpha must lie in (1, 2), got " + std::to_string(alpha));
  if (!(gamma > alpha - 1.0 && gamma <= 1.0)) {
    std::ostringstream os;
    os << "gamma = " << gamma << " is outside the regime (alpha - 1, 1] = (" << alpha - 1.0
       << ", 1]: for gamma <= alpha - 1 a decoration on a vertex of degree ~ n^(1/alpha) has diameter"
          " ~ n^(gamma/alpha), which does not vanish against the n^((alpha-1)/alpha) height scale,"
          " so no decorated stable limit exists";
    fail(Errc::Config, os.str());
  }
}

std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) fail(Errc::Config, "a seed is required for stochastic commands (--seed or \"seed\" in the config)");
  return *c.seed;
}

OffspringLaw law_from_json(const Json& j, double default_alpha) {
  if (j.is_null()) return OffspringLaw::stable(default_alpha);
  if (!j.is_object() || !j.contains("type")) fail(Errc::Config, "law must be an object with a 'type'");
  const auto type = get_as<std::string>(j, "type");
  if (type == "stable") {
    check_keys(j, {"type", "alpha"}, "stable law");
    return OffspringLaw::stable(j.contains("alpha") ? get_as<double>(j, "alpha") : default_alpha);
  }
  if (type == "finite") {
    check_keys(j, {"type", "p"}, "finite law");
    return OffspringLaw::finite(get_as<std::vector<double>>(j, "p"));
  }
  if (type == "power") {
    // Without "c" this is the critical stable law with that tail index; with "c" it is a
    // pure tail description used only for normalizing constants.
    check_keys(j, {"type", "alpha", "c"}, "power law");
    const double a = j.contains("alpha") ? get_as<double>(j, "alpha") : default_alpha;
    if (j.contains("c")) return OffspringLaw::power_tail(a, get_as<double>(j, "c"));
    return OffspringLaw::stable(a);
  }
  if (type == "geometric") {
    check_keys(j, {"type", "q"}, "geometric law");
    return OffspringLaw::geometric(get_as<double>(j, "q"));
  }
  fail(Errc::Config, "unknown law type '" + type + "' (stable, power, finite, geometric)");
}

Json law_to_json(const OffspringLaw& law) {
  switch (law.kind()) {
    case OffspringLaw::Kind::Stable:
      return Json{{"type", "stable"}, {"alpha", law.param()}};
    case OffspringLaw::Kind::Finite:
      return Json{{"type", "finite"}, {"p", law.finite_probs()}};
    case OffspringLaw::Kind::Geometric:
      return Json{{"type", "geometric"}, {"q", law.param()}};
    case OffspringLaw::Kind::PowerTail:
      return Json{{"type", "power"}, {"alpha", law.param()}, {"c", law.tail_constant()}};
  }
  return Json();
}

DecorationKit kit_from_json(const Json& jin, double gamma, double beta) {
  if (!jin.is_object() || (jin.contains("type") == jin.contains("kind")))
    fail(Errc::Config, "kit must be an object with exactly one of 'type' or 'kind'");
  Json j = jin;
  if (j.contains("kind")) {
    j["type"] = j["kind"];
    j.erase("kind");
  }
  const auto type = get_as<std::string>(j, "type");
  auto exponent = [&](const char* key, double run) {
    if (!j.contains(key)) return run;
    double v = get_as<double>(j, key);
    if (v != run)
      fail(Errc::Config, std::string("kit ") + key + " = " + std::to_string(v) + " differs from the run value " +
                             std::to_string(run));
    return v;
  };
  DecorationKit kit;
  if (type == "cycle") {
    check_keys(j, {"type", "gamma", "beta", "shuffle"}, "cycle kit");
    kit = DecorationKit::cycle(exponent("gamma", gamma), exponent("beta", beta));
  } else if (type == "segment") {
    check_keys(j, {"type", "gamma", "beta", "shuffle", "length", "length_per_root", "placement"}, "segment kit");
    SegmentRule rule;
    if (j.contains("length")) rule.length = get_as<std::uint64_t>(j, "length");
    if (j.contains("length_per_root")) rule.length_per_root = get_as<double>(j, "length_per_root");
    if (j.contains("placement")) rule.placement = placement_from(get_as<std::string>(j, "placement"));
    kit = DecorationKit::segment_kit(rule, exponent("gamma", gamma), exponent("beta", beta));
  } else if (type == "point") {
    check_keys(j, {"type", "gamma", "beta", "shuffle"}, "point kit");
    kit = DecorationKit::point_kit();
    kit.gamma = exponent("gamma", gamma);
    kit.beta = exponent("beta", beta);
  } else if (type == "bgw_tree") {
    check_keys(j, {"type", "gamma", "beta", "shuffle", "inner"}, "bgw_tree kit");
    if (!j.contains("inner")) fail(Errc::Config, "bgw_tree kit needs an 'inner' law");
    kit = DecorationKit::bgw_tree(law_from_json(j.at("inner"), 2.0), exponent("gamma", gamma), exponent("beta", beta));
  } else if (type == "custom") {
    check_keys(j, {"type", "gamma", "beta", "shuffle", "table"}, "custom kit");
    if (!j.contains("table") || !j.at("table").is_array()) fail(Errc::Config, "custom kit needs a 'table' array");
    std::vector<Decoration> table;
    for (const auto& e : j.at("table")) table.push_back(decoration_from_json(e));
    kit = DecorationKit::custom(std::move(table), exponent("gamma", gamma), exponent("beta", beta));
  } else {
    fail(Errc::Config, "unknown kit type '" + type + "' (cycle, segment, point, bgw_tree, custom)");
  }
  if (j.contains("shuffle")) kit.shuffle = get_as<bool>(j, "shuffle");
  return kit;
}

Json kit_to_json(const DecorationKit& kit) {
  Json j;
  switch (kit.kind) {
    case DecorationKit::Kind::Cycle:
      j["type"] = "cycle";
      break;
    case DecorationKit::Kind::Point:
      j["type"] = "point";
      break;
    case DecorationKit::Kind::Segment:
      j["type"] = "segment";
      if (kit.segment.length) j["length"] = *kit.segment.length;
      j["length_per_root"] = kit.segment.length_per_root;
      j["placement"] = placement_name(kit.segment.placement);
      break;
    case DecorationKit::Kind::BgwTree:
      j["type"] = "bgw_tree";
      j["inner"] = law_to_json(*kit.inner);
      break;
    case DecorationKit::Kind::Custom: {
      j["type"] = "custom";
      Json t = Json::array();
      for (const auto& d : kit.table) t.push_back(decoration_to_json(d));
      j["table"] = std::move(t);
      break;
    }
  }
  j["gamma"] = kit.gamma;
  j["beta"] = kit.beta;
  j["shuffle"] = kit.shuffle;
  return j;
}

Json decoration_to_json(const Decoration& d) {
  Json j;
  j["kind"] = decoration_kind_name(d.kind());
  switch (d.kind()) {
    case DecorationKind::Point:
      break;
    case DecorationKind::Cycle:
      j["points"] = d.size();
      break;
    case DecorationKind::Segment:
      j["length"] = d.segment_length();
      break;
    case DecorationKind::Tree:
      j["outdegrees"] = d.tree_structure()->outdegrees();
      break;
    case DecorationKind::Custom: {
      auto m = d.matrix();
      j["points"] = d.size();
      j["root"] = d.root();
      j["matrix"] = std::vector<double>(m.begin(), m.end());
      break;
    }
  }
  j["ext"] = std::vector<LocalPoint>(d.external_roots().begin(), d.external_roots().end());
  if (d.distance_scale() != 1.0) j["distance_scale"] = d.distance_scale();
  if (d.mass_scale() != 1.0) j["mass_scale"] = d.mass_scale();
  if (!d.default_mass()) j["mass"] = d.raw_mass();
  if (!d.slot_weights().empty()) j["slot_weights"] = d.slot_weights();
  return j;
}

Decoration decoration_from_json(const Json& j) {
  check_keys(j, {"kind", "points", "length", "outdegrees", "root", "matrix", "ext", "distance_scale", "mass_scale",
                 "mass", "slot_weights"},
             "decoration");
  const auto kind = get_as<std::string>(j, "kind");
  std::vector<LocalPoint> ext;
  if (j.contains("ext")) ext = get_as<std::vector<LocalPoint>>(j, "ext");
  Decoration d = Decoration::point();
  if (kind == "point") {
    d = Decoration::point().with_external_roots(ext);
  } else if (kind == "cycle") {
    d = Decoration::cycle(get_as<std::uint64_t>(j, "points")).with_external_roots(ext);
  } else if (kind == "segment") {
    d = Decoration::segment(get_as<std::uint64_t>(j, "length"), ext);
  } else if (kind == "tree") {
    auto t = std::make_shared<const PlaneTree>(
        PlaneTree::from_outdegrees(get_as<std::vector<std::uint32_t>>(j, "outdegrees")));
    d = Decoration::tree(std::move(t), ext);
  } else if (kind == "custom") {
    d = Decoration::custom(get_as<std::vector<double>>(j, "matrix"), get_as<std::size_t>(j, "points"),
                           j.contains("root") ? get_as<LocalPoint>(j, "root") : 0, ext);
  } else {
    fail(Errc::Config, "unknown decoration kind '" + kind + "'");
  }
  if (j.contains("mass")) d = d.with_mass(get_as<std::vector<double>>(j, "mass"));
  if (j.contains("slot_weights")) d = d.with_slot_weights(get_as<std::vector<double>>(j, "slot_weights"));
  double ds = j.contains("distance_scale") ? get_as<double>(j, "distance_scale") : 1.0;
  double ms = j.contains("mass_scale") ? get_as<double>(j, "mass_scale") : 1.0;
  if (ds != 1.0 || ms != 1.0) d = d.rescaled(ds, ms);
  return d;
}

Json decorated_tree_to_json(const DecoratedTree& dt) {
  Json j;
  j["outdegrees"] = dt.tree().outdegrees();
  Json decs = Json::array();
  for (const auto& d : dt.decorations()) decs.push_back(decoration_to_json(d));
  j["decorations"] = std::move(decs);
  return j;
}

DecoratedTree decorated_tree_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("outdegrees") || !j.contains("decorations"))
    fail(Errc::Config, "decorated tree needs 'outdegrees' and 'decorations'");
  auto tree = PlaneTree::from_outdegrees(get_as<std::vector<std::uint32_t>>(j, "outdegrees"));
  std::vector<Decoration> decs;
  for (const auto& e : j.at("decorations")) decs.push_back(decoration_from_json(e));
  return DecoratedTree(std::move(tree), std::move(decs));
}

void write_matrix_csv(std::ostream& os, const std::vector<double>& m, std::size_t n,
                      const std::vector<std::string>& comments) {
  if (m.size() != n * n) fail(Errc::Io, "matrix size does not match n");
  for (const auto& c : comments) os << "# " << c << '\n';
  os << std::setprecision(17);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k) os << ',';
      os << m[i * n + k];
    }
    os << '\n';
  }
}

FiniteMetricSpace read_matrix_csv(std::istream& is) {
  std::vector<double> values;
  std::size_t rows = 0, cols = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t count = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        fail(Errc::Io, "bad number '" + cell + "' in row " + std::to_string(rows + 1));
      }
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols) fail(Errc::Io, "ragged row " + std::to_string(rows + 1));
    ++rows;
  }
  if (rows == 0 || rows != cols) fail(Errc::Io, "distance matrix must be square and non-empty");
  return FiniteMetricSpace::from_matrix(std::move(values), rows);
}

FiniteMetricSpace read_matrix_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::Io, "cannot open " + path);
  return read_matrix_csv(f);
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::Io, "cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Config, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::Io, "cannot write " + path);
  f << text;
  if (!f) fail(Errc::Io, "write failed for " + path);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dstree
