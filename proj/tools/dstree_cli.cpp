#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dstree/commands.hpp"
#include "dstree/error.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed, n, k, points, max_atoms, scales, max_marks;
  std::optional<double> alpha, gamma, beta, trunc_eps, b1_delta;
  std::optional<std::string> out, kit, law, input, compare, suite, measure, conditioning;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--alpha", f.alpha, "stable index in (1,2)");
  app->add_option("--gamma", f.gamma, "distance exponent in (alpha-1, 1]");
  app->add_option("--beta", f.beta, "mass exponent");
  app->add_option("--n", f.n, "tree size");
  app->add_option("--k", f.k, "number of spines");
  app->add_option("--kit", f.kit, "decoration kit as JSON");
  app->add_option("--law", f.law, "offspring law as JSON");
  app->add_option("--conditioning", f.conditioning, "vertices or leaves");
  app->add_option("--trunc-eps", f.trunc_eps, "stick truncation tolerance");
  app->add_option("--max-atoms", f.max_atoms, "stick cap per spine");
  app->add_option("--points", f.points, "marginal sample points (0: k tips)");
  app->add_option("--measure", f.measure, "tips, uniform_mass or block_mass");
  app->add_option("--b1-delta", f.b1_delta, "delta of the small-decoration diagnostic");
  app->add_option("--input", f.input, "input file");
  app->add_option("--compare", f.compare, "second distance CSV for GH bounds");
  app->add_option("--scales", f.scales, "box-counting scales");
  app->add_option("--suite", f.suite, "gf, oracle, laws or all");
  app->add_option("--max-marks", f.max_marks, "largest mark count k for enum");
}

dstree::Json parse_json_flag(const std::string& name, const std::string& text) {
  try {
    return dstree::Json::parse(text);
  } catch (const std::exception& e) {
    dstree::fail(dstree::Errc::Config, "--" + name + " is not valid JSON: " + e.what());
  }
}

dstree::RunConfig resolve(const Flags& f) {
  dstree::RunConfig c;
  if (!f.config.empty()) c = dstree::load_config(f.config, c);
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.gamma) c.gamma = *f.gamma;
  if (f.beta) c.beta = *f.beta;
  if (f.n) c.n = *f.n;
  if (f.k) c.k = *f.k;
  if (f.kit) c.kit = parse_json_flag("kit", *f.kit);
  if (f.law) c.law = parse_json_flag("law", *f.law);
  if (f.conditioning) c.conditioning = *f.conditioning;
  if (f.trunc_eps) c.trunc_eps = *f.trunc_eps;
  if (f.max_atoms) c.max_atoms = *f.max_atoms;
  if (f.points) c.points = *f.points;
  if (f.measure) c.measure = *f.measure;
  if (f.b1_delta) c.b1_delta = *f.b1_delta;
  if (f.input) c.input = *f.input;
  if (f.compare) c.compare = *f.compare;
  if (f.scales) c.scales = *f.scales;
  if (f.suite) c.suite = *f.suite;
  if (f.max_marks) c.max_marks = *f.max_marks;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decorated stable trees: sampling, continuum marginals and checks"};
  app.require_subcommand(1);
  Flags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"sample", "sample a decorated conditioned BGW tree"},
      {"marginal", "build a finite-dimensional continuum marginal"},
      {"analyze", "dimension estimate and GH bounds of distance matrices"},
      {"render", "SVG of a decorated tree"},
      {"verify", "built-in self-checks"},
      {"enum", "exact enumeration tables"},
  };
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : dstree::kExitConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  dstree::RunConfig cfg;
  try {
    cfg = resolve(flags);
  } catch (const dstree::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dstree::kExitConfig;
  }
  return dstree::run_command(name, cfg, std::cout, std::cerr);
}
