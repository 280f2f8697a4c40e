#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dstree/bgw.hpp"
#include "dstree/commands.hpp"
#include "dstree/error.hpp"
#include "dstree/io.hpp"
#include "dstree/render.hpp"

using namespace dstree;
namespace fs = std::filesystem;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Io;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("dstree_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string cli() {
  const char* c = std::getenv("DSTREE_CLI");
  return c ? c : "";
}

// Runs the CLI with stdout and stderr discarded; returns the exit status.
int run(const std::string& args) {
  int rc = std::system((cli() + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t c = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++c;
  return c;
}

}  // namespace

TEST_CASE("law and kit JSON") {
  for (const auto& law : {OffspringLaw::stable(1.5), OffspringLaw::finite({0.25, 0.5, 0.25}),
                          OffspringLaw::geometric(0.5)}) {
    auto back = law_from_json(law_to_json(law), 1.5);
    CHECK(law_to_json(back) == law_to_json(law));
    for (std::uint64_t k = 0; k < 6; ++k) CHECK(back.pmf(k) == doctest::Approx(law.pmf(k)));
  }
  CHECK(law_from_json(Json{{"type", "power"}, {"alpha", 1.3}}, 1.5).pmf(0) ==
        doctest::Approx(OffspringLaw::stable(1.3).pmf(0)));
  CHECK(code_of([] { law_from_json(Json{{"type", "finite"}, {"p", {0.5, 0.2}}}, 1.5); }) ==
        Errc::ParamOutOfRange);

  SegmentRule uniform;
  uniform.placement = SegmentRule::Placement::Uniform;
  for (const auto& kit : {DecorationKit::cycle(), DecorationKit::segment_kit(uniform), DecorationKit::point_kit(),
                          DecorationKit::bgw_tree(OffspringLaw::finite({0.5, 0, 0.5}), 1.0)}) {
    auto j = kit_to_json(kit);
    CHECK(kit_to_json(kit_from_json(j, kit.gamma, kit.beta)) == j);
  }
  CHECK(kit_from_json(Json{{"kind", "cycle"}}, 1.0, 1.0).kind == DecorationKit::Kind::Cycle);
  CHECK(code_of([] { kit_from_json(Json{{"type", "hexagon"}}, 1.0, 1.0); }) == Errc::Config);
  CHECK(code_of([] { kit_from_json(Json{{"type", "cycle"}, {"gamma", 0.7}}, 1.0, 1.0); }) == Errc::Config);
  CHECK(code_of([] { kit_from_json(Json{{"type", "cycle"}, {"kind", "cycle"}}, 1.0, 1.0); }) == Errc::Config);
}

TEST_CASE("decorated tree JSON round trip") {
  Rng rng(1);
  auto t = sample_conditioned_bgw({OffspringLaw::stable(1.5), Conditioning::vertices(200)}, rng);
  for (const auto& kit : {DecorationKit::cycle(), DecorationKit::bgw_tree(OffspringLaw::finite({0.5, 0, 0.5}))}) {
    auto dt = glue(t, kit, rng);
    auto j = decorated_tree_to_json(dt);
    auto back = decorated_tree_from_json(Json::parse(dump_json(j)));
    CHECK(decorated_tree_to_json(back) == j);
    CHECK(back.diameter() == dt.diameter());
    CHECK(back.total_mass() == dt.total_mass());
  }
  auto custom = Decoration::custom({0, 1.5, 1.5, 0}, 2, 0, {1});
  CHECK(decoration_to_json(decoration_from_json(decoration_to_json(custom))) == decoration_to_json(custom));
}

TEST_CASE("matrix CSV") {
  std::vector<double> m{0, 0.1, 1.0 / 3, 0.1, 0, 0.4, 1.0 / 3, 0.4, 0};
  std::ostringstream os;
  write_matrix_csv(os, m, 3, {"hello"});
  CHECK(os.str().rfind("# hello\n", 0) == 0);
  std::istringstream is(os.str());
  auto s = read_matrix_csv(is);
  CHECK(s.matrix() == m);
  std::istringstream ragged("0,1\n1,0,2\n");
  CHECK(code_of([&] { read_matrix_csv(ragged); }) == Errc::Io);
  std::istringstream rect("0,1,2\n1,0,2\n");
  CHECK(code_of([&] { read_matrix_csv(rect); }) == Errc::Io);
}

TEST_CASE("run configuration") {
  auto c = config_from_json(Json{{"alpha", 1.3}, {"gamma", 0.5}, {"n", 50}, {"seed", 4}});
  CHECK(c.alpha == 1.3);
  CHECK(*c.seed == 4);
  CHECK(config_from_json(config_to_json(c)).alpha == 1.3);
  CHECK(config_from_json(Json{{"condition", {{"leaves", 40}}}}).conditioning == "leaves");
  CHECK(code_of([] { config_from_json(Json{{"alpah", 1.3}}); }) == Errc::Config);
  CHECK(code_of([] { check_regime(1.5, 0.4); }) == Errc::Config);
  CHECK(code_of([] { check_regime(2.0, 1.0); }) == Errc::Config);
  check_regime(1.5, 0.6);
  CHECK(code_of([] { require_seed(RunConfig{}); }) == Errc::Config);
}

TEST_CASE("render") {
  Rng rng(2);
  auto tri = glue(PlaneTree::from_outdegrees({3, 0, 0, 0}), DecorationKit::cycle(), rng);
  RenderStats st;
  auto svg = render_svg(tri, {}, &st);
  CHECK(st.nodes == 3);
  CHECK(st.edges == 3);
  CHECK(count(svg, "<circle") == 3);
  CHECK(count(svg, "<line") == 3);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  auto t = sample_conditioned_bgw({OffspringLaw::stable(1.5), Conditioning::vertices(10000)}, rng);
  auto looptree = glue(t, DecorationKit::cycle(), rng);
  auto big = render_svg(looptree, {}, &st);
  CHECK(big.size() < 20u * 1024 * 1024);
  std::size_t edges = 0;
  for (const auto& dec : looptree.decorations()) edges += dec.edges().size();
  CHECK(st.edges == edges);
  CHECK(count(big, "<line") == edges);

  DecoratedTree custom(PlaneTree(), {Decoration::custom({0, 1, 1, 0}, 2, 0, {})});
  CHECK(code_of([&] { render_svg(custom); }) == Errc::NonGraphDecoration);
}

TEST_CASE("commands in process") {
  RunConfig c;
  c.seed = 3;
  c.n = 40;
  c.out = scratch("inproc").string();
  auto s = cmd_sample(c);
  CHECK(s["stats"]["vertices"] == 40);
  CHECK(fs::exists(fs::path(c.out) / "decorated_tree.json"));
  auto e = cmd_enum([] {
    RunConfig r;
    r.n = 4;
    r.law = Json{{"type", "finite"}, {"p", {0.25, 0.5, 0.25}}};
    r.out = scratch("enum").string();
    return r;
  }());
  CHECK(e["marked_tree_series"][0]["counts"][3] == "11");
  std::ostringstream out, err;
  RunConfig bad = c;
  bad.gamma = 0.4;
  CHECK(run_command("sample", bad, out, err) == kExitConfig);
  CHECK(err.str().find("gamma") != std::string::npos);
}

TEST_CASE("CLI end to end") {
  if (cli().empty()) {
    MESSAGE("DSTREE_CLI not set; skipping");
    return;
  }
  auto a = scratch("a"), b = scratch("b");
  REQUIRE(run("sample --n 300 --seed 11 --out " + a.string()) == 0);
  REQUIRE(run("sample --n 300 --seed 11 --out " + b.string()) == 0);
  for (auto f : {"tree.json", "decorated_tree.json", "summary.json"}) CHECK(slurp(a / f) == slurp(b / f));
  auto c = scratch("c");
  REQUIRE(run("sample --n 300 --seed 12 --out " + c.string()) == 0);
  CHECK(slurp(a / "tree.json") != slurp(c / "tree.json"));

  CHECK(run("sample --n 300 --out " + c.string()) == 2);                       // no seed
  CHECK(run("sample --gamma 0.4 --seed 1 --out " + c.string()) == 2);          // outside the regime
  CHECK(run("sample --seed 1 --kit '{\"type\":\"nope\"}' --out " + c.string()) == 2);
  CHECK(run("sample --seed 1 --bogus-flag --out " + c.string()) == 2);
  CHECK(run("analyze --input /nonexistent/d.csv --out " + c.string()) == 3);

  auto m1 = scratch("m1"), m64 = scratch("m64");
  REQUIRE(run("marginal --k 1 --seed 2 --out " + m1.string()) == 0);
  auto j1 = read_json_file((m1 / "marginal.json").string());
  CHECK(j1["points"] == 1);
  REQUIRE(run("marginal --k 64 --alpha 1.25 --gamma 0.5 --kit '{\"type\":\"bgw_tree\",\"inner\":{\"type\":\"finite\",\"p\":[0.5,0,0.5]}}' --seed 2 --out " +
              m64.string()) == 0);
  auto j64 = read_json_file((m64 / "marginal.json").string());
  CHECK(j64["spines"].size() == 64);
  auto d = read_matrix_csv_file((m64 / "distances.csv").string());
  CHECK(d.size() == 64);

  REQUIRE(run("analyze --input " + (m64 / "distances.csv").string() + " --compare " +
              (m64 / "distances.csv").string() + " --seed 1 --out " + m64.string()) == 0);
  auto an = read_json_file((m64 / "analysis.json").string());
  CHECK(an["gh_bounds"]["lower"] == 0.0);
  CHECK(an["gh_bounds"]["upper"].get<double>() <= 1e-12);

  REQUIRE(run("render --input " + (a / "decorated_tree.json").string() + " --out " + a.string()) == 0);
  CHECK(slurp(a / "render.svg").find("</svg>") != std::string::npos);

  auto v = scratch("v");
  CHECK(run("verify --suite gf --out " + v.string()) == 0);
  CHECK(read_json_file((v / "verify.json").string())["pass"] == true);
  CHECK(run("verify --suite nonsense --out " + v.string()) == 2);

  REQUIRE(run("enum --n 5 --law '{\"type\":\"finite\",\"p\":[0.5,0,0.5]}' --out " + v.string()) == 0);
  auto en = read_json_file((v / "enum.json").string());
  CHECK(en["exact_conditioned_law"].size() == 2);

  auto cfg = scratch("cfg");
  write_text_file((cfg / "run.json").string(), R"({"alpha": 1.5, "n": 50, "seed": 9, "kit": {"type": "segment"}})");
  CHECK(run("sample --config " + (cfg / "run.json").string() + " --out " + cfg.string()) == 0);
  CHECK(read_json_file((cfg / "summary.json").string())["config"]["kit"]["type"] == "segment");
  write_text_file((cfg / "bad.json").string(), R"({"alpha": "high"})");
  CHECK(run("sample --config " + (cfg / "bad.json").string() + " --out " + cfg.string()) == 2);
}
