#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dstree/continuum.hpp"
#include "dstree/decorations.hpp"
#include "dstree/glue.hpp"
#include "dstree/metric.hpp"
#include "dstree/offspring.hpp"

namespace dstree {

using Json = nlohmann::ordered_json;

// Parameters shared by all subcommands. JSON keys match the field names.
struct RunConfig {
  double alpha = 1.5;
  double gamma = 1.0;
  double beta = 1.0;
  std::uint64_t n = 1000;
  std::uint64_t k = 8;
  Json kit = Json{{"type", "cycle"}};
  Json law;  // empty: stable(alpha)
  std::string conditioning = "vertices";
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  double trunc_eps = 1e-4;
  std::uint64_t max_atoms = 100'000;
  std::string measure = "tips";      // marginal sample points
  std::uint64_t points = 0;          // marginal: 0 means k tips
  double b1_delta = 0.1;
  std::string input;                 // analyze/render
  std::string compare;               // analyze: second matrix for GH bounds
  std::uint64_t scales = 12;         // analyze: box-counting scales
  std::string suite = "all";         // verify
  std::uint64_t max_marks = 2;       // enum: k in 0..max_marks
};

// Unknown keys and wrong types raise Config errors.
RunConfig config_from_json(const Json& j, RunConfig base = {});
Json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path, RunConfig base = {});

// alpha in (1,2) and gamma in (alpha-1, 1].
void check_regime(double alpha, double gamma);
std::uint64_t require_seed(const RunConfig& c);

OffspringLaw law_from_json(const Json& j, double default_alpha);
Json law_to_json(const OffspringLaw& law);

// Kit descriptors: {"type": "cycle" | "segment" | "point" | "bgw_tree" | "custom", ...}.
// gamma/beta default to the run values; a kit entry that disagrees is a Config error.
DecorationKit kit_from_json(const Json& j, double gamma, double beta);
Json kit_to_json(const DecorationKit& kit);

Json decoration_to_json(const Decoration& d);
Decoration decoration_from_json(const Json& j);

Json decorated_tree_to_json(const DecoratedTree& dt);
DecoratedTree decorated_tree_from_json(const Json& j);

// CSV of a square matrix; leading lines starting with '#' are comments.
void write_matrix_csv(std::ostream& os, const std::vector<double>& m, std::size_t n,
                      const std::vector<std::string>& comments = {});
FiniteMetricSpace read_matrix_csv(std::istream& is);
FiniteMetricSpace read_matrix_csv_file(const std::string& path);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string dump_json(const Json& j);

}  // namespace dstree
