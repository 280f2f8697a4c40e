#pragma once

#include <string>
#include <vector>

#include "dstree/io.hpp"

namespace dstree {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Built-in self-checks, deterministic for a fixed seed.
//   gf      marked-tree counts against the three printed series, closed form, sum identity
//   oracle  glued distances against breadth-first search on the explicit graph
//   laws    Mittag-Leffler and MLMC moments against the Gamma-ratio formula
std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed);
const std::vector<std::string>& verify_suite_names();

Json check_results_to_json(const std::string& suite, const std::vector<CheckResult>& results);

}  // namespace dstree
