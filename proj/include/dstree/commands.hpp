#pragma once

#include <iosfwd>
#include <string>

#include "dstree/io.hpp"

namespace dstree {

// Each command writes its files under cfg.out and returns a JSON summary.
//   sample    tree.json, decorated_tree.json, summary.json
//   marginal  marginal.json, distances.csv, uncertainty.csv
//   analyze   analysis.json (input: distance CSV; compare: optional second CSV)
//   render    render.svg (input: decorated_tree.json)
//   verify    verify.json
//   enum      enum.json
Json cmd_sample(const RunConfig& cfg);
Json cmd_marginal(const RunConfig& cfg);
Json cmd_analyze(const RunConfig& cfg);
Json cmd_render(const RunConfig& cfg);
Json cmd_verify(const RunConfig& cfg);
Json cmd_enum(const RunConfig& cfg);

enum ExitCode { kExitOk = 0, kExitFailed = 1, kExitConfig = 2, kExitRuntime = 3 };

// Runs a command by name, prints the summary to `out` and errors to `err`; returns the exit code.
// A verify run with a failing check returns kExitFailed.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace dstree
