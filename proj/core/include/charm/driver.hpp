#pragma once

#include "charm/catalog.hpp"

#include <iosfwd>
#include <string>

namespace charm::cli {

/// One resolved invocation. The command decides which of the remaining
/// fields are read; sampling is deterministic in (points, seed).
struct RunConfig {
  std::string command;
  std::string id;
  catalog::Params params;
  int points = 32;
  int seed = 7;
  double tol = 1e-6;
  geom::Backend backend = geom::Backend::jet;
  std::string json_path;    // report file, empty for none
  std::string matrix_file;  // decompose input
};

/// Executes the configured command, printing a human summary to out and
/// diagnostics to err. Returns 0 when computed verdicts match the catalog
/// expectations, 1 on a mismatch or a residual above tolerance, 2 on
/// invalid input of any kind.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace charm::cli
