#pragma once

// Batch entry point: resolves imports, loads the prelude, runs the parser
// and checker over the module graph, renders results and diagnostics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "picheck/syntax.hpp"

namespace picheck {

struct DriverConfig {
  std::vector<std::string> searchPaths;  // defaults to the entry's directory
  std::optional<std::uint64_t> stepLimit;
  bool regularityChecks = false;
  bool noPrelude = false;
  std::string entryFile;
};

struct RunResult {
  // 0: checked; 1: parse/type error; 2: I/O error or cyclic imports
  int exitCode = 0;
  std::string out;
  std::string err;
};

RunResult runDriver(const DriverConfig& config);

}  // namespace picheck
