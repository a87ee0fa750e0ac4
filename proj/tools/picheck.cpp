#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "picheck/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"picheck - type checker for the pi-check language"};

  picheck::DriverConfig cfg;
  std::uint64_t stepLimit = 0;
  bool haveLimit = false;

  app.add_option("--path", cfg.searchPaths,
                 "Directory to search for imported modules (repeatable)");
  auto* limitOpt =
      app.add_option("--step-limit", stepLimit,
                     "Abort reduction after this many steps")
          ->check(CLI::PositiveNumber);
  app.add_flag("--regularity", cfg.regularityChecks,
               "Also check that every inferred type is itself a type");
  app.add_flag("--no-prelude", cfg.noPrelude,
               "Do not load the bundled prelude (Bool, Nat)");
  app.add_option("file", cfg.entryFile, "The .pi file to check")
      ->required();

  CLI11_PARSE(app, argc, argv);

  haveLimit = limitOpt->count() > 0;
  if (haveLimit) cfg.stepLimit = stepLimit;

  picheck::RunResult r = picheck::runDriver(cfg);
  std::cout << r.out;
  std::cerr << r.err;
  return r.exitCode;
}
