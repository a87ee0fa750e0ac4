#include "picheck/driver.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "picheck/error.hpp"
#include "picheck/parser.hpp"
#include "picheck/prelude.hpp"
#include "picheck/pretty.hpp"
#include "picheck/typecheck.hpp"

namespace picheck {

namespace {

namespace fs = std::filesystem;

struct DriverError {
  std::string message;  // rendered to stderr, exit 2
};

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DriverError{"cannot read file: " + p.string()};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SourceFile {
  std::string name;
  fs::path path;
  std::string text;
  std::vector<std::string> imports;
};

class Loader {
 public:
  explicit Loader(const DriverConfig& cfg) : cfg_(cfg) {}

  // Topologically ordered module list, entry last.
  std::vector<SourceFile> load() {
    fs::path entry(cfg_.entryFile);
    if (!fs::exists(entry)) throw DriverError{"no such file: " + entry.string()};
    SourceFile f = scan(entry);
    visit(f.name, f);
    return std::move(order_);
  }

 private:
  SourceFile scan(const fs::path& p) {
    SourceFile f;
    f.path = p;
    f.text = readFile(p);
    ModuleHeader h = scanModuleHeader(f.text, p.string());
    f.name = h.name;
    f.imports = h.imports;
    return f;
  }

  fs::path resolve(const std::string& name) {
    for (const auto& dir : cfg_.searchPaths) {
      fs::path cand = fs::path(dir) / (name + ".pi");
      if (fs::exists(cand)) return cand;
    }
    throw DriverError{"cannot resolve import: " + name};
  }

  void visit(const std::string& name, const SourceFile& f) {
    state_[name] = 1;
    for (const auto& imp : f.imports) {
      auto it = state_.find(imp);
      if (it != state_.end()) {
        if (it->second == 1)
          throw DriverError{"cyclic imports involving: " + imp};
        continue;  // already loaded
      }
      SourceFile g = scan(resolve(imp));
      if (g.name != imp) g.name = imp;  // resolution is by file name
      visit(imp, g);
    }
    state_[name] = 2;
    order_.push_back(f);
  }

  const DriverConfig& cfg_;
  std::map<std::string, int> state_;
  std::vector<SourceFile> order_;
};

}  // namespace

RunResult runDriver(const DriverConfig& config) {
  RunResult result;
  try {
    DriverConfig cfg = config;
    if (cfg.searchPaths.empty())
      cfg.searchPaths.push_back(
          fs::path(cfg.entryFile).parent_path().empty()
              ? "."
              : fs::path(cfg.entryFile).parent_path().string());

    Loader loader(cfg);
    std::vector<SourceFile> files = loader.load();

    Context ctx;
    ctx.stepLimit = cfg.stepLimit;
    ctx.regularityChecks = cfg.regularityChecks;

    ConstructorEnv env;
    if (!cfg.noPrelude) {
      loadPrelude(ctx);
      env = preludeConstructors();
    }

    std::optional<ModuleAST> entryModule;
    for (const SourceFile& f : files) {
      ModuleAST m = parseModule(f.text, f.path.string(), env);
      env.addFrom(m);
      checkModule(ctx, m);
      for (const auto& w : ctx.warnings()) result.err += w + "\n";
      ctx.clearWarnings();
      if (&f == &files.back()) entryModule = std::move(m);
    }

    PrintOpts opts;
    opts.ctorNames = env.allNames();
    result.out = prettyModule(*entryModule, opts);
    result.exitCode = 0;
  } catch (const CheckError& e) {
    result.err += e.render() + "\n";
    result.exitCode = 1;
  } catch (const DriverError& e) {
    result.err += "error: " + e.message + "\n";
    result.exitCode = 2;
  }
  return result;
}

}  // namespace picheck
