#pragma once

// Pretty printer for terms and modules. Output reparses to an
// alpha-equivalent AST: binders are renamed on the way out whenever the
// original hint would collide with a free variable, a keyword, or a
// constructor name in scope.

#include <set>
#include <string>

#include "picheck/syntax.hpp"

namespace picheck {

struct PrintOpts {
  // Identifiers that must not be used for variables (they would reparse as
  // constructors). The prelude constructors are always avoided.
  std::set<std::string> ctorNames;
};

std::string prettyTerm(const TermPtr& t);
std::string prettyTerm(const TermPtr& t, const PrintOpts& opts);
std::string prettyPattern(const Pattern& p);
std::string prettyTelescope(const Telescope& tele, const PrintOpts& opts);
std::string prettyModule(const ModuleAST& m, const PrintOpts& opts);

}  // namespace picheck
