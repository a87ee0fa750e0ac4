#pragma once

// Lexer, layout algorithm and parser for .pi source text.
//
// Identifiers are resolved to variables or constructors using a constructor
// environment: names declared by `data` in the prelude, in imported modules,
// or earlier in the same file parse as TyCon/DataCon nodes, everything else
// as variables.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "picheck/syntax.hpp"

namespace picheck {

struct ConstructorEnv {
  std::set<std::string> tycons;
  std::set<std::string> datacons;

  bool isCtor(const std::string& s) const {
    return tycons.count(s) || datacons.count(s);
  }
  void addFrom(const ModuleAST& m);
  std::set<std::string> allNames() const;
};

ModuleAST parseModule(std::string_view text, std::string_view file,
                      ConstructorEnv env);

TermPtr parseTerm(std::string_view text, const ConstructorEnv& env);

struct ModuleHeader {
  std::string name;  // empty when the file has no module header
  std::vector<std::string> imports;
};

// Reads just the module header and import list; used to build the import
// graph before any constructor environment exists.
ModuleHeader scanModuleHeader(std::string_view text, std::string_view file);

}  // namespace picheck
