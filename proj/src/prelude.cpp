#include "picheck/prelude.hpp"

#include "picheck/typecheck.hpp"

namespace picheck {

const char* preludeSource() {
  return R"(module Prelude where

data Bool : Type where {
  True ;
  False
}

data Nat : Type where {
  Zero ;
  Succ of (Nat)
}
)";
}

const ModuleAST& preludeModule() {
  static const ModuleAST m =
      parseModule(preludeSource(), "Prelude.pi", ConstructorEnv{});
  return m;
}

ConstructorEnv preludeConstructors() {
  ConstructorEnv env;
  env.addFrom(preludeModule());
  return env;
}

void loadPrelude(Context& ctx) { checkModule(ctx, preludeModule()); }

}  // namespace picheck
