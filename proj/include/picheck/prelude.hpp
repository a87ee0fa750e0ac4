#pragma once

// The bundled prelude: Bool and Nat, the targets of the `if` and numeric
// literal sugar. Implicitly imported unless the driver is told otherwise.

#include "picheck/environment.hpp"
#include "picheck/parser.hpp"

namespace picheck {

const char* preludeSource();
const ModuleAST& preludeModule();
ConstructorEnv preludeConstructors();

// Checks the prelude into the context.
void loadPrelude(Context& ctx);

}  // namespace picheck
