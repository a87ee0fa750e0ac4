#pragma once

// The bidirectional type checker: inference and checking through a single
// dispatcher, sigma/let/if refinement, propositional equality, irrelevance
// staging, telescopes, data constructors, dependent case with unification
// and exhaustiveness, and module-level checking.

#include <utility>
#include <vector>

#include "picheck/environment.hpp"
#include "picheck/equality.hpp"
#include "picheck/syntax.hpp"

namespace picheck {

TermPtr inferType(Context& ctx, const TermPtr& a);
void checkType(Context& ctx, const TermPtr& a, const TermPtr& expectedTy);

// Checks that a term is a valid type (has type Type), under resurrection.
void checkIsType(Context& ctx, const TermPtr& ty);

// The dispatcher: `expected`, when non-null, is already in whnf.
TermPtr tcTerm(Context& ctx, const TermPtr& a, const TermPtr* expected);

// Relevant uses require a relevant tag.
void checkStage(Context& ctx, Epsilon eps, const Name& x);

// Checks constructor (or type-constructor) arguments against a telescope.
void tcArgTele(Context& ctx, const std::vector<Arg>& args,
               const Telescope& tele);

// Pushes a substitution through a telescope; a constraint whose left side
// stops being a variable is discharged by unification.
Telescope doSubst(Context& ctx,
                  const std::vector<std::pair<Name, TermPtr>>& sub,
                  const Telescope& tele);

// Substitutes actual parameters for a datatype's parameter telescope inside
// a constructor telescope.
Telescope substTele(Context& ctx, const Telescope& paramTele,
                    const std::vector<Arg>& params, const Telescope& conTele);

// Produces the context entries binding a pattern's variables (including
// refinement definitions from constraints) and the pattern's term image.
// `ty` must be in whnf.
std::pair<std::vector<Entry>, TermPtr> declarePat(Context& ctx,
                                                  const Pattern& pat,
                                                  Epsilon eps,
                                                  const TermPtr& ty);

void exhaustivityCheck(Context& ctx, const TermPtr& scrutTy,
                       const std::vector<Pattern>& pats);

// Validates the types (and constraints) of a telescope.
void tcTypeTele(Context& ctx, const Telescope& tele);

// Checks a module's declarations in order, installing them into the context.
void checkModule(Context& ctx, const ModuleAST& m);

}  // namespace picheck
