#pragma once

// Weak-head normalization, the definitional-equality algorithm, head-form
// coercions and pattern-driven unification.

#include <set>
#include <vector>

#include "picheck/environment.hpp"
#include "picheck/syntax.hpp"

namespace picheck {

enum class Unfold { Yes, No };

// Reduces until the outermost form is exposed: beta steps, annotation and
// position stripping, definition unfolding, case/let-pair/let reduction, and
// `subst a by Refl`. Total on ill-typed terms (stuck forms come back with a
// whnf'd head). Each reduction counts against the context's step budget.
TermPtr whnf(Context& ctx, TermPtr t);
TermPtr whnf(Context& ctx, TermPtr t, Unfold unfold);

// Decides definitional equality; throws TypeMismatch when the terms differ.
// Irrelevant arguments are ignored. Definitions are unfolded only when the
// terms are not already equal without them.
void equate(Context& ctx, const TermPtr& t1, const TermPtr& t2);

struct PiParts {
  Epsilon eps;
  TermPtr domain;
  Binder bind;
};
PiParts ensurePi(Context& ctx, const TermPtr& ty);

struct TConParts {
  std::string name;
  std::vector<Arg> params;
};
TConParts ensureTCon(Context& ctx, const TermPtr& ty);

std::pair<TermPtr, TermPtr> ensureTyEq(Context& ctx, const TermPtr& ty);

using NameSet = std::set<Name>;

// First-order structural unification producing deferred substitutions.
// Only variables in `flexible` may be defined; rigid head clashes throw
// UnificationFailure, stuck forms contribute nothing. `complete` is false
// when some subproblem was skipped as undecidable, i.e. the returned
// definitions do not by themselves guarantee the equation.
struct UnifyOutcome {
  std::vector<DefEntry> defs;
  bool complete = true;
};
UnifyOutcome unifyFull(Context& ctx, const NameSet& flexible, const TermPtr& a,
                       const TermPtr& b);
std::vector<DefEntry> unify(Context& ctx, const NameSet& flexible,
                            const TermPtr& a, const TermPtr& b);

// Matches a pattern against a term in whnf, reducing constructor arguments
// as needed for nested patterns.
enum class MatchResult { Matched, NoMatch, Stuck };
MatchResult patternMatch(Context& ctx, const Pattern& pat, const TermPtr& t,
                         std::vector<std::pair<Name, TermPtr>>& binds,
                         Unfold unfold = Unfold::Yes);

}  // namespace picheck
