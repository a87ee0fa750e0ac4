#include "picheck/typecheck.hpp"

#include <algorithm>
#include <optional>

#include "picheck/pretty.hpp"

namespace picheck {

namespace {

// Regularity spot-checks must not recurse into themselves.
thread_local bool gInRegularityCheck = false;

TermPtr finish(Context& ctx, TermPtr inferred, const TermPtr* expected) {
  if (expected) {
    equate(ctx, inferred, *expected);
    return *expected;
  }
  return inferred;
}

Telescope doSubst1(Context& ctx, const std::pair<Name, TermPtr>& sub,
                   const Telescope& tele);

}  // namespace

void checkStage(Context& ctx, Epsilon eps, const Name& x) {
  if (eps != Epsilon::Rel)
    ctx.fail(ErrorClass::IrrelevantUse,
             {std::string("Cannot access irrelevant variables in this context"),
              tm::var(x)});
}

TermPtr inferType(Context& ctx, const TermPtr& a) {
  TermPtr ty = tcTerm(ctx, a, nullptr);
  if (ctx.regularityChecks && !gInRegularityCheck) {
    gInRegularityCheck = true;
    try {
      checkIsType(ctx, ty);
    } catch (...) {
      gInRegularityCheck = false;
      throw;
    }
    gInRegularityCheck = false;
  }
  return ty;
}

void checkType(Context& ctx, const TermPtr& a, const TermPtr& expectedTy) {
  TermPtr n = whnf(ctx, expectedTy);
  tcTerm(ctx, a, &n);
}

void checkIsType(Context& ctx, const TermPtr& ty) {
  auto g = ctx.resurrect();
  checkType(ctx, ty, tm::type());
}

// ---------------------------------------------------------------------------
// Telescope machinery

namespace {

// Renames `from` to `to` in the entries, stopping at a shadowing signature.
std::vector<TeleEntry> renameTeleTail(const std::vector<TeleEntry>& entries,
                                      std::size_t start, const Name& from,
                                      const Name& to) {
  std::vector<TeleEntry> out(entries.begin(), entries.end());
  TermPtr v = tm::var(to);
  for (std::size_t i = start; i < out.size(); ++i) {
    if (auto* s = std::get_if<TeleSig>(&out[i])) {
      s->type = substTerm(from, v, s->type);
      if (s->name == from) break;  // shadowed from here on
    } else {
      auto& d = std::get<TeleDef>(out[i]);
      d.lhs = substTerm(from, v, d.lhs);
      d.rhs = substTerm(from, v, d.rhs);
    }
  }
  return out;
}

Telescope doSubst1(Context& ctx, const std::pair<Name, TermPtr>& sub,
                   const Telescope& tele) {
  const auto& [x, v] = sub;
  NameSet flex;
  for (const auto& e : tele.entries)
    if (const auto* s = std::get_if<TeleSig>(&e)) flex.insert(s->name);
  std::set<Name> fvV = freeVars(v);

  std::vector<TeleEntry> work = tele.entries;
  std::vector<TeleEntry> out;
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (auto* s = std::get_if<TeleSig>(&work[i])) {
      TermPtr ty = substTerm(x, v, s->type);
      if (s->name == x) {
        // shadowed: the rest of the telescope is untouched
        out.push_back(TeleSig{s->name, s->eps, ty});
        out.insert(out.end(), work.begin() + i + 1, work.end());
        return Telescope{std::move(out)};
      }
      if (fvV.count(s->name)) {
        Name fresh = freshName(s->name);
        work = renameTeleTail(work, i + 1, s->name, fresh);
        flex.erase(s->name);
        flex.insert(fresh);
        out.push_back(TeleSig{fresh, s->eps, ty});
        continue;
      }
      out.push_back(TeleSig{s->name, s->eps, ty});
    } else {
      const auto& d = std::get<TeleDef>(work[i]);
      TermPtr lhs = substTerm(x, v, d.lhs);
      TermPtr rhs = substTerm(x, v, d.rhs);
      TeleDef next{lhs, rhs};
      if (teleDefVar(next)) {
        out.push_back(std::move(next));
      } else {
        // the constrained variable was substituted away; discharge by
        // unification (failure means the constraint is unsatisfiable);
        // an undecided constraint stays pending
        UnifyOutcome u = unifyFull(ctx, flex, lhs, rhs);
        if (u.complete) {
          for (auto& de : u.defs)
            out.push_back(TeleDef{tm::var(de.name), de.term});
        } else {
          out.push_back(std::move(next));
        }
      }
    }
  }
  return Telescope{std::move(out)};
}

}  // namespace

Telescope doSubst(Context& ctx,
                  const std::vector<std::pair<Name, TermPtr>>& sub,
                  const Telescope& tele) {
  Telescope cur = tele;
  for (const auto& p : sub) cur = doSubst1(ctx, p, cur);
  return cur;
}

Telescope substTele(Context& ctx, const Telescope& paramTele,
                    const std::vector<Arg>& params, const Telescope& conTele) {
  // First rename the parameter variables to fresh names inside the
  // constructor telescope, so substituting one actual parameter can never
  // disturb variables mentioned by another.
  Telescope cur = conTele;
  std::vector<std::pair<Name, TermPtr>> sub;
  std::size_t i = 0;
  for (const auto& e : paramTele.entries) {
    const auto* s = std::get_if<TeleSig>(&e);
    if (!s) continue;  // parameter telescopes carry only signatures
    if (i >= params.size())
      ctx.fail(ErrorClass::BadConstructorArity,
               {std::string("Not enough parameters for the type constructor")});
    Name fresh = freshName(s->name);
    cur = doSubst1(ctx, {s->name, tm::var(fresh)}, cur);
    sub.push_back({fresh, params[i++].term});
  }
  if (i != params.size())
    ctx.fail(ErrorClass::BadConstructorArity,
             {std::string("Too many parameters for the type constructor")});
  for (const auto& p : sub) cur = doSubst1(ctx, p, cur);
  return cur;
}

void tcArgTele(Context& ctx, const std::vector<Arg>& args,
               const Telescope& tele) {
  std::size_t i = 0;
  std::vector<TeleEntry> rest = tele.entries;
  while (!rest.empty()) {
    TeleEntry e = rest.front();
    rest.erase(rest.begin());
    if (const auto* s = std::get_if<TeleSig>(&e)) {
      if (i >= args.size())
        ctx.fail(ErrorClass::BadConstructorArity,
                 {std::string("Too few arguments given (expected " +
                              std::to_string(tele.sigCount()) + ")")});
      const Arg& arg = args[i++];
      if (arg.eps != s->eps)
        ctx.fail(ErrorClass::TypeMismatch,
                 {std::string("Expected a ") + epsilonStr(s->eps) +
                      " argument but found a " + epsilonStr(arg.eps) + " one:",
                  arg.term});
      {
        std::optional<Context::ResurrectGuard> g;
        if (s->eps == Epsilon::Irr) g.emplace(ctx);
        checkType(ctx, arg.term, s->type);
      }
      rest = doSubst1(ctx, {s->name, arg.term}, Telescope{rest}).entries;
    } else {
      // the constrained variable's accumulated value must equal the
      // definition's right side
      const auto& d = std::get<TeleDef>(e);
      equate(ctx, d.lhs, d.rhs);
    }
  }
  if (i != args.size())
    ctx.fail(ErrorClass::BadConstructorArity,
             {std::string("Too many arguments given (expected " +
                          std::to_string(tele.sigCount()) + ")")});
}

// ---------------------------------------------------------------------------
// Patterns

std::pair<std::vector<Entry>, TermPtr> declarePat(Context& ctx,
                                                  const Pattern& pat,
                                                  Epsilon eps,
                                                  const TermPtr& ty) {
  if (const auto* pv = std::get_if<PatVar>(&pat.node)) {
    return {{SigEntry{pv->name, eps, ty}}, tm::var(pv->name)};
  }
  const auto& pc = std::get<PatCon>(pat.node);
  if (eps == Epsilon::Irr)
    ctx.fail(ErrorClass::IrrelevantUse,
             {std::string(
                 "Cannot pattern-match an irrelevant argument against " +
                 pc.con)});
  TConParts tcon = ensureTCon(ctx, ty);
  auto hit = ctx.findCtorIn(tcon.name, pc.con);
  if (!hit)
    ctx.fail(ErrorClass::UnknownConstructor,
             {std::string("The type " + tcon.name +
                          " has no constructor named " + pc.con)});
  Telescope tele =
      substTele(ctx, hit->data->params, tcon.params, hit->ctor->tele);

  NameSet flexible;
  for (const Name& v : patternVars(pat)) flexible.insert(v);

  std::vector<Entry> decls;
  std::vector<Arg> imageArgs;
  std::size_t pi = 0;
  std::vector<TeleEntry> rest = tele.entries;
  while (!rest.empty()) {
    TeleEntry e = rest.front();
    rest.erase(rest.begin());
    if (const auto* s = std::get_if<TeleSig>(&e)) {
      if (pi >= pc.args.size())
        ctx.fail(ErrorClass::BadConstructorArity,
                 {std::string("Too few arguments in pattern for " + pc.con)});
      const PatArg& pa = pc.args[pi++];
      if (pa.eps != s->eps)
        ctx.fail(ErrorClass::TypeMismatch,
                 {std::string("Pattern argument relevance mismatch for " +
                              pc.con)});
      std::vector<Entry> subDecls;
      TermPtr subImage;
      {
        auto scope = ctx.extendMany(decls);
        TermPtr entryTy = whnf(ctx, s->type);
        auto [ds, img] = declarePat(ctx, pa.pat, s->eps, entryTy);
        subDecls = std::move(ds);
        subImage = std::move(img);
      }
      decls.insert(decls.end(), subDecls.begin(), subDecls.end());
      imageArgs.push_back(Arg{s->eps, subImage});
      rest = doSubst1(ctx, {s->name, subImage}, Telescope{rest}).entries;
    } else {
      const auto& d = std::get<TeleDef>(e);
      NameSet flex = flexible;
      if (const Name* v = teleDefVar(d)) flex.insert(*v);
      std::vector<DefEntry> defs;
      {
        auto scope = ctx.extendMany(decls);
        defs = unify(ctx, flex, d.lhs, d.rhs);
      }
      for (auto& de : defs) decls.push_back(de);
    }
  }
  if (pi != pc.args.size())
    ctx.fail(ErrorClass::BadConstructorArity,
             {std::string("Too many arguments in pattern for " + pc.con)});
  return {std::move(decls), tm::dataCon(pc.con, std::move(imageArgs))};
}

// ---------------------------------------------------------------------------
// Exhaustiveness

namespace {

// Instantiates a constructor telescope against the scrutinee's parameters;
// UnificationFailure anywhere means the constructor is impossible here.
bool ctorPossible(Context& ctx, const DataEntry& data,
                  const std::vector<Arg>& params, const ConstructorDef& ctor) {
  try {
    Telescope tele = substTele(ctx, data.params, params, ctor.tele);
    NameSet flex;
    for (const auto& e : tele.entries)
      if (const auto* s = std::get_if<TeleSig>(&e)) flex.insert(s->name);
    std::vector<Entry> acc;
    for (const auto& e : tele.entries) {
      if (const auto* s = std::get_if<TeleSig>(&e)) {
        acc.push_back(SigEntry{s->name, s->eps, s->type});
      } else {
        const auto& d = std::get<TeleDef>(e);
        NameSet f = flex;
        if (const Name* v = teleDefVar(d)) f.insert(*v);
        auto scope = ctx.extendMany(acc);
        std::vector<DefEntry> defs = unify(ctx, f, d.lhs, d.rhs);
        for (auto& de : defs) acc.push_back(de);
      }
    }
    return true;
  } catch (const CheckError& e) {
    if (e.errorClass() == ErrorClass::UnificationFailure) return false;
    throw;
  }
}

}  // namespace

void exhaustivityCheck(Context& ctx, const TermPtr& scrutTy,
                       const std::vector<Pattern>& pats) {
  for (const auto& p : pats)
    if (std::holds_alternative<PatVar>(p.node)) return;  // catch-all
  TConParts tcon = ensureTCon(ctx, scrutTy);
  const DataEntry& data = ctx.lookupData(tcon.name);
  std::vector<std::string> missing;
  for (const auto& ctor : data.ctors) {
    std::vector<const PatCon*> related;
    for (const auto& p : pats) {
      const auto* pc = std::get_if<PatCon>(&p.node);
      if (pc && pc->con == ctor.name) related.push_back(pc);
    }
    if (related.empty()) {
      if (ctorPossible(ctx, data, tcon.params, ctor))
        missing.push_back(ctor.name);
      continue;
    }
    // Nested coverage, column by column over the signature positions.
    Telescope tele;
    try {
      tele = substTele(ctx, data.params, tcon.params, ctor.tele);
    } catch (const CheckError& e) {
      if (e.errorClass() == ErrorClass::UnificationFailure) continue;
      throw;
    }
    std::size_t sigIdx = 0;
    for (const auto& e : tele.entries) {
      const auto* s = std::get_if<TeleSig>(&e);
      if (!s) continue;
      std::vector<Pattern> column;
      bool anyVar = false;
      for (const PatCon* pc : related) {
        if (sigIdx >= pc->args.size()) {
          anyVar = true;  // arity errors are reported by declarePat
          break;
        }
        const Pattern& sub = pc->args[sigIdx].pat;
        if (std::holds_alternative<PatVar>(sub.node)) {
          anyVar = true;
          break;
        }
        column.push_back(sub);
      }
      if (!anyVar) exhaustivityCheck(ctx, s->type, column);
      ++sigIdx;
    }
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& n : missing) names += (names.empty() ? "" : ", ") + n;
    ctx.fail(ErrorClass::NonExhaustive,
             {std::string("Patterns are non-exhaustive; missing cases for: " +
                          names)});
  }
}

// ---------------------------------------------------------------------------
// The dispatcher

namespace {

[[noreturn]] void mismatchLamType(Context& ctx, const TermPtr& found) {
  ctx.fail(ErrorClass::TypeMismatch,
           {std::string("Lambda expression should have a function type, not"),
            found});
}

TermPtr tcCase(Context& ctx, const Case& c, const TermPtr* expected) {
  TermPtr scrutTy = inferType(ctx, c.scrut);
  TConParts tcon = ensureTCon(ctx, scrutTy);  // scrutinee must be a datatype
  (void)tcon;
  TermPtr scrutTyWhnf = whnf(ctx, scrutTy);
  TermPtr scrutW = whnf(ctx, c.scrut);

  std::vector<Pattern> pats;
  pats.reserve(c.matches.size());
  for (const auto& m : c.matches) pats.push_back(m.pat);

  if (expected) {
    for (const auto& m : c.matches) {
      auto [pat, body] = unbindMatch(m);
      std::vector<Entry> decls;
      bool dead = false;
      try {
        auto [ds, image] = declarePat(ctx, pat, Epsilon::Rel, scrutTyWhnf);
        decls = std::move(ds);
        NameSet flexible;
        for (const Name& v : patternVars(pat)) flexible.insert(v);
        if (const auto* sv = std::get_if<Var>(&strip(scrutW)->node))
          flexible.insert(sv->name);
        auto scope = ctx.extendMany(decls);
        std::vector<DefEntry> defs = unify(ctx, flexible, scrutW, image);
        for (auto& de : defs) decls.push_back(de);
      } catch (const CheckError& e) {
        if (e.errorClass() != ErrorClass::UnificationFailure) throw;
        dead = true;  // branch is provably inaccessible
      }
      if (!dead) {
        auto scope = ctx.extendMany(decls);
        checkType(ctx, body, *expected);
      }
    }
    exhaustivityCheck(ctx, scrutTy, pats);
    return *expected;
  }

  // Inference mode: no refinement; every branch must infer the same type,
  // and no pattern variable may escape into it.
  if (c.matches.empty())
    ctx.fail(ErrorClass::TypeMismatch,
             {std::string("Cannot infer the type of an empty case")});
  TermPtr result;
  for (const auto& m : c.matches) {
    auto [pat, body] = unbindMatch(m);
    auto [decls, image] = declarePat(ctx, pat, Epsilon::Rel, scrutTyWhnf);
    (void)image;
    TermPtr bodyTy;
    {
      auto scope = ctx.extendMany(decls);
      bodyTy = inferType(ctx, body);
      std::set<Name> fv = freeVars(bodyTy);
      for (const Name& v : patternVars(pat)) {
        if (fv.count(v))
          ctx.fail(
              ErrorClass::EscapingVariable,
              {std::string("A pattern variable escapes into the result type"),
               bodyTy});
      }
    }
    if (!result)
      result = bodyTy;
    else
      equate(ctx, result, bodyTy);
  }
  exhaustivityCheck(ctx, scrutTy, pats);
  return result;
}

}  // namespace

TermPtr tcTerm(Context& ctx, const TermPtr& a, const TermPtr* expected) {
  if (const auto* p = std::get_if<Pos>(&a->node)) {
    auto guard = ctx.atPos(p->pos);
    return tcTerm(ctx, p->term, expected);
  }
  return std::visit(
      overloaded{
          [&](const TyType&) { return finish(ctx, tm::type(), expected); },
          [&](const Var& v) {
            const SigEntry& sig = ctx.lookupTy(v.name);
            checkStage(ctx, sig.eps, v.name);
            return finish(ctx, sig.type, expected);
          },
          [&](const Lam& l) -> TermPtr {
            if (!expected)
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string("Lambda expressions must be checked "
                                    "against a function type")});
            const auto* pi = std::get_if<Pi>(&(*expected)->node);
            if (!pi) mismatchLamType(ctx, *expected);
            if (l.eps != pi->eps)
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string("The lambda binds a ") +
                            epsilonStr(l.eps) +
                            " argument but the function type expects a " +
                            epsilonStr(pi->eps) + " one:",
                        *expected});
            auto [x, body] = unbind(l.bind);
            TermPtr bodyTy = instantiate(pi->bind, tm::var(x));
            auto scope = ctx.extend(SigEntry{x, pi->eps, pi->domain});
            checkType(ctx, body, bodyTy);
            return *expected;
          },
          [&](const App& app) {
            TermPtr fnTy = inferType(ctx, app.fun);
            PiParts pi = ensurePi(ctx, fnTy);
            if (app.arg.eps != pi.eps)
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string("The application provides a ") +
                            epsilonStr(app.arg.eps) +
                            " argument where the function expects a " +
                            epsilonStr(pi.eps) + " one:",
                        app.arg.term});
            {
              std::optional<Context::ResurrectGuard> g;
              if (pi.eps == Epsilon::Irr) g.emplace(ctx);
              checkType(ctx, app.arg.term, pi.domain);
            }
            return finish(ctx, instantiate(pi.bind, app.arg.term), expected);
          },
          [&](const Pi& pi) {
            checkIsType(ctx, pi.domain);
            auto [x, cod] = unbind(pi.bind);
            {
              auto scope = ctx.extend(SigEntry{x, Epsilon::Rel, pi.domain});
              checkIsType(ctx, cod);
            }
            return finish(ctx, tm::type(), expected);
          },
          [&](const Ann& ann) {
            checkIsType(ctx, ann.type);
            checkType(ctx, ann.term, ann.type);
            return finish(ctx, ann.type, expected);
          },
          [&](const Pos&) -> TermPtr { return nullptr; },  // handled above
          [&](const TrustMe&) -> TermPtr {
            if (!expected)
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string("TRUSTME must be checked against a known "
                                    "type")});
            ctx.warn("trusting TRUSTME where a proof of " +
                     prettyTerm(*expected) + " is required");
            return *expected;
          },
          [&](const TyUnit&) { return finish(ctx, tm::type(), expected); },
          [&](const LitUnit&) { return finish(ctx, tm::tyUnit(), expected); },
          [&](const TySigma& s) {
            checkIsType(ctx, s.first);
            auto [x, second] = unbind(s.bind);
            {
              auto scope = ctx.extend(SigEntry{x, Epsilon::Rel, s.first});
              checkIsType(ctx, second);
            }
            return finish(ctx, tm::type(), expected);
          },
          [&](const Prod& pr) -> TermPtr {
            if (!expected)
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string("Cannot infer the type of a pair; add an "
                                    "annotation")});
            const auto* sig = std::get_if<TySigma>(&(*expected)->node);
            if (!sig)
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string(
                            "Pairs must be checked against a sigma type, not"),
                        *expected});
            checkType(ctx, pr.first, sig->first);
            checkType(ctx, pr.second, instantiate(sig->bind, pr.first));
            return *expected;
          },
          [&](const LetPair& lp) -> TermPtr {
            if (!expected)
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string("let-pair expressions must be checked "
                                    "against a known type")});
            TermPtr scrutTy = inferType(ctx, lp.scrut);
            TermPtr n = whnf(ctx, scrutTy);
            const auto* sig = std::get_if<TySigma>(&n->node);
            if (!sig)
              ctx.fail(
                  ErrorClass::TypeMismatch,
                  {std::string(
                       "The scrutinee of let-pair must have a sigma type, not"),
                   n});
            auto [x, y, body] = unbind2(lp.bind);
            std::vector<Entry> es;
            es.push_back(SigEntry{x, Epsilon::Rel, sig->first});
            es.push_back(
                SigEntry{y, Epsilon::Rel, instantiate(sig->bind, tm::var(x))});
            if (const auto* sv = std::get_if<Var>(&strip(lp.scrut)->node))
              es.push_back(
                  DefEntry{sv->name, tm::prod(tm::var(x), tm::var(y))});
            auto scope = ctx.extendMany(std::move(es));
            checkType(ctx, body, *expected);
            return *expected;
          },
          [&](const Let& l) {
            TermPtr rhsTy = inferType(ctx, l.rhs);
            auto [x, body] = unbind(l.bind);
            auto scope = ctx.extendMany(
                {SigEntry{x, Epsilon::Rel, rhsTy}, DefEntry{x, l.rhs}});
            if (expected) {
              checkType(ctx, body, *expected);
              return *expected;
            }
            TermPtr bodyTy = inferType(ctx, body);
            // substitute the definition away so the bound name cannot escape
            return substTerm(x, l.rhs, bodyTy);
          },
          [&](const TyEq& e) {
            TermPtr tyA = inferType(ctx, e.lhs);
            TermPtr tyB = inferType(ctx, e.rhs);
            equate(ctx, tyA, tyB);
            return finish(ctx, tm::type(), expected);
          },
          [&](const Refl&) -> TermPtr {
            if (!expected)
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string("Refl must be checked against an equality "
                                    "type")});
            const auto* eq = std::get_if<TyEq>(&(*expected)->node);
            if (!eq)
              ctx.fail(ErrorClass::NotEqualityType,
                       {std::string(
                            "Refl must be checked against an equality type, "
                            "not"),
                        *expected});
            equate(ctx, eq->lhs, eq->rhs);
            return *expected;
          },
          [&](const Subst& s) -> TermPtr {
            if (!expected)
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string("subst must be checked against a known "
                                    "type")});
            TermPtr pfTy = inferType(ctx, s.proof);
            auto [lhs, rhs] = ensureTyEq(ctx, pfTy);
            TermPtr m = whnf(ctx, lhs);
            TermPtr n = whnf(ctx, rhs);
            std::vector<Entry> es;
            if (!aeq(m, n)) {
              if (const auto* xv = std::get_if<Var>(&m->node)) {
                es.push_back(DefEntry{xv->name, n});
              } else if (const auto* yv = std::get_if<Var>(&n->node)) {
                es.push_back(DefEntry{yv->name, m});
              } else {
                ctx.fail(
                    ErrorClass::TypeMismatch,
                    {std::string("subst requires one side of the equality to "
                                 "be a variable; name one with let:"),
                     m, std::string("="), n});
              }
            }
            if (const auto* pv = std::get_if<Var>(&strip(s.proof)->node))
              es.push_back(DefEntry{pv->name, tm::refl()});
            auto scope = ctx.extendMany(std::move(es));
            checkType(ctx, s.body, *expected);
            return *expected;
          },
          [&](const Contra& c) -> TermPtr {
            if (!expected)
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string("contra must be checked against a known "
                                    "type")});
            TermPtr pfTy = inferType(ctx, c.proof);
            auto [lhs, rhs] = ensureTyEq(ctx, pfTy);
            TermPtr m = whnf(ctx, lhs);
            TermPtr n = whnf(ctx, rhs);
            const auto* dm = std::get_if<DataCon>(&m->node);
            const auto* dn = std::get_if<DataCon>(&n->node);
            if (dm && dn && dm->name != dn->name) return *expected;
            ctx.fail(ErrorClass::NoContradiction,
                     {std::string("I can't tell that"), m, std::string("and"),
                      n, std::string("are contradictory")});
          },
          [&](const TyCon& t) {
            const DataEntry& data = ctx.lookupData(t.name);
            tcArgTele(ctx, t.params, data.params);
            return finish(ctx, tm::type(), expected);
          },
          [&](const DataCon& d) -> TermPtr {
            if (expected) {
              const auto* tc = std::get_if<TyCon>(&(*expected)->node);
              if (!tc)
                ctx.fail(ErrorClass::TypeMismatch,
                         {std::string("The constructor " + d.name +
                                      " must be checked against a datatype, "
                                      "not"),
                          *expected});
              auto hit = ctx.findCtorIn(tc->name, d.name);
              if (!hit)
                ctx.fail(ErrorClass::UnknownConstructor,
                         {std::string("The type " + tc->name +
                                      " has no constructor named " + d.name)});
              Telescope tele = substTele(ctx, hit->data->params, tc->params,
                                         hit->ctor->tele);
              tcArgTele(ctx, d.args, tele);
              return *expected;
            }
            auto hits = ctx.findCtor(d.name);
            if (hits.empty())
              ctx.fail(ErrorClass::UnknownConstructor,
                       {std::string("The constructor " + d.name +
                                    " is not in scope")});
            if (hits.size() > 1)
              ctx.fail(ErrorClass::AmbiguousConstructor,
                       {std::string("The constructor " + d.name +
                                    " belongs to several datatypes; checking "
                                    "mode is required to disambiguate")});
            const auto& hit = hits.front();
            if (!hit.data->params.entries.empty())
              ctx.fail(ErrorClass::TypeMismatch,
                       {std::string(
                           "Cannot infer the parameters of the datatype " +
                           hit.data->tycon + "; checking mode is required")});
            tcArgTele(ctx, d.args, hit.ctor->tele);
            return finish(ctx, tm::tyCon(hit.data->tycon), expected);
          },
          [&](const Case& c) { return tcCase(ctx, c, expected); },
      },
      a->node);
}

// ---------------------------------------------------------------------------
// Telescope well-formedness and modules

namespace {

void tcTypeTeleGo(Context& ctx, const std::vector<TeleEntry>& entries,
                  std::size_t i) {
  if (i >= entries.size()) return;
  if (const auto* s = std::get_if<TeleSig>(&entries[i])) {
    checkIsType(ctx, s->type);
    auto scope = ctx.extend(SigEntry{s->name, s->eps, s->type});
    tcTypeTeleGo(ctx, entries, i + 1);
  } else {
    const auto& d = std::get<TeleDef>(entries[i]);
    {
      auto g = ctx.resurrect();
      TermPtr ty = inferType(ctx, d.lhs);
      checkType(ctx, d.rhs, ty);
    }
    const Name* v = teleDefVar(d);
    std::optional<Context::Scope> scope;
    if (v) scope.emplace(ctx.extend(DefEntry{*v, d.rhs}));
    tcTypeTeleGo(ctx, entries, i + 1);
  }
}

}  // namespace

void tcTypeTele(Context& ctx, const Telescope& tele) {
  tcTypeTeleGo(ctx, tele.entries, 0);
}

void checkModule(Context& ctx, const ModuleAST& m) {
  for (const Decl& d : m.decls) {
    auto pg = ctx.atPos(d.pos);
    std::visit(
        overloaded{
            [&](const SigEntry& s) {
              if (ctx.findSig(s.name))
                ctx.fail(ErrorClass::TypeMismatch,
                         {std::string("Duplicate type signature for " +
                                      s.name.hint)});
              checkIsType(ctx, s.type);
              ctx.install(s);
            },
            [&](const DefEntry& def) {
              if (ctx.lookupDef(def.name))
                ctx.fail(ErrorClass::TypeMismatch,
                         {std::string("Multiple definitions of " +
                                      def.name.hint)});
              if (const SigEntry* sig = ctx.findSig(def.name)) {
                checkType(ctx, def.term, sig->type);
                ctx.install(def);
              } else {
                TermPtr ty = inferType(ctx, def.term);
                ctx.install(SigEntry{def.name, Epsilon::Rel, ty});
                ctx.install(def);
              }
            },
            [&](const DataEntry& data) {
              if (ctx.findData(data.tycon))
                ctx.fail(ErrorClass::TypeMismatch,
                         {std::string("The datatype " + data.tycon +
                                      " is already declared")});
              tcTypeTele(ctx, data.params);
              std::set<std::string> seen;
              for (const auto& c : data.ctors)
                if (!seen.insert(c.name).second)
                  ctx.fail(ErrorClass::TypeMismatch,
                           {std::string("The datatype " + data.tycon +
                                        " declares the constructor " + c.name +
                                        " twice")});
              // install first so constructors may mention the datatype
              ctx.install(data);
              for (const auto& c : data.ctors) {
                std::vector<Entry> params;
                for (const auto& e : data.params.entries) {
                  const auto& s = std::get<TeleSig>(e);
                  params.push_back(SigEntry{s.name, s.eps, s.type});
                }
                auto scope = ctx.extendMany(std::move(params));
                tcTypeTele(ctx, c.tele);
              }
            },
        },
        d.entry);
  }
}

}  // namespace picheck
