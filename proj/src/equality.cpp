#include "picheck/equality.hpp"

#include <algorithm>
#include <optional>

namespace picheck {

// ---------------------------------------------------------------------------
// Weak head normalization

MatchResult patternMatch(Context& ctx, const Pattern& pat, const TermPtr& t,
                         std::vector<std::pair<Name, TermPtr>>& binds,
                         Unfold unfold) {
  if (const auto* pv = std::get_if<PatVar>(&pat.node)) {
    binds.push_back({pv->name, t});
    return MatchResult::Matched;
  }
  const auto& pc = std::get<PatCon>(pat.node);
  const Term* s = strip(t);
  const auto* dc = std::get_if<DataCon>(&s->node);
  if (!dc) return MatchResult::Stuck;
  if (dc->name != pc.con || dc->args.size() != pc.args.size())
    return MatchResult::NoMatch;
  for (std::size_t i = 0; i < pc.args.size(); ++i) {
    TermPtr arg = dc->args[i].term;
    if (std::holds_alternative<PatCon>(pc.args[i].pat.node))
      arg = whnf(ctx, arg, unfold);
    MatchResult r = patternMatch(ctx, pc.args[i].pat, arg, binds, unfold);
    if (r != MatchResult::Matched) return r;
  }
  return MatchResult::Matched;
}

TermPtr whnf(Context& ctx, TermPtr t) { return whnf(ctx, std::move(t), Unfold::Yes); }

TermPtr whnf(Context& ctx, TermPtr t, Unfold unfold) {
  for (;;) {
    if (const auto* p = std::get_if<Pos>(&t->node)) {
      t = p->term;
      continue;
    }
    if (const auto* a = std::get_if<Ann>(&t->node)) {
      t = a->term;
      continue;
    }
    if (const auto* v = std::get_if<Var>(&t->node)) {
      if (unfold == Unfold::Yes && ctx.unfoldDefinitions) {
        if (auto def = ctx.lookupDef(v->name)) {
          ctx.tickStep();
          t = *def;
          continue;
        }
      }
      return t;
    }
    if (const auto* app = std::get_if<App>(&t->node)) {
      TermPtr f = whnf(ctx, app->fun, unfold);
      if (const auto* l = std::get_if<Lam>(&f->node)) {
        ctx.tickStep();
        t = instantiate(l->bind, app->arg.term);
        continue;
      }
      return f == app->fun ? t : tm::app(f, app->arg);
    }
    if (const auto* let = std::get_if<Let>(&t->node)) {
      ctx.tickStep();
      t = instantiate(let->bind, let->rhs);
      continue;
    }
    if (const auto* lp = std::get_if<LetPair>(&t->node)) {
      TermPtr s = whnf(ctx, lp->scrut, unfold);
      if (const auto* pr = std::get_if<Prod>(&s->node)) {
        ctx.tickStep();
        t = instantiate2(lp->bind, pr->first, pr->second);
        continue;
      }
      return s == lp->scrut ? t : tm::make(LetPair{s, lp->bind});
    }
    if (const auto* c = std::get_if<Case>(&t->node)) {
      TermPtr s = whnf(ctx, c->scrut, unfold);
      bool reduced = false;
      for (const Match& m : c->matches) {
        auto [pat, body] = unbindMatch(m);
        std::vector<std::pair<Name, TermPtr>> binds;
        MatchResult r = patternMatch(ctx, pat, s, binds, unfold);
        if (r == MatchResult::Matched) {
          ctx.tickStep();
          TermPtr res = body;
          for (const auto& [x, val] : binds) res = substTerm(x, val, res);
          t = res;
          reduced = true;
          break;
        }
        if (r == MatchResult::Stuck) break;
      }
      if (reduced) continue;
      return s == c->scrut ? t : tm::caseOf(s, c->matches);
    }
    if (const auto* sb = std::get_if<Subst>(&t->node)) {
      TermPtr p = whnf(ctx, sb->proof, unfold);
      if (std::holds_alternative<Refl>(p->node)) {
        ctx.tickStep();
        t = sb->body;
        continue;
      }
      return p == sb->proof ? t : tm::subst(sb->body, p);
    }
    return t;  // head form already exposed
  }
}

// ---------------------------------------------------------------------------
// equate

namespace {

struct Spine {
  Name head;
  std::vector<Arg> args;  // outermost last
};

std::optional<Spine> varSpine(const TermPtr& t) {
  std::vector<Arg> rev;
  const Term* cur = strip(t);
  while (const auto* app = std::get_if<App>(&cur->node)) {
    rev.push_back(app->arg);
    cur = strip(app->fun);
  }
  if (const auto* v = std::get_if<Var>(&cur->node)) {
    std::reverse(rev.begin(), rev.end());
    return Spine{v->name, std::move(rev)};
  }
  return std::nullopt;
}

void equateWhnf(Context& ctx, const TermPtr& a, const TermPtr& b);

void equateArgs(Context& ctx, const std::vector<Arg>& as,
                const std::vector<Arg>& bs, const TermPtr& a,
                const TermPtr& b) {
  if (as.size() != bs.size())
    ctx.fail(ErrorClass::TypeMismatch,
             {std::string("Types don't match:"), a, std::string("and"), b});
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (as[i].eps != bs[i].eps)
      ctx.fail(ErrorClass::TypeMismatch,
               {std::string("Types don't match:"), a, std::string("and"), b});
    if (as[i].eps == Epsilon::Rel) equate(ctx, as[i].term, bs[i].term);
    // irrelevant arguments are ignored
  }
}

void equateSpine(Context& ctx, const Spine& s1, const Spine& s2,
                 const TermPtr& a, const TermPtr& b) {
  equateArgs(ctx, s1.args, s2.args, a, b);
}

void equateWhnf(Context& ctx, const TermPtr& a, const TermPtr& b) {
  if (aeq(a, b)) return;
  auto mismatch = [&]() -> void {
    ctx.fail(ErrorClass::TypeMismatch,
             {std::string("Types don't match:"), a, std::string("and"), b});
  };
  if (a->node.index() != b->node.index()) {
    mismatch();
    return;
  }
  std::visit(
      overloaded{
          [&](const TyType&) { mismatch(); },
          [&](const Var& va) {
            if (!(va.name == std::get<Var>(b->node).name)) mismatch();
          },
          [&](const Lam& la) {
            const auto& lb = std::get<Lam>(b->node);
            if (la.eps != lb.eps) mismatch();
            auto [x, b1, b2] = unbind2(la.bind, lb.bind);
            equate(ctx, b1, b2);
          },
          [&](const App&) {
            auto s1 = varSpine(a);
            auto s2 = varSpine(b);
            if (s1 && s2) {
              if (!(s1->head == s2->head)) mismatch();
              equateSpine(ctx, *s1, *s2, a, b);
              return;
            }
            // non-variable stuck applications: compare structurally
            const auto& aa = std::get<App>(a->node);
            const auto& ab = std::get<App>(b->node);
            if (aa.arg.eps != ab.arg.eps) mismatch();
            equate(ctx, aa.fun, ab.fun);
            if (aa.arg.eps == Epsilon::Rel)
              equate(ctx, aa.arg.term, ab.arg.term);
          },
          [&](const Pi& pa) {
            const auto& pb = std::get<Pi>(b->node);
            if (pa.eps != pb.eps) mismatch();
            equate(ctx, pa.domain, pb.domain);
            auto [x, c1, c2] = unbind2(pa.bind, pb.bind);
            equate(ctx, c1, c2);
          },
          [&](const Ann&) { mismatch(); },  // unreachable after whnf
          [&](const Pos&) { mismatch(); },  // unreachable after whnf
          [&](const TrustMe&) {},
          [&](const TyUnit&) {},
          [&](const LitUnit&) {},
          [&](const TySigma& sa) {
            const auto& sb = std::get<TySigma>(b->node);
            equate(ctx, sa.first, sb.first);
            auto [x, c1, c2] = unbind2(sa.bind, sb.bind);
            equate(ctx, c1, c2);
          },
          [&](const Prod& pa) {
            const auto& pb = std::get<Prod>(b->node);
            equate(ctx, pa.first, pb.first);
            equate(ctx, pa.second, pb.second);
          },
          [&](const LetPair& la) {
            const auto& lb = std::get<LetPair>(b->node);
            equate(ctx, la.scrut, lb.scrut);
            Name x = freshName(la.bind.bound1);
            Name y = freshName(la.bind.bound2);
            TermPtr b1 = substTerm(la.bind.bound1, tm::var(x), la.bind.body);
            b1 = substTerm(la.bind.bound2, tm::var(y), b1);
            TermPtr b2 = substTerm(lb.bind.bound1, tm::var(x), lb.bind.body);
            b2 = substTerm(lb.bind.bound2, tm::var(y), b2);
            equate(ctx, b1, b2);
          },
          [&](const Let&) { mismatch(); },  // unreachable after whnf
          [&](const TyEq& ea) {
            const auto& eb = std::get<TyEq>(b->node);
            equate(ctx, ea.lhs, eb.lhs);
            equate(ctx, ea.rhs, eb.rhs);
          },
          [&](const Refl&) {},
          [&](const Subst& sa) {
            const auto& sb = std::get<Subst>(b->node);
            equate(ctx, sa.body, sb.body);
            equate(ctx, sa.proof, sb.proof);
          },
          [&](const Contra& ca) {
            equate(ctx, ca.proof, std::get<Contra>(b->node).proof);
          },
          [&](const TyCon& ta) {
            const auto& tb = std::get<TyCon>(b->node);
            if (ta.name != tb.name) mismatch();
            equateArgs(ctx, ta.params, tb.params, a, b);
          },
          [&](const DataCon& da) {
            const auto& db = std::get<DataCon>(b->node);
            if (da.name != db.name) mismatch();
            equateArgs(ctx, da.args, db.args, a, b);
          },
          [&](const Case& ca) {
            const auto& cb = std::get<Case>(b->node);
            equate(ctx, ca.scrut, cb.scrut);
            if (ca.matches.size() != cb.matches.size()) mismatch();
            for (std::size_t i = 0; i < ca.matches.size(); ++i) {
              auto opened = unbindMatch2(ca.matches[i], cb.matches[i]);
              if (!opened) mismatch();
              equate(ctx, std::get<1>(*opened), std::get<2>(*opened));
            }
          },
      },
      a->node);
}

}  // namespace

void equate(Context& ctx, const TermPtr& t1, const TermPtr& t2) {
  if (aeq(t1, t2)) return;
  TermPtr n1 = whnf(ctx, t1, Unfold::No);
  TermPtr n2 = whnf(ctx, t2, Unfold::No);
  // When both sides are applications of the same defined head, try the
  // arguments first and unfold the definition only if that fails.
  auto s1 = varSpine(n1);
  auto s2 = varSpine(n2);
  if (s1 && s2 && s1->head == s2->head &&
      s1->args.size() == s2->args.size() && !s1->args.empty()) {
    bool defined =
        ctx.unfoldDefinitions && ctx.lookupDef(s1->head).has_value();
    if (!defined) {
      equateSpine(ctx, *s1, *s2, n1, n2);
      return;
    }
    try {
      equateSpine(ctx, *s1, *s2, n1, n2);
      return;
    } catch (const CheckError& e) {
      if (e.errorClass() == ErrorClass::StepLimit) throw;
      // fall through and unfold the definition
    }
  }
  TermPtr m1 = whnf(ctx, n1, Unfold::Yes);
  TermPtr m2 = whnf(ctx, n2, Unfold::Yes);
  equateWhnf(ctx, m1, m2);
}

// ---------------------------------------------------------------------------
// Head-form coercions

PiParts ensurePi(Context& ctx, const TermPtr& ty) {
  TermPtr n = whnf(ctx, ty);
  if (const auto* p = std::get_if<Pi>(&n->node))
    return PiParts{p->eps, p->domain, p->bind};
  ctx.fail(ErrorClass::NotAFunction,
           {std::string("Expected a function type, but found"), n});
}

TConParts ensureTCon(Context& ctx, const TermPtr& ty) {
  TermPtr n = whnf(ctx, ty);
  if (const auto* t = std::get_if<TyCon>(&n->node))
    return TConParts{t->name, t->params};
  ctx.fail(ErrorClass::NotATyCon,
           {std::string("Expected a type constructor application, but found"),
            n});
}

std::pair<TermPtr, TermPtr> ensureTyEq(Context& ctx, const TermPtr& ty) {
  TermPtr n = whnf(ctx, ty);
  if (const auto* e = std::get_if<TyEq>(&n->node)) return {e->lhs, e->rhs};
  ctx.fail(ErrorClass::NotEqualityType,
           {std::string("Expected an equality type, but found"), n});
}

// ---------------------------------------------------------------------------
// unify

namespace {

bool ambiguous(const Term* t) {
  return std::holds_alternative<App>(t->node) ||
         std::holds_alternative<Case>(t->node) ||
         std::holds_alternative<LetPair>(t->node) ||
         std::holds_alternative<Subst>(t->node) ||
         std::holds_alternative<Contra>(t->node) ||
         std::holds_alternative<Var>(t->node) ||
         std::holds_alternative<TrustMe>(t->node);
}

class Unifier {
 public:
  Unifier(Context& ctx, const NameSet& flexible)
      : ctx_(ctx), flexible_(flexible) {}

  UnifyOutcome run(const TermPtr& a, const TermPtr& b) {
    go(a, b);
    return UnifyOutcome{std::move(out_), complete_};
  }

 private:
  void go(const TermPtr& ta, const TermPtr& tb) {
    TermPtr a = whnf(ctx_, ta);
    TermPtr b = whnf(ctx_, tb);
    if (aeq(a, b)) return;
    const auto* va = std::get_if<Var>(&a->node);
    const auto* vb = std::get_if<Var>(&b->node);
    if (va && definable(va->name)) {
      defineVar(va->name, b);
      return;
    }
    if (vb && definable(vb->name)) {
      defineVar(vb->name, a);
      return;
    }
    if (a->node.index() == b->node.index()) {
      if (const auto* pa = std::get_if<Prod>(&a->node)) {
        const auto& pb = std::get<Prod>(b->node);
        go(pa->first, pb.first);
        go(pa->second, pb.second);
        return;
      }
      if (const auto* ea = std::get_if<TyEq>(&a->node)) {
        const auto& eb = std::get<TyEq>(b->node);
        go(ea->lhs, eb.lhs);
        go(ea->rhs, eb.rhs);
        return;
      }
      if (const auto* ca = std::get_if<TyCon>(&a->node)) {
        const auto& cb = std::get<TyCon>(b->node);
        if (ca->name != cb.name) clash(a, b);
        goArgs(ca->params, cb.params, a, b);
        return;
      }
      if (const auto* da = std::get_if<DataCon>(&a->node)) {
        const auto& db = std::get<DataCon>(b->node);
        if (da->name != db.name) clash(a, b);
        goArgs(da->args, db.args, a, b);
        return;
      }
      if (const auto* la = std::get_if<Lam>(&a->node)) {
        const auto& lb = std::get<Lam>(b->node);
        if (la->eps != lb.eps) clash(a, b);
        auto [x, b1, b2] = unbind2(la->bind, lb.bind);
        bound_.insert(x);
        go(b1, b2);
        bound_.erase(x);
        return;
      }
      if (const auto* pa = std::get_if<Pi>(&a->node)) {
        const auto& pb = std::get<Pi>(b->node);
        if (pa->eps != pb.eps) clash(a, b);
        go(pa->domain, pb.domain);
        auto [x, c1, c2] = unbind2(pa->bind, pb.bind);
        bound_.insert(x);
        go(c1, c2);
        bound_.erase(x);
        return;
      }
      if (const auto* sa = std::get_if<TySigma>(&a->node)) {
        const auto& sb = std::get<TySigma>(b->node);
        go(sa->first, sb.first);
        auto [x, c1, c2] = unbind2(sa->bind, sb.bind);
        bound_.insert(x);
        go(c1, c2);
        bound_.erase(x);
        return;
      }
    }
    if (ambiguous(a.get()) || ambiguous(b.get())) {
      complete_ = false;
      return;
    }
    clash(a, b);
  }

  void goArgs(const std::vector<Arg>& as, const std::vector<Arg>& bs,
              const TermPtr& a, const TermPtr& b) {
    if (as.size() != bs.size()) clash(a, b);
    for (std::size_t i = 0; i < as.size(); ++i) go(as[i].term, bs[i].term);
  }

  bool definable(const Name& x) const {
    return flexible_.count(x) > 0 && bound_.count(x) == 0;
  }

  void defineVar(const Name& x, const TermPtr& rhs) {
    if (freeVars(rhs).count(x))
      ctx_.fail(ErrorClass::UnificationFailure,
                {std::string("Occurs check: cannot define " + x.hint +
                             " in terms of itself"),
                 rhs});
    out_.push_back(DefEntry{x, rhs});
  }

  [[noreturn]] void clash(const TermPtr& a, const TermPtr& b) {
    ctx_.fail(ErrorClass::UnificationFailure,
              {std::string("Cannot unify"), a, std::string("with"), b});
  }

  Context& ctx_;
  NameSet flexible_;
  NameSet bound_;
  std::vector<DefEntry> out_;
  bool complete_ = true;
};

}  // namespace

UnifyOutcome unifyFull(Context& ctx, const NameSet& flexible, const TermPtr& a,
                       const TermPtr& b) {
  return Unifier(ctx, flexible).run(a, b);
}

std::vector<DefEntry> unify(Context& ctx, const NameSet& flexible,
                            const TermPtr& a, const TermPtr& b) {
  return unifyFull(ctx, flexible, a, b).defs;
}

}  // namespace picheck
