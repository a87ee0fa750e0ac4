#include "picheck/syntax.hpp"

#include <algorithm>
#include <stdexcept>

namespace picheck {

std::string SourcePos::str() const {
  if (!known()) return file.empty() ? "<unknown>" : file;
  return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

NameSupply& globalNames() {
  static NameSupply supply;
  return supply;
}

Name freshName(const Name& hint) { return globalNames().fresh(hint); }

namespace tm {

TermPtr make(TermNode node) {
  return std::make_shared<const Term>(Term{std::move(node)});
}

TermPtr arrow(TermPtr dom, TermPtr cod) {
  return pi(Epsilon::Rel, std::move(dom), freshName(Name{"_"}), std::move(cod));
}

TermPtr nat(std::uint64_t n) {
  TermPtr t = dataCon("Zero");
  for (std::uint64_t i = 0; i < n; ++i)
    t = dataCon("Succ", {Arg{Epsilon::Rel, t}});
  return t;
}

}  // namespace tm

std::size_t Telescope::sigCount() const {
  std::size_t n = 0;
  for (const auto& e : entries)
    if (std::holds_alternative<TeleSig>(e)) ++n;
  return n;
}

const Name* teleDefVar(const TeleDef& d) {
  const Term* l = strip(d.lhs);
  if (const auto* v = std::get_if<Var>(&l->node)) return &v->name;
  return nullptr;
}

const Term* strip(const TermPtr& t) {
  const Term* cur = t.get();
  for (;;) {
    if (const auto* p = std::get_if<Pos>(&cur->node)) {
      cur = p->term.get();
    } else if (const auto* a = std::get_if<Ann>(&cur->node)) {
      cur = a->term.get();
    } else {
      return cur;
    }
  }
}

TermPtr stripPtr(TermPtr t) {
  for (;;) {
    if (const auto* p = std::get_if<Pos>(&t->node)) {
      t = p->term;
    } else if (const auto* a = std::get_if<Ann>(&t->node)) {
      t = a->term;
    } else {
      return t;
    }
  }
}

// ---------------------------------------------------------------------------
// deepStrip

namespace {

Pattern copyPattern(const Pattern& p);  // fwd

TermPtr deepStripGo(const TermPtr& t) {
  return std::visit(
      overloaded{
          [&](const Pos& n) { return deepStripGo(n.term); },
          [&](const Ann& n) { return deepStripGo(n.term); },
          [&](const TyType&) { return tm::type(); },
          [&](const Var& n) { return tm::var(n.name); },
          [&](const Lam& n) {
            return tm::lam(n.eps, n.bind.bound, deepStripGo(n.bind.body));
          },
          [&](const App& n) {
            return tm::app(deepStripGo(n.fun),
                           Arg{n.arg.eps, deepStripGo(n.arg.term)});
          },
          [&](const Pi& n) {
            return tm::pi(n.eps, deepStripGo(n.domain), n.bind.bound,
                          deepStripGo(n.bind.body));
          },
          [&](const TrustMe&) { return tm::trustme(); },
          [&](const TyUnit&) { return tm::tyUnit(); },
          [&](const LitUnit&) { return tm::litUnit(); },
          [&](const TySigma& n) {
            return tm::sigma(deepStripGo(n.first), n.bind.bound,
                             deepStripGo(n.bind.body));
          },
          [&](const Prod& n) {
            return tm::prod(deepStripGo(n.first), deepStripGo(n.second));
          },
          [&](const LetPair& n) {
            return tm::letPair(deepStripGo(n.scrut), n.bind.bound1,
                               n.bind.bound2, deepStripGo(n.bind.body));
          },
          [&](const Let& n) {
            return tm::let_(deepStripGo(n.rhs), n.bind.bound,
                            deepStripGo(n.bind.body));
          },
          [&](const TyEq& n) {
            return tm::tyEq(deepStripGo(n.lhs), deepStripGo(n.rhs));
          },
          [&](const Refl&) { return tm::refl(); },
          [&](const Subst& n) {
            return tm::subst(deepStripGo(n.body), deepStripGo(n.proof));
          },
          [&](const Contra& n) { return tm::contra(deepStripGo(n.proof)); },
          [&](const TyCon& n) {
            std::vector<Arg> params;
            params.reserve(n.params.size());
            for (const auto& a : n.params)
              params.push_back(Arg{a.eps, deepStripGo(a.term)});
            return tm::tyCon(n.name, std::move(params));
          },
          [&](const DataCon& n) {
            std::vector<Arg> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args)
              args.push_back(Arg{a.eps, deepStripGo(a.term)});
            return tm::dataCon(n.name, std::move(args));
          },
          [&](const Case& n) {
            std::vector<Match> ms;
            ms.reserve(n.matches.size());
            for (const auto& m : n.matches)
              ms.push_back(Match{copyPattern(m.pat), deepStripGo(m.body)});
            return tm::caseOf(deepStripGo(n.scrut), std::move(ms));
          },
      },
      t->node);
}

Pattern copyPattern(const Pattern& p) {
  return std::visit(
      overloaded{
          [](const PatVar& v) { return Pattern{PatVar{v.name}}; },
          [](const PatCon& c) {
            std::vector<PatArg> args;
            args.reserve(c.args.size());
            for (const auto& a : c.args)
              args.push_back(PatArg{copyPattern(a.pat), a.eps});
            return Pattern{PatCon{c.con, std::move(args)}};
          },
      },
      p.node);
}

}  // namespace

TermPtr deepStrip(const TermPtr& t) { return deepStripGo(t); }

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

class AlphaEq {
 public:
  bool term(const TermPtr& ta, const TermPtr& tb) {
    const Term* a = strip(ta);
    const Term* b = strip(tb);
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [&](const TyType&) { return true; },
            [&](const Var& va) {
              return varEq(va.name, std::get<Var>(b->node).name);
            },
            [&](const Lam& la) {
              const auto& lb = std::get<Lam>(b->node);
              return la.eps == lb.eps && binder(la.bind, lb.bind);
            },
            [&](const App& aa) {
              const auto& ab = std::get<App>(b->node);
              return aa.arg.eps == ab.arg.eps && term(aa.fun, ab.fun) &&
                     term(aa.arg.term, ab.arg.term);
            },
            [&](const Pi& pa) {
              const auto& pb = std::get<Pi>(b->node);
              return pa.eps == pb.eps && term(pa.domain, pb.domain) &&
                     binder(pa.bind, pb.bind);
            },
            [&](const Ann&) { return false; },  // unreachable: stripped
            [&](const Pos&) { return false; },  // unreachable: stripped
            [&](const TrustMe&) { return true; },
            [&](const TyUnit&) { return true; },
            [&](const LitUnit&) { return true; },
            [&](const TySigma& sa) {
              const auto& sb = std::get<TySigma>(b->node);
              return term(sa.first, sb.first) && binder(sa.bind, sb.bind);
            },
            [&](const Prod& pa) {
              const auto& pb = std::get<Prod>(b->node);
              return term(pa.first, pb.first) && term(pa.second, pb.second);
            },
            [&](const LetPair& la) {
              const auto& lb = std::get<LetPair>(b->node);
              if (!term(la.scrut, lb.scrut)) return false;
              env_.push_back({la.bind.bound1, lb.bind.bound1});
              env_.push_back({la.bind.bound2, lb.bind.bound2});
              bool ok = term(la.bind.body, lb.bind.body);
              env_.pop_back();
              env_.pop_back();
              return ok;
            },
            [&](const Let& la) {
              const auto& lb = std::get<Let>(b->node);
              return term(la.rhs, lb.rhs) && binder(la.bind, lb.bind);
            },
            [&](const TyEq& ea) {
              const auto& eb = std::get<TyEq>(b->node);
              return term(ea.lhs, eb.lhs) && term(ea.rhs, eb.rhs);
            },
            [&](const Refl&) { return true; },
            [&](const Subst& sa) {
              const auto& sb = std::get<Subst>(b->node);
              return term(sa.body, sb.body) && term(sa.proof, sb.proof);
            },
            [&](const Contra& ca) {
              return term(ca.proof, std::get<Contra>(b->node).proof);
            },
            [&](const TyCon& ta2) {
              const auto& tb2 = std::get<TyCon>(b->node);
              return ta2.name == tb2.name && args(ta2.params, tb2.params);
            },
            [&](const DataCon& da) {
              const auto& db = std::get<DataCon>(b->node);
              return da.name == db.name && args(da.args, db.args);
            },
            [&](const Case& ca) {
              const auto& cb = std::get<Case>(b->node);
              if (!term(ca.scrut, cb.scrut)) return false;
              if (ca.matches.size() != cb.matches.size()) return false;
              for (std::size_t i = 0; i < ca.matches.size(); ++i)
                if (!match(ca.matches[i], cb.matches[i])) return false;
              return true;
            },
        },
        a->node);
  }

 private:
  bool varEq(const Name& l, const Name& r) {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      bool hitL = it->first == l;
      bool hitR = it->second == r;
      if (hitL || hitR) return hitL && hitR;
    }
    return l == r;
  }

  bool binder(const Binder& a, const Binder& b) {
    env_.push_back({a.bound, b.bound});
    bool ok = term(a.body, b.body);
    env_.pop_back();
    return ok;
  }

  // Requires identical pattern shape; pushes bound pairs in pattern order.
  bool patternShape(const Pattern& a, const Pattern& b, std::size_t& pushed) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* va = std::get_if<PatVar>(&a.node)) {
      env_.push_back({va->name, std::get<PatVar>(b.node).name});
      ++pushed;
      return true;
    }
    const auto& ca = std::get<PatCon>(a.node);
    const auto& cb = std::get<PatCon>(b.node);
    if (ca.con != cb.con || ca.args.size() != cb.args.size()) return false;
    for (std::size_t i = 0; i < ca.args.size(); ++i) {
      if (ca.args[i].eps != cb.args[i].eps) return false;
      if (!patternShape(ca.args[i].pat, cb.args[i].pat, pushed)) return false;
    }
    return true;
  }

  bool match(const Match& a, const Match& b) {
    std::size_t pushed = 0;
    bool shapeOk = patternShape(a.pat, b.pat, pushed);
    bool ok = shapeOk && term(a.body, b.body);
    for (std::size_t i = 0; i < pushed; ++i) env_.pop_back();
    return ok;
  }

  bool args(const std::vector<Arg>& a, const std::vector<Arg>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].eps != b[i].eps) return false;
      if (!term(a[i].term, b[i].term)) return false;
    }
    return true;
  }

  std::vector<std::pair<Name, Name>> env_;
};

}  // namespace

bool aeq(const TermPtr& a, const TermPtr& b) { return AlphaEq{}.term(a, b); }

namespace {

// Telescopes bind positionally, like iterated binders.
bool aeqTeleGo(const Telescope& a, const Telescope& b,
               std::vector<std::pair<Name, Name>>& env) {
  if (a.entries.size() != b.entries.size()) return false;
  auto withEnv = [&](const TermPtr& x, const TermPtr& y) {
    // Rename b-side names into a-side names, then compare.
    TermPtr y2 = y;
    for (const auto& [l, r] : env)
      if (!(l == r)) y2 = substTerm(r, tm::var(l), y2);
    return aeq(x, y2);
  };
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const auto& ea = a.entries[i];
    const auto& eb = b.entries[i];
    if (ea.index() != eb.index()) return false;
    if (const auto* sa = std::get_if<TeleSig>(&ea)) {
      const auto& sb = std::get<TeleSig>(eb);
      if (sa->eps != sb.eps) return false;
      if (!withEnv(sa->type, sb.type)) return false;
      env.push_back({sa->name, sb.name});
    } else {
      const auto& da = std::get<TeleDef>(ea);
      const auto& db = std::get<TeleDef>(eb);
      if (!withEnv(da.lhs, db.lhs)) return false;
      if (!withEnv(da.rhs, db.rhs)) return false;
    }
  }
  return true;
}

}  // namespace

bool aeqTelescope(const Telescope& a, const Telescope& b) {
  std::vector<std::pair<Name, Name>> env;
  return aeqTeleGo(a, b, env);
}

bool aeqEntry(const Entry& a, const Entry& b) {
  if (a.index() != b.index()) return false;
  if (const auto* sa = std::get_if<SigEntry>(&a)) {
    const auto& sb = std::get<SigEntry>(b);
    return sa->name == sb.name && sa->eps == sb.eps && aeq(sa->type, sb.type);
  }
  if (const auto* da = std::get_if<DefEntry>(&a)) {
    const auto& db = std::get<DefEntry>(b);
    return da->name == db.name && aeq(da->term, db.term);
  }
  const auto& xa = std::get<DataEntry>(a);
  const auto& xb = std::get<DataEntry>(b);
  if (xa.tycon != xb.tycon || xa.ctors.size() != xb.ctors.size()) return false;
  if (!aeqTelescope(xa.params, xb.params)) return false;
  for (std::size_t i = 0; i < xa.ctors.size(); ++i) {
    if (xa.ctors[i].name != xb.ctors[i].name) return false;
    // Constructor telescopes scope over the parameter telescope; compare
    // them as one combined telescope.
    Telescope ta = xa.params, tb = xb.params;
    ta.entries.insert(ta.entries.end(), xa.ctors[i].tele.entries.begin(),
                      xa.ctors[i].tele.entries.end());
    tb.entries.insert(tb.entries.end(), xb.ctors[i].tele.entries.begin(),
                      xb.ctors[i].tele.entries.end());
    if (!aeqTelescope(ta, tb)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void fvGo(const TermPtr& t, std::vector<Name>& bound, std::set<Name>& out) {
  std::visit(
      overloaded{
          [&](const TyType&) {},
          [&](const Var& v) {
            if (std::find(bound.begin(), bound.end(), v.name) == bound.end())
              out.insert(v.name);
          },
          [&](const Lam& n) {
            bound.push_back(n.bind.bound);
            fvGo(n.bind.body, bound, out);
            bound.pop_back();
          },
          [&](const App& n) {
            fvGo(n.fun, bound, out);
            fvGo(n.arg.term, bound, out);
          },
          [&](const Pi& n) {
            fvGo(n.domain, bound, out);
            bound.push_back(n.bind.bound);
            fvGo(n.bind.body, bound, out);
            bound.pop_back();
          },
          [&](const Ann& n) {
            fvGo(n.term, bound, out);
            fvGo(n.type, bound, out);
          },
          [&](const Pos& n) { fvGo(n.term, bound, out); },
          [&](const TrustMe&) {},
          [&](const TyUnit&) {},
          [&](const LitUnit&) {},
          [&](const TySigma& n) {
            fvGo(n.first, bound, out);
            bound.push_back(n.bind.bound);
            fvGo(n.bind.body, bound, out);
            bound.pop_back();
          },
          [&](const Prod& n) {
            fvGo(n.first, bound, out);
            fvGo(n.second, bound, out);
          },
          [&](const LetPair& n) {
            fvGo(n.scrut, bound, out);
            bound.push_back(n.bind.bound1);
            bound.push_back(n.bind.bound2);
            fvGo(n.bind.body, bound, out);
            bound.pop_back();
            bound.pop_back();
          },
          [&](const Let& n) {
            fvGo(n.rhs, bound, out);
            bound.push_back(n.bind.bound);
            fvGo(n.bind.body, bound, out);
            bound.pop_back();
          },
          [&](const TyEq& n) {
            fvGo(n.lhs, bound, out);
            fvGo(n.rhs, bound, out);
          },
          [&](const Refl&) {},
          [&](const Subst& n) {
            fvGo(n.body, bound, out);
            fvGo(n.proof, bound, out);
          },
          [&](const Contra& n) { fvGo(n.proof, bound, out); },
          [&](const TyCon& n) {
            for (const auto& a : n.params) fvGo(a.term, bound, out);
          },
          [&](const DataCon& n) {
            for (const auto& a : n.args) fvGo(a.term, bound, out);
          },
          [&](const Case& n) {
            fvGo(n.scrut, bound, out);
            for (const auto& m : n.matches) {
              auto vars = patternVars(m.pat);
              for (const auto& v : vars) bound.push_back(v);
              fvGo(m.body, bound, out);
              for (std::size_t i = 0; i < vars.size(); ++i) bound.pop_back();
            }
          },
      },
      t->node);
}

}  // namespace

std::set<Name> freeVars(const TermPtr& t) {
  std::set<Name> out;
  std::vector<Name> bound;
  fvGo(t, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Patterns

namespace {

void patVarsGo(const Pattern& p, std::vector<Name>& out) {
  std::visit(overloaded{
                 [&](const PatVar& v) { out.push_back(v.name); },
                 [&](const PatCon& c) {
                   for (const auto& a : c.args) patVarsGo(a.pat, out);
                 },
             },
             p.node);
}

Pattern renamePattern(const Pattern& p, const Name& from, const Name& to) {
  return std::visit(
      overloaded{
          [&](const PatVar& v) {
            return Pattern{PatVar{v.name == from ? to : v.name}};
          },
          [&](const PatCon& c) {
            std::vector<PatArg> args;
            args.reserve(c.args.size());
            for (const auto& a : c.args)
              args.push_back(PatArg{renamePattern(a.pat, from, to), a.eps});
            return Pattern{PatCon{c.con, std::move(args)}};
          },
      },
      p.node);
}

}  // namespace

std::vector<Name> patternVars(const Pattern& p) {
  std::vector<Name> out;
  patVarsGo(p, out);
  return out;
}

TermPtr patternToTerm(const Pattern& p) {
  return std::visit(
      overloaded{
          [&](const PatVar& v) { return tm::var(v.name); },
          [&](const PatCon& c) {
            std::vector<Arg> args;
            args.reserve(c.args.size());
            for (const auto& a : c.args)
              args.push_back(Arg{a.eps, patternToTerm(a.pat)});
            return tm::dataCon(c.con, std::move(args));
          },
      },
      p.node);
}

std::pair<Pattern, TermPtr> unbindMatch(const Match& m) {
  Pattern pat = copyPattern(m.pat);
  TermPtr body = m.body;
  for (const Name& v : patternVars(m.pat)) {
    Name v2 = freshName(v);
    pat = renamePattern(pat, v, v2);
    body = substTerm(v, tm::var(v2), body);
  }
  return {std::move(pat), std::move(body)};
}

namespace {

// Renames both patterns position-by-position with shared fresh names.
bool unbindPattern2(const Pattern& p1, const Pattern& p2, Pattern& out,
                    std::vector<std::pair<Name, Name>>& renames1,
                    std::vector<std::pair<Name, Name>>& renames2) {
  if (p1.node.index() != p2.node.index()) return false;
  if (const auto* v1 = std::get_if<PatVar>(&p1.node)) {
    const auto& v2 = std::get<PatVar>(p2.node);
    Name shared = freshName(v1->name);
    renames1.push_back({v1->name, shared});
    renames2.push_back({v2.name, shared});
    out = Pattern{PatVar{shared}};
    return true;
  }
  const auto& c1 = std::get<PatCon>(p1.node);
  const auto& c2 = std::get<PatCon>(p2.node);
  if (c1.con != c2.con || c1.args.size() != c2.args.size()) return false;
  std::vector<PatArg> args;
  args.reserve(c1.args.size());
  for (std::size_t i = 0; i < c1.args.size(); ++i) {
    if (c1.args[i].eps != c2.args[i].eps) return false;
    Pattern sub;
    if (!unbindPattern2(c1.args[i].pat, c2.args[i].pat, sub, renames1,
                        renames2))
      return false;
    args.push_back(PatArg{std::move(sub), c1.args[i].eps});
  }
  out = Pattern{PatCon{c1.con, std::move(args)}};
  return true;
}

}  // namespace

std::optional<std::tuple<Pattern, TermPtr, TermPtr>> unbindMatch2(
    const Match& m1, const Match& m2) {
  Pattern shared{PatVar{Name{}}};
  std::vector<std::pair<Name, Name>> r1, r2;
  if (!unbindPattern2(m1.pat, m2.pat, shared, r1, r2)) return std::nullopt;
  TermPtr b1 = m1.body;
  for (const auto& [from, to] : r1) b1 = substTerm(from, tm::var(to), b1);
  TermPtr b2 = m2.body;
  for (const auto& [from, to] : r2) b2 = substTerm(from, tm::var(to), b2);
  return std::tuple{std::move(shared), std::move(b1), std::move(b2)};
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

class Subster {
 public:
  Subster(const Name& x, const TermPtr& a)
      : x_(x), a_(a), fvA_(freeVars(a)) {}

  TermPtr term(const TermPtr& t) {
    return std::visit(
        overloaded{
            [&](const TyType&) { return t; },
            [&](const Var& v) { return v.name == x_ ? a_ : t; },
            [&](const Lam& n) -> TermPtr {
              auto b = binder(n.bind);
              return b ? tm::make(Lam{n.eps, *std::move(b)}) : t;
            },
            [&](const App& n) {
              return tm::app(term(n.fun), Arg{n.arg.eps, term(n.arg.term)});
            },
            [&](const Pi& n) -> TermPtr {
              TermPtr dom = term(n.domain);
              auto b = binder(n.bind);
              return tm::make(Pi{n.eps, std::move(dom),
                                 b ? *std::move(b) : n.bind});
            },
            [&](const Ann& n) { return tm::ann(term(n.term), term(n.type)); },
            [&](const Pos& n) { return tm::pos(n.pos, term(n.term)); },
            [&](const TrustMe&) { return t; },
            [&](const TyUnit&) { return t; },
            [&](const LitUnit&) { return t; },
            [&](const TySigma& n) -> TermPtr {
              TermPtr first = term(n.first);
              auto b = binder(n.bind);
              return tm::make(
                  TySigma{std::move(first), b ? *std::move(b) : n.bind});
            },
            [&](const Prod& n) {
              return tm::prod(term(n.first), term(n.second));
            },
            [&](const LetPair& n) -> TermPtr {
              TermPtr scrut = term(n.scrut);
              Binder2 b = binder2(n.bind);
              return tm::make(LetPair{std::move(scrut), std::move(b)});
            },
            [&](const Let& n) -> TermPtr {
              TermPtr rhs = term(n.rhs);
              auto b = binder(n.bind);
              return tm::make(Let{std::move(rhs), b ? *std::move(b) : n.bind});
            },
            [&](const TyEq& n) { return tm::tyEq(term(n.lhs), term(n.rhs)); },
            [&](const Refl&) { return t; },
            [&](const Subst& n) {
              return tm::subst(term(n.body), term(n.proof));
            },
            [&](const Contra& n) { return tm::contra(term(n.proof)); },
            [&](const TyCon& n) {
              return tm::tyCon(n.name, args(n.params));
            },
            [&](const DataCon& n) {
              return tm::dataCon(n.name, args(n.args));
            },
            [&](const Case& n) {
              std::vector<Match> ms;
              ms.reserve(n.matches.size());
              for (const auto& m : n.matches) ms.push_back(match(m));
              return tm::caseOf(term(n.scrut), std::move(ms));
            },
        },
        t->node);
  }

 private:
  // nullopt means "binder shadows x; body untouched".
  std::optional<Binder> binder(const Binder& b) {
    if (b.bound == x_) return std::nullopt;
    if (fvA_.count(b.bound)) {
      Name fresh = freshName(b.bound);
      TermPtr renamed = substTerm(b.bound, tm::var(fresh), b.body);
      return Binder{fresh, term(renamed)};
    }
    return Binder{b.bound, term(b.body)};
  }

  Binder2 binder2(const Binder2& b) {
    if (b.bound1 == x_ || b.bound2 == x_) return b;
    Binder2 cur = b;
    for (Name* bound : {&cur.bound1, &cur.bound2}) {
      if (fvA_.count(*bound)) {
        Name fresh = freshName(*bound);
        cur.body = substTerm(*bound, tm::var(fresh), cur.body);
        *bound = fresh;
      }
    }
    cur.body = term(cur.body);
    return cur;
  }

  Match match(const Match& m) {
    auto vars = patternVars(m.pat);
    if (std::find(vars.begin(), vars.end(), x_) != vars.end()) return m;
    Pattern pat = copyPattern(m.pat);
    TermPtr body = m.body;
    for (const Name& v : vars) {
      if (fvA_.count(v)) {
        Name fresh = freshName(v);
        pat = renamePattern(pat, v, fresh);
        body = substTerm(v, tm::var(fresh), body);
      }
    }
    return Match{std::move(pat), term(body)};
  }

  std::vector<Arg> args(const std::vector<Arg>& as) {
    std::vector<Arg> out;
    out.reserve(as.size());
    for (const auto& a : as) out.push_back(Arg{a.eps, term(a.term)});
    return out;
  }

  const Name& x_;
  const TermPtr& a_;
  std::set<Name> fvA_;
};

}  // namespace

TermPtr substTerm(const Name& x, const TermPtr& a, const TermPtr& b) {
  return Subster(x, a).term(b);
}

std::pair<Name, TermPtr> unbind(const Binder& b) {
  Name x = freshName(b.bound);
  return {x, substTerm(b.bound, tm::var(x), b.body)};
}

std::tuple<Name, TermPtr, TermPtr> unbind2(const Binder& b1,
                                           const Binder& b2) {
  Name x = freshName(b1.bound);
  TermPtr v = tm::var(x);
  return {x, substTerm(b1.bound, v, b1.body), substTerm(b2.bound, v, b2.body)};
}

std::tuple<Name, Name, TermPtr> unbind2(const Binder2& b) {
  Name x = freshName(b.bound1);
  Name y = freshName(b.bound2);
  TermPtr body = substTerm(b.bound1, tm::var(x), b.body);
  body = substTerm(b.bound2, tm::var(y), body);
  return {x, y, std::move(body)};
}

TermPtr instantiate(const Binder& b, const TermPtr& a) {
  return substTerm(b.bound, a, b.body);
}

TermPtr instantiate2(const Binder2& b, const TermPtr& a1, const TermPtr& a2) {
  // Open with fresh names first: a1 could mention a variable spelled like
  // bound2, which a naive sequential substitution would then rewrite.
  auto [x, y, body] = unbind2(b);
  body = substTerm(x, a1, body);
  return substTerm(y, a2, body);
}

std::optional<std::uint64_t> asNatLiteral(const TermPtr& t) {
  const Term* cur = strip(t);
  std::uint64_t n = 0;
  for (;;) {
    const auto* dc = std::get_if<DataCon>(&cur->node);
    if (!dc) return std::nullopt;
    if (dc->name == "Zero" && dc->args.empty()) return n;
    if (dc->name == "Succ" && dc->args.size() == 1 &&
        dc->args[0].eps == Epsilon::Rel) {
      ++n;
      cur = strip(dc->args[0].term);
      continue;
    }
    return std::nullopt;
  }
}

}  // namespace picheck
