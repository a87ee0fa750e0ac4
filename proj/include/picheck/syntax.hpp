#pragma once

// Abstract syntax for pi-check: names, binders, terms, patterns, telescopes
// and context entries, together with the binding operations the rest of the
// checker is built on (alpha-equivalence, free variables, capture-avoiding
// substitution, freshening).

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace picheck {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Source positions

struct SourcePos {
  std::string file;
  int line = 0;  // 1-based; 0 means "unknown"
  int column = 0;

  bool known() const { return line > 0; }
  std::string str() const;
};

// ---------------------------------------------------------------------------
// Names
//
// A name is a source spelling plus a uid. uid 0 marks a name exactly as it
// came out of the parser; freshening assigns a globally unique positive uid
// and never reuses one.

struct Name {
  std::string hint;
  std::uint64_t uid = 0;

  friend bool operator==(const Name&, const Name&) = default;
  friend auto operator<=>(const Name&, const Name&) = default;

  std::string str() const {
    return uid == 0 ? hint : hint + "#" + std::to_string(uid);
  }
};

class NameSupply {
 public:
  Name fresh(const Name& hint) { return Name{hint.hint, ++next_}; }
  std::uint64_t issued() const { return next_.load(); }

 private:
  std::atomic<std::uint64_t> next_{0};
};

// Process-wide supply. Issuance is atomic, so syntax operations that need to
// freshen (unbind, substitution) stay safe across concurrent sessions.
NameSupply& globalNames();
Name freshName(const Name& hint);

// ---------------------------------------------------------------------------
// Relevance tags

enum class Epsilon { Rel, Irr };

inline const char* epsilonStr(Epsilon e) {
  return e == Epsilon::Rel ? "relevant" : "irrelevant";
}

// ---------------------------------------------------------------------------
// Terms

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Arg {
  Epsilon eps = Epsilon::Rel;
  TermPtr term;
};

// One-variable scope. Open it with unbind (or instantiate it directly);
// never inspect `body` without accounting for `bound`.
struct Binder {
  Name bound;
  TermPtr body;
};

struct Binder2 {
  Name bound1;
  Name bound2;
  TermPtr body;
};

struct PatArg;

struct PatVar {
  Name name;
};
struct PatCon {
  std::string con;
  std::vector<PatArg> args;
};

struct Pattern {
  std::variant<PatVar, PatCon> node;
};

struct PatArg {
  Pattern pat;
  Epsilon eps = Epsilon::Rel;
};

// A case alternative: the pattern's variables scope over the body.
struct Match {
  Pattern pat;
  TermPtr body;
};

struct TyType {};
struct Var {
  Name name;
};
struct Lam {
  Epsilon eps;
  Binder bind;
};
struct App {
  TermPtr fun;
  Arg arg;
};
struct Pi {
  Epsilon eps;
  TermPtr domain;
  Binder bind;
};
struct Ann {
  TermPtr term;
  TermPtr type;
};
struct Pos {
  SourcePos pos;
  TermPtr term;
};
struct TrustMe {};
struct TyUnit {};
struct LitUnit {};
struct TySigma {
  TermPtr first;
  Binder bind;
};
struct Prod {
  TermPtr first;
  TermPtr second;
};
struct LetPair {
  TermPtr scrut;
  Binder2 bind;
};
struct Let {
  TermPtr rhs;
  Binder bind;
};
struct TyEq {
  TermPtr lhs;
  TermPtr rhs;
};
struct Refl {};
struct Subst {
  TermPtr body;
  TermPtr proof;
};
struct Contra {
  TermPtr proof;
};
struct TyCon {
  std::string name;
  std::vector<Arg> params;  // always relevant
};
struct DataCon {
  std::string name;
  std::vector<Arg> args;
};
struct Case {
  TermPtr scrut;
  std::vector<Match> matches;
};

using TermNode =
    std::variant<TyType, Var, Lam, App, Pi, Ann, Pos, TrustMe, TyUnit, LitUnit,
                 TySigma, Prod, LetPair, Let, TyEq, Refl, Subst, Contra, TyCon,
                 DataCon, Case>;

struct Term {
  TermNode node;
};

// Term builders.
namespace tm {

TermPtr make(TermNode node);

inline TermPtr type() { return make(TyType{}); }
inline TermPtr var(Name n) { return make(Var{std::move(n)}); }
inline TermPtr lam(Epsilon e, Name x, TermPtr body) {
  return make(Lam{e, Binder{std::move(x), std::move(body)}});
}
inline TermPtr app(TermPtr f, Arg a) {
  return make(App{std::move(f), std::move(a)});
}
inline TermPtr app(TermPtr f, TermPtr a) {
  return make(App{std::move(f), Arg{Epsilon::Rel, std::move(a)}});
}
inline TermPtr pi(Epsilon e, TermPtr dom, Name x, TermPtr cod) {
  return make(Pi{e, std::move(dom), Binder{std::move(x), std::move(cod)}});
}
TermPtr arrow(TermPtr dom, TermPtr cod);  // non-dependent sugar
inline TermPtr ann(TermPtr t, TermPtr ty) {
  return make(Ann{std::move(t), std::move(ty)});
}
inline TermPtr pos(SourcePos p, TermPtr t) {
  return make(Pos{std::move(p), std::move(t)});
}
inline TermPtr trustme() { return make(TrustMe{}); }
inline TermPtr tyUnit() { return make(TyUnit{}); }
inline TermPtr litUnit() { return make(LitUnit{}); }
inline TermPtr sigma(TermPtr first, Name x, TermPtr second) {
  return make(TySigma{std::move(first), Binder{std::move(x), std::move(second)}});
}
inline TermPtr prod(TermPtr a, TermPtr b) {
  return make(Prod{std::move(a), std::move(b)});
}
inline TermPtr letPair(TermPtr scrut, Name x, Name y, TermPtr body) {
  return make(LetPair{std::move(scrut),
                      Binder2{std::move(x), std::move(y), std::move(body)}});
}
inline TermPtr let_(TermPtr rhs, Name x, TermPtr body) {
  return make(Let{std::move(rhs), Binder{std::move(x), std::move(body)}});
}
inline TermPtr tyEq(TermPtr a, TermPtr b) {
  return make(TyEq{std::move(a), std::move(b)});
}
inline TermPtr refl() { return make(Refl{}); }
inline TermPtr subst(TermPtr body, TermPtr proof) {
  return make(Subst{std::move(body), std::move(proof)});
}
inline TermPtr contra(TermPtr proof) { return make(Contra{std::move(proof)}); }
inline TermPtr tyCon(std::string name, std::vector<Arg> params = {}) {
  return make(TyCon{std::move(name), std::move(params)});
}
inline TermPtr dataCon(std::string name, std::vector<Arg> args = {}) {
  return make(DataCon{std::move(name), std::move(args)});
}
inline TermPtr caseOf(TermPtr scrut, std::vector<Match> matches) {
  return make(Case{std::move(scrut), std::move(matches)});
}
TermPtr nat(std::uint64_t n);  // Succ (... Zero) chain

}  // namespace tm

// ---------------------------------------------------------------------------
// Telescopes and context entries

struct TeleSig {
  Name name;
  Epsilon eps = Epsilon::Rel;
  TermPtr type;
};
// An equality constraint. Source syntax always has a variable on the left;
// substitution may turn the left side into a general term, in which case the
// constraint stays pending until the checker can decide it.
struct TeleDef {
  TermPtr lhs;
  TermPtr rhs;
};
using TeleEntry = std::variant<TeleSig, TeleDef>;

// The left side when it (still) is a variable.
const Name* teleDefVar(const TeleDef& d);

struct Telescope {
  std::vector<TeleEntry> entries;

  std::size_t sigCount() const;
};

struct ConstructorDef {
  std::string name;
  Telescope tele;
};

struct SigEntry {
  Name name;
  Epsilon eps = Epsilon::Rel;
  TermPtr type;
};
struct DefEntry {
  Name name;
  TermPtr term;
};
struct DataEntry {
  std::string tycon;
  Telescope params;
  std::vector<ConstructorDef> ctors;
};
using Entry = std::variant<SigEntry, DefEntry, DataEntry>;

// ---------------------------------------------------------------------------
// Modules

// A top-level declaration with the position it came from.
struct Decl {
  Entry entry;
  SourcePos pos;
};

struct ModuleAST {
  std::string name;
  std::vector<std::string> imports;
  std::vector<Decl> decls;
};

// ---------------------------------------------------------------------------
// Operations

// Looks through Pos and Ann wrappers (both never affect meaning).
const Term* strip(const TermPtr& t);
TermPtr stripPtr(TermPtr t);
// Removes every Pos/Ann node in the tree.
TermPtr deepStrip(const TermPtr& t);

bool aeq(const TermPtr& a, const TermPtr& b);
bool aeqTelescope(const Telescope& a, const Telescope& b);
bool aeqEntry(const Entry& a, const Entry& b);

std::set<Name> freeVars(const TermPtr& t);

// b with a substituted for every free occurrence of x; capture-avoiding.
TermPtr substTerm(const Name& x, const TermPtr& a, const TermPtr& b);

std::pair<Name, TermPtr> unbind(const Binder& b);
std::tuple<Name, TermPtr, TermPtr> unbind2(const Binder& b1, const Binder& b2);
std::tuple<Name, Name, TermPtr> unbind2(const Binder2& b);

TermPtr instantiate(const Binder& b, const TermPtr& a);
TermPtr instantiate2(const Binder2& b, const TermPtr& a1, const TermPtr& a2);

// Pattern variables in left-to-right order.
std::vector<Name> patternVars(const Pattern& p);

// Opens a match: all pattern variables renamed to fresh names in both the
// pattern and the body.
std::pair<Pattern, TermPtr> unbindMatch(const Match& m);
// Opens two matches with the same fresh names; nullopt when the patterns do
// not have the same shape.
std::optional<std::tuple<Pattern, TermPtr, TermPtr>> unbindMatch2(
    const Match& m1, const Match& m2);

// The pattern read back as a term, for refinement.
TermPtr patternToTerm(const Pattern& p);

std::optional<std::uint64_t> asNatLiteral(const TermPtr& t);

}  // namespace picheck
