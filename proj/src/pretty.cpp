#include "picheck/pretty.hpp"

#include <map>
#include <optional>
#include <sstream>

#include "picheck/error.hpp"

namespace picheck {

namespace {

// Precedence levels, loosest first.
enum Level { EXPR = 0, ARROW = 1, EQ = 2, APP = 3, ATOM = 4 };

const std::set<std::string>& keywords() {
  static const std::set<std::string> kws = {
      "Type", "Unit",   "if", "then",  "else",   "let",    "in",
      "case", "of",     "data", "where", "subst", "by",     "contra",
      "Refl", "TRUSTME", "module", "import"};
  return kws;
}

const std::set<std::string>& preludeCtorNames() {
  static const std::set<std::string> names = {"Bool", "Nat", "True", "False",
                                              "Zero", "Succ"};
  return names;
}

std::string paren(std::string s, bool need) {
  return need ? "(" + std::move(s) + ")" : std::move(s);
}

class Printer {
 public:
  explicit Printer(const PrintOpts& opts) : opts_(opts) {}

  std::string term(const TermPtr& tp, int lvl) {
    const Term* t = tp.get();
    while (const auto* p = std::get_if<Pos>(&t->node)) t = p->term.get();
    return std::visit(
        overloaded{
            [&](const TyType&) -> std::string { return "Type"; },
            [&](const Var& v) { return name(v.name); },
            [&](const Lam&) { return paren(lambda(t), lvl > EXPR); },
            [&](const App& a) {
              std::string out = term(a.fun, APP) + " " + arg(a.arg);
              return paren(std::move(out), lvl > APP);
            },
            [&](const Pi& p) { return paren(piType(p), lvl > ARROW); },
            [&](const Ann& a) {
              return "(" + term(a.term, EXPR) + " : " + term(a.type, EXPR) +
                     ")";
            },
            [&](const Pos&) -> std::string { return "?"; },  // stripped above
            [&](const TrustMe&) -> std::string { return "TRUSTME"; },
            [&](const TyUnit&) -> std::string { return "Unit"; },
            [&](const LitUnit&) -> std::string { return "()"; },
            [&](const TySigma& s) {
              BinderScope bs(*this, s.bind.bound, s.bind.body);
              return "{ " + bs.shown() + " : " + term(s.first, EXPR) + " | " +
                     term(s.bind.body, EXPR) + " }";
            },
            [&](const Prod& p) {
              return "(" + term(p.first, EXPR) + ", " + term(p.second, EXPR) +
                     ")";
            },
            [&](const LetPair& l) {
              BinderScope b1(*this, l.bind.bound1, l.bind.body);
              BinderScope b2(*this, l.bind.bound2, l.bind.body,
                             {b1.shown()});
              std::string out = "let (" + b1.shown() + ", " + b2.shown() +
                                ") = " + term(l.scrut, EXPR) + " in " +
                                term(l.bind.body, EXPR);
              return paren(std::move(out), lvl > EXPR);
            },
            [&](const Let& l) {
              BinderScope bs(*this, l.bind.bound, l.bind.body);
              std::string out = "let " + bs.shown() + " = " +
                                term(l.rhs, EXPR) + " in " +
                                term(l.bind.body, EXPR);
              return paren(std::move(out), lvl > EXPR);
            },
            [&](const TyEq& e) {
              std::string out = term(e.lhs, APP) + " = " + term(e.rhs, APP);
              return paren(std::move(out), lvl > EQ);
            },
            [&](const Refl&) -> std::string { return "Refl"; },
            [&](const Subst& s) {
              std::string out = "subst " + term(s.body, EXPR) + " by " +
                                term(s.proof, EXPR);
              return paren(std::move(out), lvl > EXPR);
            },
            [&](const Contra& c) {
              return paren("contra " + term(c.proof, EXPR), lvl > EXPR);
            },
            [&](const TyCon& c) { return conApp(c.name, c.params, lvl); },
            [&](const DataCon& d) {
              if (auto n = asNatLiteral(tp)) return std::to_string(*n);
              return conApp(d.name, d.args, lvl);
            },
            [&](const Case& c) {
              std::string out = "case " + term(c.scrut, EXPR) + " of {";
              for (std::size_t i = 0; i < c.matches.size(); ++i) {
                if (i) out += " ;";
                out += " " + match(c.matches[i]);
              }
              out += c.matches.empty() ? "}" : " }";
              return paren(std::move(out), lvl > EXPR);
            },
        },
        t->node);
  }

  std::string pattern(const Pattern& p, bool atomic) {
    return std::visit(
        overloaded{
            [&](const PatVar& v) { return name(v.name); },
            [&](const PatCon& c) {
              if (c.args.empty()) return c.con;
              std::string out = c.con;
              for (const auto& a : c.args) {
                if (a.eps == Epsilon::Irr)
                  out += " [" + pattern(a.pat, false) + "]";
                else
                  out += " " + pattern(a.pat, true);
              }
              return paren(std::move(out), atomic);
            },
        },
        p.node);
  }

  // Chooses a printable name for a binder and registers it while alive.
  class BinderScope {
   public:
    BinderScope(Printer& pr, const Name& x, const TermPtr& body,
                std::vector<std::string> alsoForbid = {})
        : pr_(pr), x_(x) {
      std::set<Name> fv = freeVars(body);
      bool used = fv.count(x) > 0;
      if (x.hint == "_" && !used) {
        shown_ = "_";
        return;
      }
      std::set<std::string> forbidden(alsoForbid.begin(), alsoForbid.end());
      for (const Name& v : fv) {
        if (v == x) continue;
        forbidden.insert(pr.name(v));
      }
      std::string base = x.hint.empty() || x.hint == "_" ? "x" : x.hint;
      std::string cand = base;
      for (int k = 1; pr.badName(cand) || forbidden.count(cand); ++k)
        cand = base + std::to_string(k);
      shown_ = cand;
      auto it = pr.rename_.find(x);
      if (it != pr.rename_.end()) old_ = it->second;
      pr.rename_[x] = cand;
      registered_ = true;
    }
    ~BinderScope() {
      if (!registered_) return;
      if (old_)
        pr_.rename_[x_] = *old_;
      else
        pr_.rename_.erase(x_);
    }
    BinderScope(const BinderScope&) = delete;
    BinderScope& operator=(const BinderScope&) = delete;
    const std::string& shown() const { return shown_; }

   private:
    Printer& pr_;
    Name x_;
    std::string shown_;
    std::optional<std::string> old_;
    bool registered_ = false;
  };

  std::string name(const Name& v) const {
    auto it = rename_.find(v);
    if (it != rename_.end()) return it->second;
    return v.hint.empty() ? v.str() : v.hint;
  }

  bool badName(const std::string& s) const {
    return keywords().count(s) || preludeCtorNames().count(s) ||
           opts_.ctorNames.count(s);
  }

 private:
  std::string lambda(const Term* t) {
    // Collect a maximal run of lambdas into one head.
    std::vector<std::unique_ptr<BinderScope>> scopes;
    std::string params;
    const Term* cur = t;
    for (;;) {
      const auto* l = std::get_if<Lam>(&cur->node);
      if (!l) break;
      scopes.push_back(
          std::make_unique<BinderScope>(*this, l->bind.bound, l->bind.body));
      const std::string& n = scopes.back()->shown();
      params += " ";
      params += l->eps == Epsilon::Irr ? "[" + n + "]" : n;
      cur = l->bind.body.get();
      while (const auto* p = std::get_if<Pos>(&cur->node)) cur = p->term.get();
    }
    // Rebuild a TermPtr view of the body for printing.
    TermPtr body = std::make_shared<const Term>(*cur);
    return "\\" + params.substr(1) + ". " + term(body, EXPR);
  }

  std::string piType(const Pi& p) {
    TermPtr bodyView = p.bind.body;
    bool dependent = freeVars(bodyView).count(p.bind.bound) > 0;
    if (p.eps == Epsilon::Rel && !dependent)
      return term(p.domain, EQ) + " -> " + term(p.bind.body, ARROW);
    BinderScope bs(*this, p.bind.bound, p.bind.body);
    std::string head = bs.shown() + " : " + term(p.domain, EXPR);
    head = p.eps == Epsilon::Irr ? "[" + head + "]" : "(" + head + ")";
    return head + " -> " + term(p.bind.body, ARROW);
  }

  std::string arg(const Arg& a) {
    if (a.eps == Epsilon::Irr) return "[" + term(a.term, EXPR) + "]";
    return term(a.term, ATOM);
  }

  std::string conApp(const std::string& con, const std::vector<Arg>& args,
                     int lvl) {
    if (args.empty()) return con;
    std::string out = con;
    for (const auto& a : args) out += " " + arg(a);
    return paren(std::move(out), lvl > APP);
  }

  std::string match(const Match& m) {
    auto vars = patternVars(m.pat);
    std::vector<std::unique_ptr<BinderScope>> scopes;
    std::vector<std::string> taken;
    for (const Name& v : vars) {
      scopes.push_back(
          std::make_unique<BinderScope>(*this, v, m.body, taken));
      taken.push_back(scopes.back()->shown());
    }
    return pattern(m.pat, false) + " -> " + term(m.body, EXPR);
  }

  const PrintOpts& opts_;
  std::map<Name, std::string> rename_;
};

// Writes telescope entries, keeping binder scopes alive until destroyed.
struct TeleWriter {
  Printer& pr;
  std::vector<std::unique_ptr<Printer::BinderScope>> scopes;

  std::string entries(const Telescope& tele) {
    std::string out;
    for (const auto& e : tele.entries) {
      if (!out.empty()) out += " ";
      if (const auto* s = std::get_if<TeleSig>(&e)) {
        TermPtr scopeBody = tm::var(s->name);  // keep the binder's own name
        scopes.push_back(std::make_unique<Printer::BinderScope>(
            pr, s->name, scopeBody));
        const std::string& n = scopes.back()->shown();
        if (s->eps == Epsilon::Irr) {
          out += "[" + n + " : " + pr.term(s->type, EXPR) + "]";
        } else if (s->name.hint == "_") {
          out += "(" + pr.term(s->type, EXPR) + ")";
        } else {
          out += "(" + n + " : " + pr.term(s->type, EXPR) + ")";
        }
      } else {
        const auto& d = std::get<TeleDef>(e);
        out += "[" + pr.term(d.lhs, APP) + " = " + pr.term(d.rhs, EXPR) + "]";
      }
    }
    return out;
  }
};

}  // namespace

std::string prettyTerm(const TermPtr& t) {
  PrintOpts opts;
  return prettyTerm(t, opts);
}

std::string prettyTerm(const TermPtr& t, const PrintOpts& opts) {
  Printer pr(opts);
  return pr.term(t, EXPR);
}

std::string prettyPattern(const Pattern& p) {
  PrintOpts opts;
  Printer pr(opts);
  return pr.pattern(p, false);
}

std::string prettyTelescope(const Telescope& tele, const PrintOpts& opts) {
  Printer pr(opts);
  TeleWriter w{pr, {}};
  return w.entries(tele);
}

std::string prettyModule(const ModuleAST& m, const PrintOpts& opts) {
  std::ostringstream out;
  if (!m.name.empty()) out << "module " << m.name << " where\n\n";
  for (const auto& imp : m.imports) out << "import " << imp << "\n";
  if (!m.imports.empty()) out << "\n";
  bool first = true;
  const Name* lastSig = nullptr;
  for (const auto& d : m.decls) {
    // keep a definition right under its signature
    const auto* def = std::get_if<DefEntry>(&d.entry);
    bool glue = def && lastSig && *lastSig == def->name;
    if (!first && !glue) out << "\n";
    first = false;
    const auto* sig = std::get_if<SigEntry>(&d.entry);
    lastSig = sig ? &sig->name : nullptr;
    std::visit(
        overloaded{
            [&](const SigEntry& s) {
              out << s.name.hint << " : " << prettyTerm(s.type, opts) << "\n";
            },
            [&](const DefEntry& def) {
              out << def.name.hint << " = " << prettyTerm(def.term, opts)
                  << "\n";
            },
            [&](const DataEntry& data) {
              Printer pr(opts);
              TeleWriter w{pr, {}};
              std::string params = w.entries(data.params);
              out << "data " << data.tycon;
              if (!params.empty()) out << " " << params;
              out << " : Type where";
              if (data.ctors.empty()) {
                out << " {}\n";
                return;
              }
              out << " {\n";
              for (std::size_t i = 0; i < data.ctors.size(); ++i) {
                const auto& c = data.ctors[i];
                TeleWriter cw{pr, {}};
                std::string tele = cw.entries(c.tele);
                out << "  " << c.name;
                if (!tele.empty()) out << " of " << tele;
                out << (i + 1 < data.ctors.size() ? " ;" : "") << "\n";
              }
              out << "}\n";
            },
        },
        d.entry);
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Error rendering

const char* errorClassText(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::NotInScope: return "Scope error";
    case ErrorClass::IrrelevantUse: return "Irrelevance error";
    case ErrorClass::TypeMismatch: return "Type error";
    case ErrorClass::NotAFunction: return "Type error";
    case ErrorClass::NotATyCon: return "Type error";
    case ErrorClass::NotEqualityType: return "Type error";
    case ErrorClass::NoContradiction: return "Type error";
    case ErrorClass::NonExhaustive: return "Pattern match error";
    case ErrorClass::BadConstructorArity: return "Type error";
    case ErrorClass::UnknownConstructor: return "Type error";
    case ErrorClass::AmbiguousConstructor: return "Type error";
    case ErrorClass::EscapingVariable: return "Type error";
    case ErrorClass::UnificationFailure: return "Unification error";
    case ErrorClass::StepLimit: return "Step limit exceeded";
    case ErrorClass::ParseError: return "Parse error";
  }
  return "Error";
}

std::string CheckError::render() const {
  std::string out = pos_.str() + ": " + errorClassText(cls_);
  for (const Fragment& f : fragments_) {
    if (const auto* s = std::get_if<std::string>(&f)) {
      out += "\n  " + *s;
    } else {
      out += "\n    " + prettyTerm(std::get<TermPtr>(f));
    }
  }
  return out;
}

}  // namespace picheck
