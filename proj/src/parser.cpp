#include "picheck/parser.hpp"

#include <cctype>
#include <map>
#include <optional>

#include "picheck/error.hpp"

namespace picheck {

void ConstructorEnv::addFrom(const ModuleAST& m) {
  for (const auto& d : m.decls) {
    if (const auto* data = std::get_if<DataEntry>(&d.entry)) {
      tycons.insert(data->tycon);
      for (const auto& c : data->ctors) datacons.insert(c.name);
    }
  }
}

std::set<std::string> ConstructorEnv::allNames() const {
  std::set<std::string> all = tycons;
  all.insert(datacons.begin(), datacons.end());
  return all;
}

namespace {

// ---------------------------------------------------------------------------
// Tokens

enum class Tok {
  Ident,
  Number,
  KwType,
  KwUnit,
  KwIf,
  KwThen,
  KwElse,
  KwLet,
  KwIn,
  KwCase,
  KwOf,
  KwData,
  KwWhere,
  KwSubst,
  KwBy,
  KwContra,
  KwRefl,
  KwTrustMe,
  KwModule,
  KwImport,
  Backslash,
  Dot,
  Colon,
  Arrow,
  Equals,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Semi,
  Comma,
  Bar,
  VLBrace,  // layout-inserted
  VRBrace,
  VSemi,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Number: return "number '" + t.text + "'";
    case Tok::Backslash: return "'\\'";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::Equals: return "'='";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Bar: return "'|'";
    case Tok::VLBrace: return "start of block";
    case Tok::VRBrace: return "end of block";
    case Tok::VSemi: return "end of line";
    case Tok::Eof: return "end of input";
    default: return "keyword '" + t.text + "'";
  }
}

[[noreturn]] void parseFail(const SourcePos& pos, const std::string& msg) {
  throw CheckError(pos, ErrorClass::ParseError, {msg});
}

const std::map<std::string, Tok>& keywordMap() {
  static const std::map<std::string, Tok> kws = {
      {"Type", Tok::KwType},     {"Unit", Tok::KwUnit},
      {"if", Tok::KwIf},         {"then", Tok::KwThen},
      {"else", Tok::KwElse},     {"let", Tok::KwLet},
      {"in", Tok::KwIn},         {"case", Tok::KwCase},
      {"of", Tok::KwOf},         {"data", Tok::KwData},
      {"where", Tok::KwWhere},   {"subst", Tok::KwSubst},
      {"by", Tok::KwBy},         {"contra", Tok::KwContra},
      {"Refl", Tok::KwRefl},     {"TRUSTME", Tok::KwTrustMe},
      {"module", Tok::KwModule}, {"import", Tok::KwImport},
  };
  return kws;
}

// ---------------------------------------------------------------------------
// Lexer

std::vector<Token> lex(std::string_view text, std::string_view file) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto pos = [&]() { return SourcePos{std::string(file), line, col}; };
  auto push = [&](Tok k, std::string s, SourcePos p) {
    out.push_back(Token{k, std::move(s), std::move(p)});
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    SourcePos p = pos();
    if (c == '-') {
      if (i + 1 < text.size() && text[i + 1] == '>') {
        push(Tok::Arrow, "->", p);
        i += 2;
        col += 2;
        continue;
      }
      if (i + 1 < text.size() && text[i + 1] == '-') {
        while (i < text.size() && text[i] != '\n') ++i;
        continue;
      }
      parseFail(p, "unexpected character '-'");
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_' || text[j] == '\''))
        ++j;
      std::string word(text.substr(i, j - i));
      auto it = keywordMap().find(word);
      push(it == keywordMap().end() ? Tok::Ident : it->second, word, p);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      push(Tok::Number, std::string(text.substr(i, j - i)), p);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    Tok k;
    switch (c) {
      case '\\': k = Tok::Backslash; break;
      case '.': k = Tok::Dot; break;
      case ':': k = Tok::Colon; break;
      case '=': k = Tok::Equals; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case ';': k = Tok::Semi; break;
      case ',': k = Tok::Comma; break;
      case '|': k = Tok::Bar; break;
      default:
        parseFail(p, std::string("unexpected character '") + c + "'");
    }
    push(k, std::string(1, c), p);
    ++col;
    ++i;
  }
  out.push_back(Token{Tok::Eof, "", SourcePos{std::string(file), line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// Layout
//
// After `of` or `where` an explicit `{` opens a brace-delimited block;
// otherwise the next token's column opens an implicit block. Inside an
// implicit block, a line starting at the reference column separates items,
// a shallower line closes the block. A headerless file (or the body of
// `module X where`) is itself a block of declarations.

std::vector<Token> layout(const std::vector<Token>& in) {
  struct LCtx {
    bool explicitCtx;
    int col;
  };
  std::vector<Token> out;
  std::vector<LCtx> stack;
  bool pendingBlock = in.empty() || in[0].kind != Tok::KwModule;
  int lastLine = -1;
  int pendingCases = 0;  // `of` opens a block only after a matching `case`

  auto emit = [&](Tok k, const SourcePos& p) {
    out.push_back(Token{k, "", p});
  };
  auto postToken = [&](const Token& t) {
    if (t.kind == Tok::KwCase) {
      ++pendingCases;
    } else if (t.kind == Tok::KwOf) {
      if (pendingCases > 0) {
        --pendingCases;
        pendingBlock = true;
      }
    } else if (t.kind == Tok::KwWhere) {
      pendingBlock = true;
    } else if (t.kind == Tok::LBrace) {
      stack.push_back(LCtx{true, 0});
    } else if (t.kind == Tok::RBrace) {
      if (stack.empty() || !stack.back().explicitCtx)
        parseFail(t.pos, "misplaced '}'");
      stack.pop_back();
    }
  };

  std::size_t i = 0;
  while (i < in.size() && in[i].kind != Tok::Eof) {
    const Token& t = in[i];
    if (pendingBlock) {
      pendingBlock = false;
      if (t.kind == Tok::LBrace) {
        stack.push_back(LCtx{true, 0});
        out.push_back(t);
        lastLine = t.pos.line;
        ++i;
        continue;
      }
      bool tooShallow = t.kind == Tok::RBrace;
      if (!stack.empty() && !stack.back().explicitCtx &&
          t.pos.column <= stack.back().col)
        tooShallow = true;
      if (tooShallow) {
        emit(Tok::VLBrace, t.pos);
        emit(Tok::VRBrace, t.pos);
        continue;  // reprocess t under the normal rules
      }
      stack.push_back(LCtx{false, t.pos.column});
      emit(Tok::VLBrace, t.pos);
      lastLine = t.pos.line;
      out.push_back(t);
      postToken(t);
      ++i;
      continue;
    }
    if (lastLine >= 0 && t.pos.line > lastLine) {
      while (!stack.empty() && !stack.back().explicitCtx &&
             t.pos.column < stack.back().col) {
        emit(Tok::VRBrace, t.pos);
        stack.pop_back();
      }
      if (!stack.empty() && !stack.back().explicitCtx &&
          t.pos.column == stack.back().col)
        emit(Tok::VSemi, t.pos);
    }
    lastLine = t.pos.line;
    out.push_back(t);
    postToken(t);
    ++i;
  }
  const SourcePos eofPos = in.empty() ? SourcePos{} : in.back().pos;
  if (pendingBlock) {
    emit(Tok::VLBrace, eofPos);
    emit(Tok::VRBrace, eofPos);
  }
  while (!stack.empty()) {
    if (!stack.back().explicitCtx) {
      emit(Tok::VRBrace, eofPos);
      stack.pop_back();
    } else {
      parseFail(eofPos, "unterminated '{'");
    }
  }
  out.push_back(Token{Tok::Eof, "", eofPos});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::vector<Token> ts, ConstructorEnv env)
      : ts_(std::move(ts)), env_(std::move(env)) {}

  ModuleAST parseModuleAll(std::string_view file) {
    ModuleAST m;
    if (accept(Tok::KwModule)) {
      m.name = expect(Tok::Ident, "a module name").text;
      expect(Tok::KwWhere, "'where'");
    }
    if (m.name.empty()) {
      std::string f(file);
      auto slash = f.find_last_of('/');
      if (slash != std::string::npos) f = f.substr(slash + 1);
      if (f.size() > 3 && f.substr(f.size() - 3) == ".pi")
        f = f.substr(0, f.size() - 3);
      m.name = f;
    }
    Tok close = openBlock();
    for (;;) {
      skipSeps();
      if (accept(close)) break;
      parseDecl(m);
      if (!atSep() && !at(close))
        parseFail(peek().pos,
                  "expected the end of the declaration, found " +
                      describe(peek()));
    }
    skipSeps();
    expect(Tok::Eof, "end of file");
    return m;
  }

  ModuleHeader parseHeaderOnly() {
    ModuleHeader h;
    if (accept(Tok::KwModule)) {
      h.name = expect(Tok::Ident, "a module name").text;
      expect(Tok::KwWhere, "'where'");
    }
    if (at(Tok::VLBrace) || at(Tok::LBrace)) {
      Tok close = openBlock();
      for (;;) {
        skipSeps();
        if (at(close) || at(Tok::Eof)) break;
        if (!accept(Tok::KwImport)) break;
        h.imports.push_back(expect(Tok::Ident, "a module name").text);
      }
    }
    return h;
  }

  TermPtr parseTermAll() {
    expect(Tok::VLBrace, "a term");
    TermPtr t = parseExpr();
    if (!at(Tok::VRBrace))
      parseFail(peek().pos, "expected end of input, found " + describe(peek()));
    return t;
  }

 private:
  // --- token plumbing ---
  const Token& peek(std::size_t k = 0) const {
    std::size_t j = i_ + k;
    return j < ts_.size() ? ts_[j] : ts_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (at(k)) {
      ++i_;
      return true;
    }
    return false;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k))
      parseFail(peek().pos,
                std::string("expected ") + what + ", found " + describe(peek()));
    return ts_[i_++];
  }
  bool atSep() const { return at(Tok::VSemi) || at(Tok::Semi); }
  void skipSeps() {
    while (at(Tok::VSemi) || at(Tok::Semi)) ++i_;
  }
  Tok openBlock() {
    if (accept(Tok::LBrace)) return Tok::RBrace;
    expect(Tok::VLBrace, "the start of a block");
    return Tok::VRBrace;
  }
  std::size_t save() const { return i_; }
  void restore(std::size_t s) { i_ = s; }

  bool isCtor(const std::string& s) const { return env_.isCtor(s); }

  Name bindingName(const Token& t) {
    if (isCtor(t.text))
      parseFail(t.pos, "'" + t.text +
                           "' is a constructor and cannot be bound here");
    if (t.text == "_") return freshName(Name{"_"});
    return Name{t.text};
  }

  // --- declarations ---
  void parseDecl(ModuleAST& m) {
    Token start = peek();
    if (accept(Tok::KwImport)) {
      m.imports.push_back(expect(Tok::Ident, "a module name").text);
      return;
    }
    if (at(Tok::KwData)) {
      parseData(m);
      return;
    }
    Token name = expect(Tok::Ident, "a declaration");
    if (isCtor(name.text))
      parseFail(name.pos, "'" + name.text +
                              "' is a constructor and cannot be declared");
    if (accept(Tok::Colon)) {
      TermPtr ty = parseExpr();
      m.decls.push_back(
          Decl{SigEntry{Name{name.text}, Epsilon::Rel, ty}, start.pos});
      return;
    }
    if (accept(Tok::Equals)) {
      TermPtr body = parseExpr();
      m.decls.push_back(Decl{DefEntry{Name{name.text}, body}, start.pos});
      return;
    }
    parseFail(peek().pos, "expected ':' or '=' after '" + name.text + "'");
  }

  void parseData(ModuleAST& m) {
    Token start = expect(Tok::KwData, "'data'");
    Token name = expect(Tok::Ident, "a type constructor name");
    Telescope params;
    while (at(Tok::LParen)) {
      ++i_;
      Token x = expect(Tok::Ident, "a parameter name");
      Name n = bindingName(x);
      expect(Tok::Colon, "':'");
      TermPtr ty = parseExpr();
      expect(Tok::RParen, "')'");
      params.entries.push_back(TeleSig{n, Epsilon::Rel, ty});
    }
    expect(Tok::Colon, "':'");
    expect(Tok::KwType, "'Type'");
    expect(Tok::KwWhere, "'where'");
    env_.tycons.insert(name.text);  // visible inside its own constructors
    std::vector<ConstructorDef> ctors;
    Tok close = openBlock();
    for (;;) {
      skipSeps();
      if (accept(close)) break;
      Token cname = expect(Tok::Ident, "a data constructor name");
      Telescope tele;
      if (accept(Tok::KwOf)) {
        while (at(Tok::LParen) || at(Tok::LBracket)) parseTeleEntry(tele);
        if (tele.entries.empty())
          parseFail(peek().pos, "expected constructor arguments after 'of'");
      }
      ctors.push_back(ConstructorDef{cname.text, std::move(tele)});
      env_.datacons.insert(cname.text);
      if (!atSep() && !at(close))
        parseFail(peek().pos, "expected the end of the constructor, found " +
                                  describe(peek()));
    }
    m.decls.push_back(Decl{
        DataEntry{name.text, std::move(params), std::move(ctors)}, start.pos});
  }

  void parseTeleEntry(Telescope& tele) {
    if (accept(Tok::LParen)) {
      // (x : A) named, or (A) anonymous
      if (at(Tok::Ident) && peek(1).kind == Tok::Colon && !isCtor(peek().text)) {
        Token x = ts_[i_];
        i_ += 2;
        Name n = bindingName(x);
        TermPtr ty = parseExpr();
        expect(Tok::RParen, "')'");
        tele.entries.push_back(TeleSig{n, Epsilon::Rel, ty});
        return;
      }
      TermPtr ty = parseExpr();
      expect(Tok::RParen, "')'");
      tele.entries.push_back(
          TeleSig{freshName(Name{"_"}), Epsilon::Rel, ty});
      return;
    }
    expect(Tok::LBracket, "'(' or '['");
    Token x = expect(Tok::Ident, "a name");
    if (accept(Tok::Colon)) {
      Name n = bindingName(x);
      TermPtr ty = parseExpr();
      expect(Tok::RBracket, "']'");
      tele.entries.push_back(TeleSig{n, Epsilon::Irr, ty});
      return;
    }
    if (accept(Tok::Equals)) {
      // constraint: the left side must be a variable
      if (isCtor(x.text))
        parseFail(x.pos, "the left side of a constraint must be a variable");
      TermPtr rhs = parseExpr();
      expect(Tok::RBracket, "']'");
      tele.entries.push_back(TeleDef{tm::var(Name{x.text}), rhs});
      return;
    }
    parseFail(peek().pos, "expected ':' or '=' in telescope entry");
  }

  // --- expressions ---
  TermPtr parseExpr() {
    switch (peek().kind) {
      case Tok::Backslash: return parseLambda();
      case Tok::KwLet: return parseLet();
      case Tok::KwIf: return parseIf();
      case Tok::KwCase: return parseCase();
      case Tok::KwSubst: return parseSubst();
      case Tok::KwContra: return parseContra();
      default: return parseArrow();
    }
  }

  TermPtr parseLambda() {
    Token start = expect(Tok::Backslash, "'\\'");
    std::vector<std::pair<Epsilon, Name>> params;
    while (!at(Tok::Dot)) {
      if (accept(Tok::LBracket)) {
        Token x = expect(Tok::Ident, "a parameter name");
        expect(Tok::RBracket, "']'");
        params.push_back({Epsilon::Irr, bindingName(x)});
      } else {
        Token x = expect(Tok::Ident, "a parameter name");
        params.push_back({Epsilon::Rel, bindingName(x)});
      }
    }
    expect(Tok::Dot, "'.'");
    if (params.empty()) parseFail(start.pos, "lambda needs a parameter");
    TermPtr body = parseExpr();
    for (auto it = params.rbegin(); it != params.rend(); ++it)
      body = tm::lam(it->first, it->second, body);
    return tm::pos(start.pos, body);
  }

  TermPtr parseLet() {
    Token start = expect(Tok::KwLet, "'let'");
    if (accept(Tok::LParen)) {
      Token x = expect(Tok::Ident, "a name");
      expect(Tok::Comma, "','");
      Token y = expect(Tok::Ident, "a name");
      expect(Tok::RParen, "')'");
      expect(Tok::Equals, "'='");
      TermPtr rhs = parseExpr();
      expect(Tok::KwIn, "'in'");
      TermPtr body = parseExpr();
      return tm::pos(start.pos,
                     tm::letPair(rhs, bindingName(x), bindingName(y), body));
    }
    Token x = expect(Tok::Ident, "a name");
    expect(Tok::Equals, "'='");
    TermPtr rhs = parseExpr();
    expect(Tok::KwIn, "'in'");
    TermPtr body = parseExpr();
    return tm::pos(start.pos, tm::let_(rhs, bindingName(x), body));
  }

  TermPtr parseIf() {
    Token start = expect(Tok::KwIf, "'if'");
    TermPtr cond = parseExpr();
    expect(Tok::KwThen, "'then'");
    TermPtr thenB = parseExpr();
    expect(Tok::KwElse, "'else'");
    TermPtr elseB = parseExpr();
    std::vector<Match> ms;
    ms.push_back(Match{Pattern{PatCon{"True", {}}}, thenB});
    ms.push_back(Match{Pattern{PatCon{"False", {}}}, elseB});
    return tm::pos(start.pos, tm::caseOf(cond, std::move(ms)));
  }

  TermPtr parseCase() {
    Token start = expect(Tok::KwCase, "'case'");
    TermPtr scrut = parseExpr();
    expect(Tok::KwOf, "'of'");
    Tok close = openBlock();
    std::vector<Match> ms;
    for (;;) {
      skipSeps();
      if (accept(close)) break;
      Pattern pat = parsePattern();
      checkLinear(pat);
      expect(Tok::Arrow, "'->'");
      TermPtr body = parseExpr();
      ms.push_back(Match{std::move(pat), body});
      if (!atSep() && !at(close))
        parseFail(peek().pos,
                  "expected the end of the branch, found " + describe(peek()));
    }
    return tm::pos(start.pos, tm::caseOf(scrut, std::move(ms)));
  }

  TermPtr parseSubst() {
    Token start = expect(Tok::KwSubst, "'subst'");
    TermPtr body = parseExpr();
    expect(Tok::KwBy, "'by'");
    TermPtr proof = parseExpr();
    return tm::pos(start.pos, tm::subst(body, proof));
  }

  TermPtr parseContra() {
    Token start = expect(Tok::KwContra, "'contra'");
    TermPtr proof = parseExpr();
    return tm::pos(start.pos, tm::contra(proof));
  }

  TermPtr parseArrow() {
    Token start = peek();
    if (at(Tok::LParen) || at(Tok::LBracket)) {
      std::size_t s = save();
      Epsilon eps;
      Name x;
      TermPtr dom;
      if (tryPiBinder(eps, x, dom)) {
        TermPtr cod = parseArrow();
        return tm::pos(start.pos, tm::pi(eps, dom, x, cod));
      }
      restore(s);
    }
    TermPtr t = parseEq();
    if (accept(Tok::Arrow)) {
      TermPtr cod = parseArrow();
      return tm::pos(start.pos, tm::arrow(t, cod));
    }
    return t;
  }

  bool tryPiBinder(Epsilon& eps, Name& x, TermPtr& dom) {
    Tok open = peek().kind;
    Tok closeTok = open == Tok::LParen ? Tok::RParen : Tok::RBracket;
    ++i_;
    if (!at(Tok::Ident) || isCtor(peek().text)) return false;
    Token xt = ts_[i_++];
    if (!accept(Tok::Colon)) return false;
    TermPtr ty;
    try {
      ty = parseExpr();
    } catch (const CheckError&) {
      return false;
    }
    if (!accept(closeTok)) return false;
    if (!accept(Tok::Arrow)) return false;
    eps = open == Tok::LParen ? Epsilon::Rel : Epsilon::Irr;
    x = xt.text == "_" ? freshName(Name{"_"}) : Name{xt.text};
    dom = ty;
    return true;
  }

  TermPtr parseEq() {
    Token start = peek();
    TermPtr t = parseApp();
    if (accept(Tok::Equals)) {
      TermPtr u = parseApp();
      return tm::pos(start.pos, tm::tyEq(t, u));
    }
    return t;
  }

  bool atAtomStart() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::Number:
      case Tok::KwType:
      case Tok::KwUnit:
      case Tok::KwRefl:
      case Tok::KwTrustMe:
      case Tok::LParen:
      case Tok::LBrace:
        return true;
      default:
        return false;
    }
  }

  TermPtr parseApp() {
    Token start = peek();
    TermPtr head = parseAtom();
    std::vector<Arg> args;
    for (;;) {
      if (at(Tok::LBracket)) {
        ++i_;
        TermPtr a = parseExpr();
        expect(Tok::RBracket, "']'");
        args.push_back(Arg{Epsilon::Irr, a});
      } else if (atAtomStart()) {
        args.push_back(Arg{Epsilon::Rel, parseAtom()});
      } else {
        break;
      }
    }
    if (args.empty()) return head;
    const Term* h = strip(head);
    if (const auto* dc = std::get_if<DataCon>(&h->node);
        dc && dc->args.empty()) {
      return tm::pos(start.pos, tm::dataCon(dc->name, std::move(args)));
    }
    if (const auto* tc = std::get_if<TyCon>(&h->node);
        tc && tc->params.empty()) {
      for (const auto& a : args)
        if (a.eps == Epsilon::Irr)
          parseFail(start.pos,
                    "type constructor arguments cannot be irrelevant");
      return tm::pos(start.pos, tm::tyCon(tc->name, std::move(args)));
    }
    TermPtr out = head;
    for (auto& a : args) out = tm::app(out, std::move(a));
    return tm::pos(start.pos, out);
  }

  TermPtr parseAtom() {
    Token t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        ++i_;
        if (t.text == "_")
          parseFail(t.pos, "'_' cannot be used as an expression");
        if (env_.tycons.count(t.text))
          return tm::pos(t.pos, tm::tyCon(t.text));
        if (env_.datacons.count(t.text))
          return tm::pos(t.pos, tm::dataCon(t.text));
        return tm::pos(t.pos, tm::var(Name{t.text}));
      }
      case Tok::Number: {
        ++i_;
        return tm::pos(t.pos, tm::nat(std::stoull(t.text)));
      }
      case Tok::KwType: ++i_; return tm::pos(t.pos, tm::type());
      case Tok::KwUnit: ++i_; return tm::pos(t.pos, tm::tyUnit());
      case Tok::KwRefl: ++i_; return tm::pos(t.pos, tm::refl());
      case Tok::KwTrustMe: ++i_; return tm::pos(t.pos, tm::trustme());
      case Tok::LParen: {
        ++i_;
        if (accept(Tok::RParen)) return tm::pos(t.pos, tm::litUnit());
        TermPtr e = parseExpr();
        if (accept(Tok::Colon)) {
          TermPtr ty = parseExpr();
          expect(Tok::RParen, "')'");
          return tm::pos(t.pos, tm::ann(e, ty));
        }
        if (at(Tok::Comma)) {
          std::vector<TermPtr> elems{e};
          while (accept(Tok::Comma)) elems.push_back(parseExpr());
          expect(Tok::RParen, "')'");
          TermPtr out = elems.back();
          for (std::size_t k = elems.size() - 1; k-- > 0;)
            out = tm::prod(elems[k], out);
          return tm::pos(t.pos, out);
        }
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::LBrace: {
        ++i_;
        Token x = expect(Tok::Ident, "a name");
        Name n = bindingName(x);
        expect(Tok::Colon, "':'");
        TermPtr a = parseExpr();
        expect(Tok::Bar, "'|'");
        TermPtr b = parseExpr();
        expect(Tok::RBrace, "'}'");
        return tm::pos(t.pos, tm::sigma(a, n, b));
      }
      default:
        parseFail(t.pos, "expected an expression, found " + describe(t));
    }
  }

  // --- patterns ---
  Pattern parsePattern() {
    if (at(Tok::Ident) && env_.datacons.count(peek().text)) {
      Token con = ts_[i_++];
      std::vector<PatArg> args;
      for (;;) {
        if (at(Tok::LBracket)) {
          ++i_;
          Pattern p = parsePattern();
          expect(Tok::RBracket, "']'");
          args.push_back(PatArg{std::move(p), Epsilon::Irr});
        } else if (at(Tok::Ident) || at(Tok::LParen)) {
          args.push_back(PatArg{parsePatAtom(), Epsilon::Rel});
        } else {
          break;
        }
      }
      return Pattern{PatCon{con.text, std::move(args)}};
    }
    return parsePatAtom();
  }

  Pattern parsePatAtom() {
    Token t = peek();
    if (accept(Tok::LParen)) {
      Pattern p = parsePattern();
      expect(Tok::RParen, "')'");
      return p;
    }
    Token x = expect(Tok::Ident, "a pattern");
    if (env_.datacons.count(x.text)) return Pattern{PatCon{x.text, {}}};
    if (env_.tycons.count(x.text))
      parseFail(x.pos, "'" + x.text + "' is a type constructor, not a pattern");
    if (x.text == "_") return Pattern{PatVar{freshName(Name{"_"})}};
    return Pattern{PatVar{Name{x.text}}};
  }

  void checkLinear(const Pattern& p) {
    auto vars = patternVars(p);
    std::set<Name> seen;
    for (const auto& v : vars)
      if (!seen.insert(v).second)
        parseFail(peek().pos,
                  "pattern binds '" + v.hint + "' more than once");
  }

  std::vector<Token> ts_;
  std::size_t i_ = 0;
  ConstructorEnv env_;
};

}  // namespace

ModuleAST parseModule(std::string_view text, std::string_view file,
                      ConstructorEnv env) {
  Parser p(layout(lex(text, file)), std::move(env));
  return p.parseModuleAll(file);
}

TermPtr parseTerm(std::string_view text, const ConstructorEnv& env) {
  Parser p(layout(lex(text, "<term>")), env);
  return p.parseTermAll();
}

ModuleHeader scanModuleHeader(std::string_view text, std::string_view file) {
  Parser p(layout(lex(text, file)), ConstructorEnv{});
  ModuleHeader h = p.parseHeaderOnly();
  if (h.name.empty()) {
    std::string f(file);
    auto slash = f.find_last_of('/');
    if (slash != std::string::npos) f = f.substr(slash + 1);
    if (f.size() > 3 && f.substr(f.size() - 3) == ".pi")
      f = f.substr(0, f.size() - 3);
    h.name = f;
  }
  return h;
}

}  // namespace picheck
