#include "lf/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "lf/decimal.hpp"
#include "lf/hash.hpp"
#include "lf/time.hpp"

namespace lf {

std::string ParseError::render() const {
  std::ostringstream os;
  os << span.file << ":" << span.start_line << ":" << span.start_col
     << ": syntax: " << what();
  return os.str();
}

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

struct Token {
  enum class Tag { LParen, RParen, At, Symbol, Int, Decimal, Text, Date, Timestamp, End } tag;
  std::string text;   // Symbol / Text (unescaped)
  std::int64_t ival = 0;
  DecimalLit dval{};
  Span span;
};

bool is_symbol_start(char c) {
  return isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '*' ||
         c == '=' || c == '-' || c == '>';
}
bool is_symbol_char(char c) {
  return isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         c == '.' || c == '-' || c == '*' || c == '=' || c == '>';
}

class Lexer {
 public:
  Lexer(const std::string& text, std::string file)
      : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws();
      Token t = next();
      bool end = t.tag == Token::Tag::End;
      out.push_back(std::move(t));
      if (end) break;
    }
    return out;
  }

 private:
  const std::string& text_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  char peek(size_t off = 0) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  Span here() const { return Span{file_, line_, col_, line_, col_}; }

  void skip_ws() {
    for (;;) {
      char c = peek();
      if (c == ';') {
        while (peek() && peek() != '\n') advance();
      } else if (isspace(static_cast<unsigned char>(c)) && c != '\0') {
        advance();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void fail(const Span& sp, const std::string& msg) {
    throw ParseError(sp, msg);
  }

  Token next() {
    Span start = here();
    auto finish = [&](Token t) {
      t.span = start;
      t.span.end_line = line_;
      t.span.end_col = col_;
      return t;
    };
    if (pos_ >= text_.size()) return finish(Token{Token::Tag::End});
    char c = peek();
    if (c == '(') {
      advance();
      return finish(Token{Token::Tag::LParen});
    }
    if (c == ')') {
      advance();
      return finish(Token{Token::Tag::RParen});
    }
    if (c == '@') {
      advance();
      return finish(Token{Token::Tag::At});
    }
    if (c == '"') return finish(lex_text());
    if (isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && isdigit(static_cast<unsigned char>(peek(1)))))
      return finish(lex_number());
    if (is_symbol_start(c)) {
      std::string s;
      while (is_symbol_char(peek())) s.push_back(advance());
      Token t{Token::Tag::Symbol};
      t.text = std::move(s);
      return finish(t);
    }
    fail(start, std::string("unexpected character '") + c + "'");
  }

  Token lex_text() {
    Span start = here();
    advance();  // opening quote
    std::string s;
    for (;;) {
      if (pos_ >= text_.size()) fail(start, "unterminated string literal");
      char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) fail(start, "unterminated escape");
        char e = advance();
        switch (e) {
          case '"': s.push_back('"'); break;
          case '\\': s.push_back('\\'); break;
          case 'n': s.push_back('\n'); break;
          default: fail(start, "unknown escape sequence");
        }
      } else {
        s.push_back(c);
      }
    }
    Token t{Token::Tag::Text};
    t.text = std::move(s);
    return t;
  }

  Token lex_number() {
    Span start = here();
    std::string s;
    if (peek() == '-') s.push_back(advance());
    while (isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
           peek() == '-' || peek() == ':' || peek() == 'T' || peek() == 'Z')
      s.push_back(advance());
    // classify: Int64 | Decimal | Date (YYYY-MM-DD) | Timestamp (RFC-3339 UTC)
    if (s.find('T') != std::string::npos || s.find('Z') != std::string::npos) {
      auto micros = parse_timestamp(s);
      if (!micros) fail(start, "malformed timestamp literal: " + s);
      Token t{Token::Tag::Timestamp};
      t.ival = *micros;
      return t;
    }
    size_t dashes = std::count(s.begin(), s.end(), '-');
    if (dashes >= 2 && s[0] != '-') {
      auto days = parse_date(s);
      if (!days) fail(start, "malformed date literal: " + s);
      Token t{Token::Tag::Date};
      t.ival = *days;
      return t;
    }
    if (s.find('.') != std::string::npos) {
      auto d = decimal_from_string(s);
      if (!d) fail(start, "malformed or out-of-range decimal literal: " + s);
      Token t{Token::Tag::Decimal};
      t.dval = *d;
      return t;
    }
    try {
      size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used != s.size()) fail(start, "malformed integer literal: " + s);
      Token t{Token::Tag::Int};
      t.ival = v;
      return t;
    } catch (const std::exception&) {
      fail(start, "out-of-range integer literal: " + s);
    }
  }
};

// ---------------------------------------------------------------------------
// S-expressions
// ---------------------------------------------------------------------------

struct SExpr {
  // atom iff items empty and tok set
  Token tok;
  bool is_list = false;
  std::vector<SExpr> items;
  Span span;

  bool is_symbol(const char* s) const {
    return !is_list && tok.tag == Token::Tag::Symbol && tok.text == s;
  }
  bool is_any_symbol() const {
    return !is_list && tok.tag == Token::Tag::Symbol;
  }
};

class Reader {
 public:
  explicit Reader(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    while (toks_[pos_].tag != Token::Tag::End) out.push_back(read());
    return out;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  SExpr read() {
    const Token& t = toks_[pos_];
    if (t.tag == Token::Tag::End) throw ParseError(t.span, "unexpected end of input");
    if (t.tag == Token::Tag::RParen) throw ParseError(t.span, "unexpected ')'");
    if (t.tag == Token::Tag::LParen) {
      SExpr e;
      e.is_list = true;
      e.span = t.span;
      ++pos_;
      while (toks_[pos_].tag != Token::Tag::RParen) {
        if (toks_[pos_].tag == Token::Tag::End)
          throw ParseError(t.span, "unclosed '('");
        e.items.push_back(read());
      }
      e.span.end_line = toks_[pos_].span.end_line;
      e.span.end_col = toks_[pos_].span.end_col;
      ++pos_;
      return e;
    }
    SExpr e;
    e.tok = t;
    e.span = t.span;
    ++pos_;
    return e;
  }
};

// ---------------------------------------------------------------------------
// AST building
// ---------------------------------------------------------------------------

[[noreturn]] void fail(const SExpr& at, const std::string& msg) {
  throw ParseError(at.span, msg);
}

bool valid_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!(isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-'))
      return false;
  return true;
}

std::string symbol(const SExpr& e, const char* what) {
  if (!e.is_any_symbol()) fail(e, std::string("expected ") + what);
  return e.tok.text;
}

std::string ident(const SExpr& e, const char* what) {
  std::string s = symbol(e, what);
  if (!valid_ident(s)) fail(e, std::string("invalid identifier '") + s + "'");
  return s;
}

const std::set<std::string> kReservedHeads = {
    "lam", "tylam", "case", "rec", "proj", "upd", "con", "pure", "bind",
    "create", "fetch", "exercise", "cid_le", "forall", "module", "record",
    "variant", "value", "template", "choice", "ensure", "signatories",
    "observers", "controllers", "choice-observers", "body",
};

// builtin name -> (type-arg count, value-arg count)
const std::map<std::string, std::pair<int, int>> kBuiltins = {
    {"addi", {0, 2}}, {"subi", {0, 2}}, {"muli", {0, 2}}, {"divi", {0, 2}},
    {"modi", {0, 2}}, {"lti", {0, 2}},  {"lei", {0, 2}},  {"gti", {0, 2}},
    {"gei", {0, 2}},  {"eqi", {0, 2}},  {"addd", {0, 2}}, {"subd", {0, 2}},
    {"muld", {0, 2}}, {"divd", {0, 2}}, {"ltd", {0, 2}},  {"led", {0, 2}},
    {"gtd", {0, 2}},  {"ged", {0, 2}},  {"eqd", {0, 2}},  {"and", {0, 2}},
    {"or", {0, 2}},   {"not", {0, 1}},  {"appt", {0, 2}}, {"eqt", {0, 2}},
    {"eqp", {0, 2}},  {"eqdate", {0, 2}}, {"ltdate", {0, 2}},
    {"eqtime", {0, 2}}, {"lttime", {0, 2}},
    {"nil", {1, 0}},  {"cons", {1, 2}}, {"abort", {1, 1}},
};

struct BuildCtx {
  std::string module;                 // current module, for unqualified refs
  std::vector<std::string> tyvars;    // type variables in scope
  std::vector<std::string> vars;      // term variables in scope
  bool scenario_mode = false;         // unbound vars are errors, refs must be qualified

  bool tyvar_bound(const std::string& n) const {
    return std::find(tyvars.begin(), tyvars.end(), n) != tyvars.end();
  }
  bool var_bound(const std::string& n) const {
    return std::find(vars.begin(), vars.end(), n) != vars.end();
  }
};

QualName qualify(const BuildCtx& ctx, const SExpr& at, const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) {
    if (!valid_ident(s)) fail(at, "invalid name '" + s + "'");
    return QualName{ctx.module, s};
  }
  std::string mod = s.substr(0, colon);
  std::string name = s.substr(colon + 1);
  if (!valid_ident(mod) || !valid_ident(name))
    fail(at, "invalid qualified name '" + s + "'");
  return QualName{mod, name};
}

KindPtr build_kind(const SExpr& e) {
  if (e.is_symbol("*")) return kind_star();
  if (e.is_list && e.items.size() == 3 && e.items[0].is_symbol("->"))
    return kind_arrow(build_kind(e.items[1]), build_kind(e.items[2]));
  fail(e, "expected kind: '*' or (-> k k)");
}

TypePtr build_type(BuildCtx& ctx, const SExpr& e);

TypePtr build_type_atom(BuildCtx& ctx, const SExpr& e) {
  std::string s = e.tok.text;
  if (s == "=>") return mk_tfun_arrow(e.span);
  if (auto p = prim_type_from_name(s)) return mk_tprim(*p, e.span);
  if (ctx.tyvar_bound(s)) return mk_tvar(s, e.span);
  return mk_tnamed(qualify(ctx, e, s), e.span);
}

TypePtr build_type(BuildCtx& ctx, const SExpr& e) {
  if (!e.is_list) {
    if (!e.is_any_symbol()) fail(e, "expected a type");
    return build_type_atom(ctx, e);
  }
  if (e.items.empty()) fail(e, "empty type");
  if (e.items[0].is_symbol("forall")) {
    if (e.items.size() != 3 || !e.items[1].is_list || e.items[1].items.size() != 2)
      fail(e, "expected (forall (a kind) type)");
    std::string var = ident(e.items[1].items[0], "type variable");
    KindPtr k = build_kind(e.items[1].items[1]);
    ctx.tyvars.push_back(var);
    TypePtr body = build_type(ctx, e.items[2]);
    ctx.tyvars.pop_back();
    return mk_tforall(var, k, body, e.span);
  }
  if (e.items[0].is_symbol("=>") && e.items.size() == 3) {
    TypePtr a = build_type(ctx, e.items[1]);
    TypePtr b = build_type(ctx, e.items[2]);
    auto t = mk_arrow(a, b);
    const_cast<Type*>(t.get())->span = e.span;
    return t;
  }
  if (e.items.size() < 2) fail(e, "type application needs an argument");
  TypePtr acc = build_type(ctx, e.items[0]);
  for (size_t i = 1; i < e.items.size(); ++i)
    acc = mk_tapp(acc, build_type(ctx, e.items[i]), e.span);
  return acc;
}

ExprPtr build_expr(BuildCtx& ctx, const SExpr& e);

// expects (@ type): 'At' token then a type form
TypePtr expect_type_arg(BuildCtx& ctx, const SExpr& list, size_t& i, const char* what) {
  if (i + 1 >= list.items.size() || list.items[i].tok.tag != Token::Tag::At ||
      list.items[i].is_list)
    fail(list, std::string("expected @type argument for ") + what);
  ++i;
  return build_type(ctx, list.items[i++]);
}

ExprPtr build_expr_atom(BuildCtx& ctx, const SExpr& e) {
  const Token& t = e.tok;
  Literal lit;
  switch (t.tag) {
    case Token::Tag::Int:
      lit.tag = Literal::Tag::Int64;
      lit.i = t.ival;
      return mk_expr(ELit{lit}, e.span);
    case Token::Tag::Decimal:
      lit.tag = Literal::Tag::Decimal;
      lit.dec = t.dval;
      return mk_expr(ELit{lit}, e.span);
    case Token::Tag::Text:
      lit.tag = Literal::Tag::Text;
      lit.text = t.text;
      return mk_expr(ELit{lit}, e.span);
    case Token::Tag::Date:
      lit.tag = Literal::Tag::Date;
      lit.i = t.ival;
      return mk_expr(ELit{lit}, e.span);
    case Token::Tag::Timestamp:
      lit.tag = Literal::Tag::Timestamp;
      lit.i = t.ival;
      return mk_expr(ELit{lit}, e.span);
    case Token::Tag::Symbol: break;
    default: fail(e, "expected an expression");
  }
  const std::string& s = t.text;
  if (s == "unit") {
    lit.tag = Literal::Tag::Unit;
    return mk_expr(ELit{lit}, e.span);
  }
  if (s == "true" || s == "false") {
    lit.tag = Literal::Tag::Bool;
    lit.b = s == "true";
    return mk_expr(ELit{lit}, e.span);
  }
  if (auto it = kBuiltins.find(s); it != kBuiltins.end()) {
    if (it->second.first == 0 && it->second.second == 0)
      return mk_expr(EBuiltin{s, {}, {}}, e.span);
    fail(e, "builtin '" + s + "' must be fully applied");
  }
  if (s.find(':') != std::string::npos)
    return mk_expr(EValRef{qualify(ctx, e, s)}, e.span);
  if (ctx.var_bound(s)) return mk_expr(EVar{s}, e.span);
  if (ctx.scenario_mode)
    fail(e, "reference to unbound name '" + s + "'");
  if (!valid_ident(s)) fail(e, "invalid identifier '" + s + "'");
  return mk_expr(EValRef{QualName{ctx.module, s}}, e.span);
}

CaseAlt build_case_alt(BuildCtx& ctx, const SExpr& e) {
  if (!e.is_list || e.items.size() != 2)
    fail(e, "expected case alternative (pattern body)");
  const SExpr& p = e.items[0];
  CaseAlt alt;
  std::vector<std::string> binds;
  if (p.is_symbol("_")) {
    alt.pat.tag = CasePattern::Tag::Default;
  } else if (p.is_symbol("true")) {
    alt.pat.tag = CasePattern::Tag::BoolTrue;
  } else if (p.is_symbol("false")) {
    alt.pat.tag = CasePattern::Tag::BoolFalse;
  } else if (p.is_symbol("nil")) {
    alt.pat.tag = CasePattern::Tag::Nil;
  } else if (p.is_list && p.items.size() == 3 && p.items[0].is_symbol("cons")) {
    alt.pat.tag = CasePattern::Tag::Cons;
    alt.pat.bind1 = ident(p.items[1], "binder");
    alt.pat.bind2 = ident(p.items[2], "binder");
    binds = {alt.pat.bind1, alt.pat.bind2};
  } else if (p.is_list && p.items.size() == 2 && p.items[0].is_any_symbol()) {
    alt.pat.tag = CasePattern::Tag::Variant;
    alt.pat.variant = ident(p.items[0], "variant constructor");
    alt.pat.bind1 = ident(p.items[1], "binder");
    binds = {alt.pat.bind1};
  } else {
    fail(p, "unrecognized pattern");
  }
  for (const auto& b : binds) ctx.vars.push_back(b);
  alt.body = build_expr(ctx, e.items[1]);
  for (size_t i = 0; i < binds.size(); ++i) ctx.vars.pop_back();
  return alt;
}

ExprPtr build_expr(BuildCtx& ctx, const SExpr& e) {
  if (!e.is_list) return build_expr_atom(ctx, e);
  if (e.items.empty()) fail(e, "empty expression");
  const SExpr& head = e.items[0];

  if (head.is_symbol("lam")) {
    if (e.items.size() != 3 || !e.items[1].is_list || e.items[1].items.size() != 2)
      fail(e, "expected (lam (x type) body)");
    std::string var = ident(e.items[1].items[0], "binder");
    TypePtr annot = build_type(ctx, e.items[1].items[1]);
    ctx.vars.push_back(var);
    ExprPtr body = build_expr(ctx, e.items[2]);
    ctx.vars.pop_back();
    return mk_expr(ELam{var, annot, body}, e.span);
  }
  if (head.is_symbol("tylam")) {
    if (e.items.size() != 3 || !e.items[1].is_list || e.items[1].items.size() != 2)
      fail(e, "expected (tylam (a kind) body)");
    std::string var = ident(e.items[1].items[0], "type binder");
    KindPtr k = build_kind(e.items[1].items[1]);
    ctx.tyvars.push_back(var);
    ExprPtr body = build_expr(ctx, e.items[2]);
    ctx.tyvars.pop_back();
    return mk_expr(ETyLam{var, k, body}, e.span);
  }
  if (head.is_symbol("case")) {
    if (e.items.size() < 3) fail(e, "case needs a scrutinee and alternatives");
    ECase c;
    c.scrutinee = build_expr(ctx, e.items[1]);
    for (size_t i = 2; i < e.items.size(); ++i)
      c.alts.push_back(build_case_alt(ctx, e.items[i]));
    return mk_expr(std::move(c), e.span);
  }
  if (head.is_symbol("party")) {
    if (e.items.size() != 2) fail(e, "expected (party Name)");
    return mk_expr(EParty{ident(e.items[1], "party name")}, e.span);
  }
  if (head.is_symbol("rec")) {
    if (e.items.size() < 2) fail(e, "expected (rec R @ty... (field e)...)");
    ERecCon r;
    r.ref = qualify(ctx, e.items[1], symbol(e.items[1], "record name"));
    size_t i = 2;
    while (i < e.items.size() && !e.items[i].is_list &&
           e.items[i].tok.tag == Token::Tag::At) {
      ++i;
      if (i >= e.items.size()) fail(e, "dangling '@'");
      r.type_args.push_back(build_type(ctx, e.items[i++]));
    }
    for (; i < e.items.size(); ++i) {
      const SExpr& f = e.items[i];
      if (!f.is_list || f.items.size() != 2)
        fail(f, "expected record field (name expr)");
      r.fields.emplace_back(ident(f.items[0], "field name"),
                            build_expr(ctx, f.items[1]));
    }
    return mk_expr(std::move(r), e.span);
  }
  if (head.is_symbol("proj")) {
    if (e.items.size() != 4) fail(e, "expected (proj R field expr)");
    return mk_expr(
        ERecProj{qualify(ctx, e.items[1], symbol(e.items[1], "record name")),
                 ident(e.items[2], "field name"), build_expr(ctx, e.items[3])},
        e.span);
  }
  if (head.is_symbol("upd")) {
    if (e.items.size() != 5) fail(e, "expected (upd R field record value)");
    return mk_expr(
        ERecUpd{qualify(ctx, e.items[1], symbol(e.items[1], "record name")),
                ident(e.items[2], "field name"), build_expr(ctx, e.items[3]),
                build_expr(ctx, e.items[4])},
        e.span);
  }
  if (head.is_symbol("con")) {
    if (e.items.size() < 4) fail(e, "expected (con V Ctor @ty... expr)");
    EVarCon v;
    v.ref = qualify(ctx, e.items[1], symbol(e.items[1], "variant name"));
    v.variant = ident(e.items[2], "constructor name");
    size_t i = 3;
    while (i < e.items.size() && !e.items[i].is_list &&
           e.items[i].tok.tag == Token::Tag::At) {
      ++i;
      if (i >= e.items.size()) fail(e, "dangling '@'");
      v.type_args.push_back(build_type(ctx, e.items[i++]));
    }
    if (i + 1 != e.items.size())
      fail(e, "variant constructor takes exactly one argument");
    v.arg = build_expr(ctx, e.items[i]);
    return mk_expr(std::move(v), e.span);
  }
  if (head.is_symbol("pure")) {
    size_t i = 1;
    TypePtr ty = expect_type_arg(ctx, e, i, "pure");
    if (i + 1 != e.items.size()) fail(e, "expected (pure @type expr)");
    return mk_expr(EUpdatePure{ty, build_expr(ctx, e.items[i])}, e.span);
  }
  if (head.is_symbol("bind")) {
    if (e.items.size() != 3 || !e.items[1].is_list || e.items[1].items.size() != 3)
      fail(e, "expected (bind (x type expr) body)");
    std::string var = ident(e.items[1].items[0], "binder");
    TypePtr ty = build_type(ctx, e.items[1].items[1]);
    ExprPtr bound = build_expr(ctx, e.items[1].items[2]);
    ctx.vars.push_back(var);
    ExprPtr body = build_expr(ctx, e.items[2]);
    ctx.vars.pop_back();
    return mk_expr(EUpdateBind{var, ty, bound, body}, e.span);
  }
  if (head.is_symbol("create")) {
    size_t i = 1;
    TypePtr ty = expect_type_arg(ctx, e, i, "create");
    auto* named = std::get_if<TNamed>(&ty->node);
    if (!named) fail(e, "create expects a template name after @");
    if (i + 1 != e.items.size())
      fail(e, "create must be fully applied: (create @T arg)");
    return mk_expr(EUpdateCreate{named->ref, build_expr(ctx, e.items[i])}, e.span);
  }
  if (head.is_symbol("fetch")) {
    size_t i = 1;
    TypePtr ty = expect_type_arg(ctx, e, i, "fetch");
    auto* named = std::get_if<TNamed>(&ty->node);
    if (!named) fail(e, "fetch expects a template name after @");
    if (i + 1 != e.items.size())
      fail(e, "fetch must be fully applied: (fetch @T cid)");
    return mk_expr(EUpdateFetch{named->ref, build_expr(ctx, e.items[i])}, e.span);
  }
  if (head.is_symbol("exercise")) {
    size_t i = 1;
    TypePtr ty = expect_type_arg(ctx, e, i, "exercise");
    auto* named = std::get_if<TNamed>(&ty->node);
    if (!named) fail(e, "exercise expects a template name after @");
    if (i + 3 != e.items.size())
      fail(e, "exercise must be fully applied: (exercise @T Ch cid arg)");
    std::string choice = ident(e.items[i], "choice name");
    return mk_expr(EUpdateExercise{named->ref, choice, build_expr(ctx, e.items[i + 1]),
                                   build_expr(ctx, e.items[i + 2])},
                   e.span);
  }
  if (head.is_symbol("cid_le")) {
    size_t i = 1;
    TypePtr ty = expect_type_arg(ctx, e, i, "cid_le");
    if (i + 2 != e.items.size())
      fail(e, "cid_le must be fully applied: (cid_le @T a b)");
    return mk_expr(ECidLeq{ty, build_expr(ctx, e.items[i]),
                           build_expr(ctx, e.items[i + 1])},
                   e.span);
  }
  if (head.is_any_symbol()) {
    if (auto it = kBuiltins.find(head.tok.text); it != kBuiltins.end()) {
      EBuiltin b;
      b.name = head.tok.text;
      size_t i = 1;
      for (int k = 0; k < it->second.first; ++k)
        b.type_args.push_back(expect_type_arg(ctx, e, i, b.name.c_str()));
      for (int k = 0; k < it->second.second; ++k) {
        if (i >= e.items.size())
          fail(e, "builtin '" + b.name + "' must be fully applied");
        b.args.push_back(build_expr(ctx, e.items[i++]));
      }
      if (i != e.items.size()) fail(e, "too many arguments to '" + b.name + "'");
      return mk_expr(std::move(b), e.span);
    }
    if (kReservedHeads.count(head.tok.text))
      fail(e, "misplaced keyword '" + head.tok.text + "'");
  }
  // general application; arguments may be @types
  ExprPtr acc = build_expr(ctx, e.items[0]);
  size_t i = 1;
  if (i == e.items.size()) fail(e, "application needs an argument");
  while (i < e.items.size()) {
    if (!e.items[i].is_list && e.items[i].tok.tag == Token::Tag::At) {
      ++i;
      if (i >= e.items.size()) fail(e, "dangling '@'");
      acc = mk_expr(ETyApp{acc, build_type(ctx, e.items[i++])}, e.span);
    } else {
      acc = mk_expr(EApp{acc, build_expr(ctx, e.items[i++])}, e.span);
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Definitions
// ---------------------------------------------------------------------------

std::vector<TypeParam> build_type_params(const SExpr& e) {
  if (!e.is_list) fail(e, "expected type parameter list");
  std::vector<TypeParam> out;
  for (const auto& p : e.items) {
    if (!p.is_list || p.items.size() != 2)
      fail(p, "expected type parameter (a kind)");
    out.push_back({ident(p.items[0], "type variable"), build_kind(p.items[1])});
  }
  return out;
}

const SExpr& clause(const SExpr& parent, const SExpr& e, const char* kw) {
  if (!e.is_list || e.items.size() != 2 || !e.items[0].is_symbol(kw))
    fail(e, std::string("expected (") + kw + " expr)");
  (void)parent;
  return e.items[1];
}

ChoiceDef build_choice(BuildCtx& ctx, const SExpr& e, const std::string& param_var) {
  // (choice Name kind (x argty) resty (controllers e) [(choice-observers e)] (body e))
  if (e.items.size() < 7 || e.items.size() > 8) fail(e, "malformed choice");
  ChoiceDef c;
  c.name = ident(e.items[1], "choice name");
  std::string k = symbol(e.items[2], "choice kind");
  if (k == "consuming")
    c.kind = ChoiceKind::Consuming;
  else if (k == "nonconsuming")
    c.kind = ChoiceKind::Nonconsuming;
  else
    fail(e.items[2], "choice kind must be consuming or nonconsuming");
  if (!e.items[3].is_list || e.items[3].items.size() != 2)
    fail(e.items[3], "expected choice argument (x type)");
  c.arg_var = ident(e.items[3].items[0], "choice argument");
  c.arg_type = build_type(ctx, e.items[3].items[1]);
  c.result_type = build_type(ctx, e.items[4]);
  ctx.vars.push_back(param_var);
  ctx.vars.push_back(c.arg_var);
  size_t i = 5;
  c.controllers = build_expr(ctx, clause(e, e.items[i++], "controllers"));
  if (e.items.size() == 8)
    c.choice_observers = build_expr(ctx, clause(e, e.items[i++], "choice-observers"));
  else
    c.choice_observers = mk_expr(EBuiltin{"nil", {mk_tprim(PrimType::Party)}, {}});
  c.body = build_expr(ctx, clause(e, e.items[i], "body"));
  ctx.vars.pop_back();
  ctx.vars.pop_back();
  return c;
}

TemplateDef build_template(BuildCtx& ctx, const SExpr& e) {
  if (e.items.size() < 6) fail(e, "malformed template");
  TemplateDef t;
  t.name = ident(e.items[1], "template name");
  t.param_var = ident(e.items[2], "template parameter");
  ctx.vars.push_back(t.param_var);
  t.ensure = build_expr(ctx, clause(e, e.items[3], "ensure"));
  t.signatories = build_expr(ctx, clause(e, e.items[4], "signatories"));
  t.observers = build_expr(ctx, clause(e, e.items[5], "observers"));
  ctx.vars.pop_back();
  std::set<std::string> names;
  for (size_t i = 6; i < e.items.size(); ++i) {
    if (!e.items[i].is_list || e.items[i].items.empty() ||
        !e.items[i].items[0].is_symbol("choice"))
      fail(e.items[i], "expected a choice");
    ChoiceDef c = build_choice(ctx, e.items[i], t.param_var);
    if (c.name == kArchiveChoiceName)
      fail(e.items[i], "the Archive choice is implicit and may not be user-defined");
    if (!names.insert(c.name).second)
      fail(e.items[i], "duplicate choice '" + c.name + "'");
    t.choices.push_back(std::move(c));
  }
  t.choices.push_back(synthesize_archive(t));
  return t;
}

Module build_module(const SExpr& e) {
  if (e.items.size() < 2) fail(e, "malformed module");
  Module m;
  m.name = ident(e.items[1], "module name");
  std::set<std::string> type_names, value_names;
  for (size_t i = 2; i < e.items.size(); ++i) {
    const SExpr& d = e.items[i];
    if (!d.is_list || d.items.empty() || !d.items[0].is_any_symbol())
      fail(d, "expected a definition");
    BuildCtx ctx;
    ctx.module = m.name;
    const std::string& kw = d.items[0].tok.text;
    if (kw == "record") {
      if (d.items.size() < 3) fail(d, "malformed record");
      RecordDef r;
      r.name = ident(d.items[1], "record name");
      r.params = build_type_params(d.items[2]);
      for (const auto& p : r.params) ctx.tyvars.push_back(p.var);
      std::set<std::string> fields;
      for (size_t j = 3; j < d.items.size(); ++j) {
        const SExpr& f = d.items[j];
        if (!f.is_list || f.items.size() != 2) fail(f, "expected field (name type)");
        std::string fn = ident(f.items[0], "field name");
        if (!fields.insert(fn).second) fail(f, "duplicate field '" + fn + "'");
        r.fields.emplace_back(fn, build_type(ctx, f.items[1]));
      }
      if (!type_names.insert(r.name).second)
        fail(d, "duplicate type '" + r.name + "'");
      m.records.push_back(std::move(r));
    } else if (kw == "variant") {
      if (d.items.size() < 4) fail(d, "variant needs at least one constructor");
      VariantDef v;
      v.name = ident(d.items[1], "variant name");
      v.params = build_type_params(d.items[2]);
      for (const auto& p : v.params) ctx.tyvars.push_back(p.var);
      std::set<std::string> ctors;
      for (size_t j = 3; j < d.items.size(); ++j) {
        const SExpr& f = d.items[j];
        if (!f.is_list || f.items.size() != 2)
          fail(f, "expected constructor (Name type)");
        std::string cn = ident(f.items[0], "constructor name");
        if (!ctors.insert(cn).second) fail(f, "duplicate constructor '" + cn + "'");
        v.constructors.emplace_back(cn, build_type(ctx, f.items[1]));
      }
      if (!type_names.insert(v.name).second)
        fail(d, "duplicate type '" + v.name + "'");
      m.variants.push_back(std::move(v));
    } else if (kw == "value") {
      if (d.items.size() != 4) fail(d, "expected (value name type expr)");
      ValueDef v;
      v.name = ident(d.items[1], "value name");
      v.type = build_type(ctx, d.items[2]);
      v.body = build_expr(ctx, d.items[3]);
      if (!value_names.insert(v.name).second)
        fail(d, "duplicate value '" + v.name + "'");
      m.values.push_back(std::move(v));
    } else if (kw == "template") {
      TemplateDef t = build_template(ctx, d);
      if (!m.find_record(t.name))
        fail(d, "template '" + t.name +
                    "' has no contract-argument record of the same name");
      if (m.find_template(t.name))
        fail(d, "duplicate template '" + t.name + "'");
      m.templates.push_back(std::move(t));
    } else {
      fail(d, "unknown definition keyword '" + kw + "'");
    }
  }
  return m;
}

}  // namespace

Package parse_package(const std::string& text, const std::string& filename) {
  Lexer lex(text, filename);
  Reader reader(lex.run());
  Package pkg;
  std::set<std::string> mod_names;
  for (const SExpr& top : reader.read_all()) {
    if (!top.is_list || top.items.empty() || !top.items[0].is_symbol("module"))
      fail(top, "expected (module Name ...) at top level");
    Module m = build_module(top);
    if (!mod_names.insert(m.name).second)
      fail(top, "duplicate module '" + m.name + "'");
    pkg.modules.push_back(std::move(m));
  }
  canonicalize(pkg);
  pkg.id = hash_package(pkg);
  return pkg;
}

// ---------------------------------------------------------------------------
// Scenario parsing
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> build_party_list(const SExpr& e) {
  if (!e.is_list || e.items.empty()) fail(e, "expected non-empty party list (P...)");
  std::vector<std::string> out;
  for (const auto& p : e.items) out.push_back(ident(p, "party name"));
  return out;
}

Command build_command(BuildCtx& ctx, const SExpr& e,
                      const std::set<std::string>& binds) {
  if (!e.is_list || e.items.empty()) fail(e, "expected a command");
  Command cmd;
  if (e.items[0].is_symbol("create")) {
    size_t i = 1;
    TypePtr ty = expect_type_arg(ctx, e, i, "create");
    auto* named = std::get_if<TNamed>(&ty->node);
    if (!named || named->ref.module.empty())
      fail(e, "create command expects a qualified template name after @");
    if (i + 1 != e.items.size()) fail(e, "expected (create @Mod:T arg)");
    cmd.tag = Command::Tag::Create;
    cmd.template_ref = named->ref;
    cmd.arg = build_expr(ctx, e.items[i]);
    return cmd;
  }
  if (e.items[0].is_symbol("exercise")) {
    size_t i = 1;
    TypePtr ty = expect_type_arg(ctx, e, i, "exercise");
    auto* named = std::get_if<TNamed>(&ty->node);
    if (!named || named->ref.module.empty())
      fail(e, "exercise command expects a qualified template name after @");
    if (i + 3 != e.items.size()) fail(e, "expected (exercise @Mod:T Ch cid arg)");
    cmd.tag = Command::Tag::Exercise;
    cmd.template_ref = named->ref;
    cmd.choice = ident(e.items[i], "choice name");
    cmd.cid_ref = ident(e.items[i + 1], "contract reference");
    if (!binds.count(cmd.cid_ref))
      fail(e.items[i + 1], "reference to unbound name '" + cmd.cid_ref + "'");
    cmd.arg = build_expr(ctx, e.items[i + 2]);
    return cmd;
  }
  fail(e, "command must be create or exercise");
}

TreeSketch build_sketch(const SExpr& e) {
  if (!e.is_list || e.items.size() < 2 || !e.items[0].is_any_symbol() ||
      e.items[1].tok.tag != Token::Tag::Int)
    fail(e, "expected sketch (create N) | (fetch N) | (exercise N child...)");
  TreeSketch s;
  s.cid = e.items[1].tok.ival;
  const std::string& kw = e.items[0].tok.text;
  if (kw == "create") {
    s.tag = TreeSketch::Tag::Create;
  } else if (kw == "fetch") {
    s.tag = TreeSketch::Tag::Fetch;
  } else if (kw == "exercise") {
    s.tag = TreeSketch::Tag::Exercise;
    for (size_t i = 2; i < e.items.size(); ++i)
      s.children.push_back(build_sketch(e.items[i]));
    return s;
  } else {
    fail(e, "unknown sketch node '" + kw + "'");
  }
  if (e.items.size() != 2) fail(e, "leaf sketch takes only a contract number");
  return s;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& filename) {
  Lexer lex(text, filename);
  Reader reader(lex.run());
  auto tops = reader.read_all();
  Scenario sc;
  if (tops.empty()) return sc;
  if (tops.size() != 1 || !tops[0].is_list || tops[0].items.empty() ||
      !tops[0].items[0].is_symbol("scenario"))
    fail(tops[0], "expected a single (scenario ...) form");
  std::set<std::string> binds;
  for (size_t i = 1; i < tops[0].items.size(); ++i) {
    const SExpr& e = tops[0].items[i];
    if (!e.is_list || e.items.empty() || !e.items[0].is_any_symbol())
      fail(e, "expected a scenario step");
    BuildCtx ctx;
    ctx.scenario_mode = true;
    for (const auto& b : binds) ctx.vars.push_back(b);
    ScenarioStep st;
    st.span = e.span;
    const std::string& kw = e.items[0].tok.text;
    if (kw == "submit") {
      if (e.items.size() < 3 || e.items.size() > 4) fail(e, "malformed submit");
      st.tag = ScenarioStep::Tag::Submit;
      st.actors = build_party_list(e.items[1]);
      st.command = build_command(ctx, e.items[2], binds);
      if (e.items.size() == 4) {
        const SExpr& b = e.items[3];
        if (!b.is_list || b.items.size() != 2 || !b.items[0].is_symbol("bind"))
          fail(b, "expected (bind name)");
        st.bind_name = ident(b.items[1], "bind name");
        if (!binds.insert(st.bind_name).second)
          fail(b, "duplicate bind '" + st.bind_name + "'");
      }
    } else if (kw == "submit-must-fail") {
      if (e.items.size() != 4) fail(e, "malformed submit-must-fail");
      st.tag = ScenarioStep::Tag::SubmitMustFail;
      st.actors = build_party_list(e.items[1]);
      st.command = build_command(ctx, e.items[2], binds);
      st.expected_error = ident(e.items[3], "error class");
    } else if (kw == "assert-active") {
      if (e.items.size() != 3) fail(e, "expected (assert-active cid Mod:T)");
      st.tag = ScenarioStep::Tag::AssertActive;
      st.cid_ref = ident(e.items[1], "contract reference");
      if (!binds.count(st.cid_ref))
        fail(e.items[1], "reference to unbound name '" + st.cid_ref + "'");
      st.expected_template = qualify(ctx, e.items[2], symbol(e.items[2], "template"));
      if (st.expected_template.module.empty())
        fail(e.items[2], "expected qualified template name Mod:T");
    } else if (kw == "assert-archived") {
      if (e.items.size() != 2) fail(e, "expected (assert-archived cid)");
      st.tag = ScenarioStep::Tag::AssertArchived;
      st.cid_ref = ident(e.items[1], "contract reference");
      if (!binds.count(st.cid_ref))
        fail(e.items[1], "reference to unbound name '" + st.cid_ref + "'");
    } else if (kw == "project") {
      if (e.items.size() < 2) fail(e, "expected (project P sketch...)");
      st.tag = ScenarioStep::Tag::Project;
      st.party = ident(e.items[1], "party name");
      if (e.items.size() > 2) {
        st.has_sketch = true;
        for (size_t j = 2; j < e.items.size(); ++j)
          st.expected.push_back(build_sketch(e.items[j]));
      }
    } else {
      fail(e, "unknown scenario step '" + kw + "'");
    }
    sc.steps.push_back(std::move(st));
  }
  return sc;
}

}  // namespace lf
