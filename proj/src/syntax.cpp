#include "nrc/syntax.hpp"

#include <cctype>
#include <set>

#include "nrc/diagnostics.hpp"
#include "nrc/signature.hpp"

namespace nrc {

namespace {

enum class Tok { kIdent, kInt, kString, kPunct, kEnd };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {
      "for",   "bagfor",  "where", "bagwhere", "do",       "union", "uplus",
      "dedup", "promote", "empty", "bagempty", "true",     "false", "table"};
  return k;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Span span{line_, col_, line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::kEnd, "", span});
        return out;
      }
      char c = src_[pos_];
      Token tok;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        tok = {Tok::kIdent, take_while([](char ch) {
                 return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'';
               }),
               span};
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        std::string text(1, c);
        advance();
        text += take_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
        tok = {Tok::kInt, text, span};
      } else if (c == '"') {
        tok = {Tok::kString, lex_string(span), span};
      } else {
        tok = {Tok::kPunct, lex_punct(span), span};
      }
      tok.span.end_line = line_;
      tok.span.end_col = col_;
      out.push_back(std::move(tok));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_.compare(pos_, 2, "--") == 0) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  template <typename Pred>
  std::string take_while(Pred pred) {
    std::string out;
    while (pos_ < src_.size() && pred(src_[pos_])) {
      out += src_[pos_];
      advance();
    }
    return out;
  }

  std::string lex_string(const Span& span) {
    std::string out = "\"";
    advance();
    while (pos_ < src_.size() && src_[pos_] != '"') {
      if (src_[pos_] == '\n') break;
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
        out += src_[pos_];
        advance();
      }
      out += src_[pos_];
      advance();
    }
    if (pos_ >= src_.size() || src_[pos_] != '"')
      throw Error("ParseError", "unterminated string literal", span);
    advance();
    return out + "\"";
  }

  std::string lex_punct(const Span& span) {
    static const char* const kTwo[] = {"{|", "|}", "<-", "<=", "->", "&&", "||"};
    for (const char* p : kTwo) {
      if (src_.compare(pos_, 2, p) == 0) {
        advance();
        advance();
        return p;
      }
    }
    static const std::string kOne = "(){}<>[],.:;=\\+";
    char c = src_[pos_];
    if (kOne.find(c) == std::string::npos)
      throw Error("ParseError", std::string("unexpected character '") + c + "'", span);
    advance();
    return std::string(1, c);
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

Span join(const Span& a, const Span& b) {
  return Span{a.line, a.col, b.end_line, b.end_col};
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Program program() {
    Program prog;
    while (is_ident("table")) {
      Span start = peek().span;
      next();
      std::string name = ident("table name");
      expect(":");
      Type ty = type();
      expect(";");
      prog.tables.push_back({name, ty, join(start, prev_span_)});
    }
    prog.term = expr();
    expect_end();
    return prog;
  }

  Term whole_term() {
    Term t = expr();
    expect_end();
    return t;
  }

  Type whole_type() {
    Type t = type();
    expect_end();
    return t;
  }

 private:
  const Token& peek(size_t ahead = 0) const {
    size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    prev_span_ = t.span;
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(const char* p, size_t ahead = 0) const {
    return peek(ahead).kind == Tok::kPunct && peek(ahead).text == p;
  }
  bool is_ident(const char* word) const {
    return peek().kind == Tok::kIdent && peek().text == word;
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw Error("ParseError", "expected " + what + ", found " + found, t.span);
  }
  void expect(const char* p) {
    if (!is_punct(p)) fail(std::string("'") + p + "'");
    next();
  }
  void expect_keyword(const char* word) {
    if (!is_ident(word)) fail(std::string("'") + word + "'");
    next();
  }
  void expect_end() {
    if (peek().kind != Tok::kEnd) fail("end of input");
  }
  std::string ident(const char* what) {
    if (peek().kind != Tok::kIdent || keywords().count(peek().text)) fail(what);
    return next().text;
  }

  // Types.
  Type type() {
    Type lhs = type_atom();
    if (is_punct("->")) {
      next();
      return Type::function(lhs, type());
    }
    return lhs;
  }

  Type type_atom() {
    Span start = peek().span;
    if (peek().kind == Tok::kIdent && !keywords().count(peek().text)) {
      std::string name = next().text;
      if (name == "Bool") return Type::boolean();
      if (name == "Int") return Type::integer();
      if (name == "String") return Type::string();
      return Type::atomic(name);
    }
    if (is_punct("(")) {
      next();
      Type t = type();
      expect(")");
      return t;
    }
    if (is_punct("{|")) {
      next();
      Type t = type();
      expect("|}");
      return Type::bag(t);
    }
    if (is_punct("{")) {
      next();
      Type t = type();
      expect("}");
      return Type::set(t);
    }
    if (is_punct("<")) {
      next();
      std::vector<Type::Field> fields;
      if (!is_punct(">")) {
        for (;;) {
          std::string label = ident("field label");
          expect(":");
          fields.emplace_back(label, type());
          if (!is_punct(",")) break;
          next();
        }
      }
      expect(">");
      try {
        return Type::record(std::move(fields));
      } catch (const Error& e) {
        throw Error(e.code(), e.message(), join(start, prev_span_));
      }
    }
    fail("a type");
  }

  // Terms.
  bool at_binder() const {
    return is_punct("\\") || is_ident("for") || is_ident("bagfor") || is_ident("where") ||
           is_ident("bagwhere");
  }

  Term expr() {
    if (at_binder()) return binder();
    return union_level();
  }

  Term operand(Term (Parser::*level)()) {
    if (at_binder()) return binder();
    return (this->*level)();
  }

  Term binder() {
    Span start = peek().span;
    if (is_punct("\\")) {
      next();
      std::string x = ident("a variable");
      expect(":");
      Type ty = type();
      expect(".");
      Term body = expr();
      return Term::lambda(x, ty, body, join(start, prev_span_));
    }
    if (is_ident("for") || is_ident("bagfor")) {
      bool bag = peek().text == "bagfor";
      next();
      expect("(");
      std::vector<std::pair<std::string, Term>> gens;
      for (;;) {
        std::string x = ident("a variable");
        expect("<-");
        gens.emplace_back(x, expr());
        if (!is_punct(",")) break;
        next();
      }
      expect(")");
      Term body = expr();
      Span span = join(start, prev_span_);
      for (auto it = gens.rbegin(); it != gens.rend(); ++it)
        body = bag ? Term::comp_bag(body, it->first, it->second, span)
                   : Term::comp_set(body, it->first, it->second, span);
      return body;
    }
    bool bag = peek().text == "bagwhere";
    next();
    Term cond = expr();
    expect_keyword("do");
    Term body = expr();
    Span span = join(start, prev_span_);
    return bag ? Term::where_bag(cond, body, span) : Term::where_set(cond, body, span);
  }

  Term union_level() {
    Span start = peek().span;
    Term lhs = or_level();
    while (is_ident("union") || is_ident("uplus")) {
      bool bag = next().text == "uplus";
      Term rhs = operand(&Parser::or_level);
      Span span = join(start, prev_span_);
      lhs = bag ? Term::bag_union(lhs, rhs, span) : Term::set_union(lhs, rhs, span);
    }
    return lhs;
  }

  Term infix(const char* prim, Term lhs, Term rhs, const Span& start) {
    return Term::constant(prim, {std::move(lhs), std::move(rhs)}, join(start, prev_span_));
  }

  Term or_level() {
    Span start = peek().span;
    Term lhs = and_level();
    while (is_punct("||")) {
      next();
      lhs = infix("or", lhs, operand(&Parser::and_level), start);
    }
    return lhs;
  }

  Term and_level() {
    Span start = peek().span;
    Term lhs = cmp_level();
    while (is_punct("&&")) {
      next();
      lhs = infix("and", lhs, operand(&Parser::cmp_level), start);
    }
    return lhs;
  }

  Term cmp_level() {
    Span start = peek().span;
    Term lhs = add_level();
    if (is_punct("=") || is_punct("<=")) {
      const char* prim = next().text == "=" ? "eq" : "leq";
      lhs = infix(prim, lhs, operand(&Parser::add_level), start);
    }
    return lhs;
  }

  Term add_level() {
    Span start = peek().span;
    Term lhs = prefix_level();
    while (is_punct("+")) {
      next();
      lhs = infix("plus", lhs, operand(&Parser::prefix_level), start);
    }
    return lhs;
  }

  Term prefix_level() {
    Span start = peek().span;
    if (is_ident("dedup") || is_ident("promote") || is_ident("empty") || is_ident("bagempty")) {
      std::string op = next().text;
      Term arg = operand(&Parser::prefix_level);
      Span span = join(start, prev_span_);
      if (op == "dedup") return Term::dedup(arg, span);
      if (op == "promote") return Term::promote(arg, span);
      if (op == "empty") return Term::empty_test(arg, span);
      return Term::empty_test(Term::dedup(arg, span), span);
    }
    return app_level();
  }

  bool at_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::kInt || t.kind == Tok::kString) return true;
    if (t.kind == Tok::kIdent)
      return !keywords().count(t.text) || t.text == "true" || t.text == "false";
    return is_punct("(") || is_punct("<") || is_punct("{") || is_punct("{|") || is_punct("[");
  }

  Term app_level() {
    Span start = peek().span;
    Term fun = post_level();
    while (at_atom()) {
      Term arg = post_level();
      fun = Term::apply(fun, arg, join(start, prev_span_));
    }
    return fun;
  }

  Term post_level() {
    Span start = peek().span;
    Term t = atom();
    while (is_punct(".")) {
      next();
      std::string label = ident("a field label");
      t = Term::project(t, label, join(start, prev_span_));
    }
    return t;
  }

  std::optional<Type> annotation() {
    if (!is_punct(":")) return std::nullopt;
    next();
    return type_atom();
  }

  Term atom() {
    Span start = peek().span;
    const Token& t = peek();
    if (t.kind == Tok::kInt || t.kind == Tok::kString) {
      next();
      return Term::constant(t.text, {}, t.span);
    }
    if (t.kind == Tok::kIdent) {
      if (t.text == "true" || t.text == "false") {
        next();
        return Term::constant(t.text, {}, t.span);
      }
      std::string name = ident("a term");
      if (signature::is_primitive(name)) {
        expect("(");
        std::vector<Term> args;
        if (!is_punct(")")) {
          for (;;) {
            args.push_back(expr());
            if (!is_punct(",")) break;
            next();
          }
        }
        expect(")");
        return Term::constant(name, std::move(args), join(start, prev_span_));
      }
      return Term::var(name, start);
    }
    if (is_punct("[")) {
      next();
      if (peek().kind != Tok::kIdent && peek().kind != Tok::kInt) fail("a hole index");
      std::string id = next().text;
      expect("]");
      return Term::hole(id, join(start, prev_span_));
    }
    if (is_punct("(")) {
      next();
      Term inner = expr();
      expect(")");
      return inner;
    }
    if (is_punct("<")) {
      next();
      std::vector<std::string> labels;
      std::vector<Term> fields;
      if (!is_punct(">")) {
        for (;;) {
          labels.push_back(ident("a field label"));
          expect("=");
          fields.push_back(expr());
          if (!is_punct(",")) break;
          next();
        }
      }
      expect(">");
      return Term::record(std::move(labels), std::move(fields), join(start, prev_span_));
    }
    if (is_punct("{|")) {
      next();
      if (is_punct("|}")) {
        next();
        auto annot = annotation();
        return Term::empty_bag(annot, join(start, prev_span_));
      }
      Term elem = expr();
      expect("|}");
      return Term::singleton_bag(elem, join(start, prev_span_));
    }
    if (is_punct("{")) {
      next();
      if (is_punct("}")) {
        next();
        auto annot = annotation();
        return Term::empty_set(annot, join(start, prev_span_));
      }
      Term elem = expr();
      expect("}");
      return Term::singleton_set(elem, join(start, prev_span_));
    }
    fail("a term");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  Span prev_span_;
};

// Printer precedence levels; a child printed below its context level is
// parenthesized.
enum Level {
  kBinder = 0,
  kUnion = 1,
  kOr = 2,
  kAnd = 3,
  kCmp = 4,
  kAdd = 5,
  kPrefix = 6,
  kApp = 7,
  kPost = 8,
  kAtom = 9,
};

int infix_level(const Term& t, const char** op) {
  if (t.kind() != TermKind::kConst || t.arity() != 2) return -1;
  const std::string& n = t.name();
  if (n == "or") { *op = " || "; return kOr; }
  if (n == "and") { *op = " && "; return kAnd; }
  if (n == "eq") { *op = " = "; return kCmp; }
  if (n == "leq") { *op = " <= "; return kCmp; }
  if (n == "plus") { *op = " + "; return kAdd; }
  return -1;
}

void print(const Term& t, int ctx, std::string& out);

void print_at(const Term& t, int level, int ctx, std::string& out,
              void (*body)(const Term&, std::string&)) {
  bool paren = level < ctx;
  if (paren) out += "(";
  body(t, out);
  if (paren) out += ")";
}

int level_of(const Term& t) {
  const char* op = nullptr;
  switch (t.kind()) {
    case TermKind::kLambda:
    case TermKind::kCompSet:
    case TermKind::kCompBag:
    case TermKind::kWhereSet:
    case TermKind::kWhereBag:
      return kBinder;
    case TermKind::kUnion:
    case TermKind::kDisjUnion:
      return kUnion;
    case TermKind::kConst: {
      int l = infix_level(t, &op);
      return l >= 0 ? l : kAtom;
    }
    case TermKind::kDedup:
    case TermKind::kPromote:
    case TermKind::kEmptyTest:
      return kPrefix;
    case TermKind::kApply:
      return kApp;
    case TermKind::kProject:
      return kPost;
    default:
      return kAtom;
  }
}

void print_body(const Term& t, std::string& out) {
  const char* op = nullptr;
  switch (t.kind()) {
    case TermKind::kVar:
      out += t.name();
      return;
    case TermKind::kHole:
      out += "[" + t.name() + "]";
      return;
    case TermKind::kConst: {
      int l = infix_level(t, &op);
      if (l >= 0) {
        // Left-associative except comparisons, which do not chain.
        int left = l == kCmp ? kAdd : l;
        int right = l == kCmp ? kAdd : l + 1;
        print(t.kid(0), left, out);
        out += op;
        print(t.kid(1), right, out);
        return;
      }
      out += t.name();
      if (t.arity() > 0) {
        out += "(";
        for (size_t k = 0; k < t.arity(); ++k) {
          if (k > 0) out += ", ";
          print(t.kid(k), kBinder, out);
        }
        out += ")";
      }
      return;
    }
    case TermKind::kRecord:
      out += "<";
      for (size_t k = 0; k < t.arity(); ++k) {
        if (k > 0) out += ", ";
        out += t.labels()[k] + " = ";
        print(t.kid(k), kBinder, out);
      }
      out += ">";
      return;
    case TermKind::kProject:
      print(t.kid(0), kPost, out);
      out += "." + t.name();
      return;
    case TermKind::kLambda:
      out += "\\" + t.name() + ":" + t.annot()->to_string() + ". ";
      print(t.kid(0), kBinder, out);
      return;
    case TermKind::kApply:
      print(t.kid(0), kApp, out);
      out += " ";
      print(t.kid(1), kPost, out);
      return;
    case TermKind::kEmptySet:
      out += "{}";
      if (t.annot()) out += ":" + t.annot()->to_string();
      return;
    case TermKind::kEmptyBag:
      out += "{||}";
      if (t.annot()) out += ":" + t.annot()->to_string();
      return;
    case TermKind::kSingletonSet:
      out += "{";
      print(t.kid(0), kBinder, out);
      out += "}";
      return;
    case TermKind::kSingletonBag:
      out += "{|";
      print(t.kid(0), kBinder, out);
      out += "|}";
      return;
    case TermKind::kUnion:
    case TermKind::kDisjUnion:
      print(t.kid(0), kUnion, out);
      out += t.kind() == TermKind::kUnion ? " union " : " uplus ";
      print(t.kid(1), kOr, out);
      return;
    case TermKind::kCompSet:
    case TermKind::kCompBag:
      out += t.kind() == TermKind::kCompSet ? "for (" : "bagfor (";
      out += t.name() + " <- ";
      print(t.kid(1), kBinder, out);
      out += ") ";
      print(t.kid(0), kBinder, out);
      return;
    case TermKind::kWhereSet:
    case TermKind::kWhereBag:
      out += t.kind() == TermKind::kWhereSet ? "where " : "bagwhere ";
      print(t.kid(0), kUnion, out);
      out += " do ";
      print(t.kid(1), kBinder, out);
      return;
    case TermKind::kEmptyTest:
      out += "empty ";
      print(t.kid(0), kPrefix, out);
      return;
    case TermKind::kDedup:
      out += "dedup ";
      print(t.kid(0), kPrefix, out);
      return;
    case TermKind::kPromote:
      out += "promote ";
      print(t.kid(0), kPrefix, out);
      return;
  }
}

void print(const Term& t, int ctx, std::string& out) {
  print_at(t, level_of(t), ctx, out, &print_body);
}

}  // namespace

Type parse_type(std::string_view text) { return Parser(text).whole_type(); }

Term parse_term(std::string_view text) { return Parser(text).whole_term(); }

Program parse_program(std::string_view text) { return Parser(text).program(); }

std::string print_term(const Term& t) {
  std::string out;
  print(t, kBinder, out);
  return out;
}

}  // namespace nrc
