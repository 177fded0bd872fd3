// Recursive-descent parser for the ASCII syntax accepted by the printer.
//
//   term     x  x'  3  1/2  0.25  .  f()  f(t)  t+t  t-t  t*t  -t  t^2  (t)'
//   formula  t>=t t>t t<=t t<t t=t t!=t  p() p(t)  true false  !F  F&F  F|F
//            F->F  F<->F  \exists x F  \forall x F  <G>F  [G]F
//   game     a  x:=t  {x'=t, y'=t & F}  ?F  G++G  G;G  {G}*  {G}^d
//            {x'=t &d y in (F) & z in (F)}
//
// `#` starts a comment that runs to the end of the line.
#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dgl/syntax.hpp"
#include "dgl/well_formed.hpp"

namespace dgl {

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, SourceSpan span, std::vector<std::string> expected)
      : std::runtime_error(msg), span_(span), expected_(std::move(expected)) {}
  const SourceSpan& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::vector<std::string> expected_;
};

class WellFormedError : public std::runtime_error {
 public:
  explicit WellFormedError(std::vector<Violation> v)
      : std::runtime_error(describe(v)), violations_(std::move(v)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string describe(const std::vector<Violation>& v) {
    std::string s = "ill-formed expression:";
    for (const auto& x : v) s += " [" + path_string(x.path) + "] " + x.message + ";";
    return s;
  }
  std::vector<Violation> violations_;
};

namespace parse_detail {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name (without prime), punctuation, number source
  bool primed = false;
  Rational value;
  SourceSpan span;
};

inline Rational parse_number(std::string_view digits, std::string_view frac, std::string_view den) {
  using boost::multiprecision::cpp_int;
  cpp_int num{std::string(digits)};
  cpp_int scale = 1;
  for (char c : frac) {
    num = num * 10 + (c - '0');
    scale *= 10;
  }
  Rational q(num, scale);
  if (!den.empty()) q /= Rational(cpp_int{std::string(den)});
  return q;
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_digit = [&](std::size_t k) { return k < src.size() && std::isdigit(static_cast<unsigned char>(src[k])); };
  auto is_space = [&](std::size_t k) { return k >= src.size() || std::isspace(static_cast<unsigned char>(src[k])); };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.span.start = i;
    if (std::isalpha(c)) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      if (j < src.size() && src[j] == '\'') {
        t.primed = true;
        ++j;
      }
      i = j;
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (is_digit(j)) ++j;
      std::string_view whole = src.substr(i, j - i), frac, den;
      if (j < src.size() && src[j] == '.' && is_digit(j + 1)) {
        std::size_t k = j + 1;
        while (is_digit(k)) ++k;
        frac = src.substr(j + 1, k - j - 1);
        j = k;
      }
      if (j < src.size() && src[j] == '/' && is_digit(j + 1)) {
        std::size_t k = j + 1;
        while (is_digit(k)) ++k;
        den = src.substr(j + 1, k - j - 1);
        if (std::all_of(den.begin(), den.end(), [](char d) { return d == '0'; }))
          throw ParseError("zero denominator in number literal", {i, k}, {"nonzero denominator"});
        j = k;
      }
      t.kind = Tok::Number;
      t.text = std::string(src.substr(i, j - i));
      t.value = parse_number(whole, frac, den);
      i = j;
    } else if (c == '\\') {
      std::size_t j = i + 1;
      while (j < src.size() && std::isalpha(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Punct;
      t.text = std::string(src.substr(i, j - i));
      if (t.text != "\\exists" && t.text != "\\forall")
        throw ParseError("unknown keyword '" + t.text + "'", {i, j}, {"\\exists", "\\forall"});
      i = j;
    } else {
      static const char* const multi[] = {"<->", "->", "++", ">=", "<=", "!=", ":=", "~>"};
      t.kind = Tok::Punct;
      bool matched = false;
      for (const char* m : multi) {
        std::string_view mv(m);
        if (src.substr(i, mv.size()) == mv) {
          t.text = std::string(mv);
          matched = true;
          break;
        }
      }
      if (!matched && c == '&' && i + 1 < src.size() && src[i + 1] == 'd' && is_space(i + 2)) {
        t.text = "&d";
        matched = true;
      }
      if (!matched) {
        static const std::string singles = "+-*^'().,;{}[]<>=!&|?";
        if (singles.find(static_cast<char>(c)) == std::string::npos)
          throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", {i, i + 1}, {});
        t.text = std::string(1, static_cast<char>(c));
      }
      i += t.text.size();
    }
    t.span.end = i;
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.span = {src.size(), src.size()};
  out.push_back(end);
  return out;
}

struct Backtrack {};

inline bool comparison_token(const std::string& s, FormulaKind& k) {
  if (s == ">=") k = FormulaKind::Geq;
  else if (s == ">") k = FormulaKind::Gt;
  else if (s == "<=") k = FormulaKind::Leq;
  else if (s == "<") k = FormulaKind::Lt;
  else if (s == "=") k = FormulaKind::Eq;
  else if (s == "!=") k = FormulaKind::Neq;
  else return false;
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), toks_(tokenize(src)) {}

  std::size_t pos = 0;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos + ahead, toks_.size() - 1)]; }
  bool at_punct(const char* p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Punct && t.text == p;
  }
  bool at_end() const { return peek().kind == Tok::End; }

  [[noreturn]] void fail(const std::string& expected) {
    std::size_t at = peek().span.start;
    if (!have_failure_ || at > furthest_) {
      furthest_ = at;
      furthest_index_ = pos;
      expected_.clear();
      have_failure_ = true;
    }
    if (at == furthest_) expected_.insert(expected);
    throw Backtrack{};
  }

  void expect(const char* p) {
    if (!at_punct(p)) fail(std::string("'") + p + "'");
    ++pos;
  }
  bool accept(const char* p) {
    if (!at_punct(p)) return false;
    ++pos;
    return true;
  }
  void expect_end() {
    if (!at_end()) fail("end of input");
  }

  /// Runs `f` and converts an internal failure into a ParseError that
  /// reports the furthest position reached.
  template <class F>
  auto run(F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const Backtrack&) {
      const Token& t = toks_[std::min(furthest_index_, toks_.size() - 1)];
      std::string found = t.kind == Tok::End ? "end of input" : "'" + std::string(src_.substr(t.span.start, t.span.end - t.span.start)) + "'";
      std::vector<std::string> exp(expected_.begin(), expected_.end());
      std::string msg = "parse error at offset " + std::to_string(t.span.start) + ": found " + found + ", expected ";
      for (std::size_t i = 0; i < exp.size(); ++i) msg += (i ? " or " : "") + exp[i];
      throw ParseError(msg, t.span, exp);
    }
  }

  // ---- terms ----

  Term term() {
    Term t = product();
    for (;;) {
      if (accept("+")) t = Term::plus(t, product());
      else if (accept("-")) t = Term::minus(t, product());
      else return t;
    }
  }

  Term product() {
    Term t = unary_term();
    while (accept("*")) t = Term::times(t, unary_term());
    return t;
  }

  Term unary_term() {
    if (accept("-")) return Term::neg(unary_term());
    return postfix_term();
  }

  Term postfix_term() {
    Term t = primary_term();
    for (;;) {
      if (accept("^")) {
        const Token& n = peek();
        if (n.kind != Tok::Number || denominator(n.value) != 1 || n.text.find_first_of("./") != std::string::npos)
          fail("integer exponent");
        if (n.value > Rational(1000000)) fail("exponent at most 1000000");
        t = Term::power(t, static_cast<unsigned>(numerator(n.value)));
        ++pos;
      } else if (accept("'")) {
        t = Term::differential(t);
      } else {
        return t;
      }
    }
  }

  Term primary_term() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      ++pos;
      return Term::number(t.value);
    }
    if (accept(".")) return Term::dot();
    if (t.kind == Tok::Ident && !reserved_word(t.text)) {
      ++pos;
      if (!t.primed && accept("(")) {
        if (accept(")")) return Term::apply(Symbol::function(t.text, 0));
        Term arg = term();
        expect(")");
        return Term::apply(Symbol::function(t.text, 1), arg);
      }
      return Term::var(Variable(t.text, t.primed ? 1 : 0));
    }
    if (accept("(")) {
      Term inner = term();
      expect(")");
      return inner;
    }
    fail("term");
  }

  // ---- formulas ----

  Formula formula() {
    Formula f = implication();
    if (accept("<->")) f = Formula::equiv(f, implication());
    return f;
  }

  Formula implication() {
    Formula f = disjunction();
    if (accept("->")) return Formula::imply(f, implication());
    return f;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept("|")) f = Formula::disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary_formula();
    while (accept("&")) f = Formula::conj(f, unary_formula());
    return f;
  }

  Formula unary_formula() {
    if (accept("!")) return Formula::negate(unary_formula());
    if (accept("<")) {
      Game g = game();
      expect(">");
      return Formula::diamond(g, unary_formula());
    }
    if (accept("[")) {
      Game g = game();
      expect("]");
      return Formula::box(g, unary_formula());
    }
    if (at_punct("\\exists") || at_punct("\\forall")) {
      FormulaKind k = peek().text == "\\exists" ? FormulaKind::Exists : FormulaKind::Forall;
      ++pos;
      Variable x = variable();
      return Formula::quantifier(k, x, unary_formula());
    }
    return atom();
  }

  Variable variable() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || reserved_word(t.text)) fail("variable");
    ++pos;
    return Variable(t.text, t.primed ? 1 : 0);
  }

  Formula atom() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "true" && !t.primed) {
      ++pos;
      return Formula::truth();
    }
    if (t.kind == Tok::Ident && t.text == "false" && !t.primed) {
      ++pos;
      return Formula::falsity();
    }
    if (at_punct("(")) {
      std::size_t save = pos;
      try {
        Term lhs = term();
        if (auto f = comparison_rest(lhs)) return *f;
      } catch (const Backtrack&) {
      }
      pos = save;
      expect("(");
      Formula f = formula();
      expect(")");
      return f;
    }
    Term lhs = term();
    if (auto f = comparison_rest(lhs)) return *f;
    if (lhs.kind() == TermKind::Apply && !lhs.symbol().is_dot()) {
      Symbol p = Symbol::predicate(lhs.symbol().name, lhs.symbol().arity);
      return lhs.has_arg() ? Formula::pred(p, lhs.arg()) : Formula::pred(p);
    }
    fail("comparison operator");
  }

  std::optional<Formula> comparison_rest(const Term& lhs) {
    FormulaKind k;
    if (peek().kind != Tok::Punct || !comparison_token(peek().text, k)) {
      // Record what would have been acceptable here.
      std::size_t at = peek().span.start;
      if (!have_failure_ || at >= furthest_) {
        if (!have_failure_ || at > furthest_) expected_.clear();
        furthest_ = at;
        furthest_index_ = pos;
        have_failure_ = true;
        expected_.insert("comparison operator");
      }
      return std::nullopt;
    }
    ++pos;
    return Formula::compare(k, lhs, term());
  }

  // ---- games ----

  Game game() {
    Game g = sequence();
    if (accept("++")) return Game::choice(g, game());
    return g;
  }

  Game sequence() {
    Game g = postfix_game();
    if (accept(";")) return Game::seq(g, sequence());
    return g;
  }

  Game postfix_game() {
    bool braced = at_punct("{");
    Game g = atomic_game();
    if (!braced) return g;
    for (;;) {
      if (accept("*")) {
        g = Game::loop(g);
      } else if (at_punct("^") && peek(1).kind == Tok::Ident && peek(1).text == "d" && !peek(1).primed) {
        pos += 2;
        g = Game::dual(g);
      } else {
        return g;
      }
    }
  }

  Game atomic_game() {
    if (accept("{")) {
      if (peek().kind == Tok::Ident && peek().primed && at_punct("=", 1)) return differential_system();
      Game g = game();
      expect("}");
      return g;
    }
    if (accept("?")) return Game::test(unary_formula());
    const Token& t = peek();
    if (t.kind == Tok::Ident && !reserved_word(t.text)) {
      ++pos;
      if (accept(":=")) return Game::assign(Variable(t.text, t.primed ? 1 : 0), term());
      if (t.primed) fail("':='");
      return Game::symbol(t.text);
    }
    fail("game");
  }

  /// After the opening brace: `x'=t, ... (& F)? }` or the differential game form.
  Game differential_system() {
    std::vector<OdeEquation> eqs;
    do {
      const Token& t = peek();
      if (t.kind != Tok::Ident || !t.primed) fail("differential variable");
      ++pos;
      expect("=");
      eqs.push_back({Variable(t.text, 0), term()});
    } while (accept(","));
    if (accept("&d")) {
      Variable y = variable();
      keyword("in");
      expect("(");
      Formula ys = formula();
      expect(")");
      expect("&");
      Variable z = variable();
      keyword("in");
      expect("(");
      Formula zs = formula();
      expect(")");
      expect("}");
      return Game::diff_game(std::move(eqs), y, ys, z, zs);
    }
    Formula domain = Formula::truth();
    if (accept("&")) domain = formula();
    expect("}");
    return Game::ode(std::move(eqs), domain);
  }

  void keyword(const char* k) {
    if (peek().kind != Tok::Ident || peek().text != k || peek().primed) fail(std::string("'") + k + "'");
    ++pos;
  }

 private:
  std::string_view src_;
  std::vector<Token> toks_;
  bool have_failure_ = false;
  std::size_t furthest_ = 0;
  std::size_t furthest_index_ = 0;
  std::set<std::string> expected_;
};

template <class T>
T checked(T e) {
  auto v = well_formed(e);
  if (!v.empty()) throw WellFormedError(std::move(v));
  return e;
}

}  // namespace parse_detail

inline Term parse_term(std::string_view text) {
  parse_detail::Parser p(text);
  return parse_detail::checked(p.run([&] {
    Term t = p.term();
    p.expect_end();
    return t;
  }));
}

inline Formula parse_formula(std::string_view text) {
  parse_detail::Parser p(text);
  return parse_detail::checked(p.run([&] {
    Formula f = p.formula();
    p.expect_end();
    return f;
  }));
}

inline Game parse_game(std::string_view text) {
  parse_detail::Parser p(text);
  return parse_detail::checked(p.run([&] {
    Game g = p.game();
    p.expect_end();
    return g;
  }));
}

enum class ExprKind { Term, Formula, Game };

inline Expression parse_expression(std::string_view text, ExprKind kind) {
  switch (kind) {
    case ExprKind::Term: return parse_term(text);
    case ExprKind::Formula: return parse_formula(text);
    case ExprKind::Game: return parse_game(text);
  }
  return parse_formula(text);
}

}  // namespace dgl
