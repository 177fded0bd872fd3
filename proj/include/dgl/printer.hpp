// Canonical ASCII printer with minimal parentheses.
//
// Precedence, loosest first:
//   terms     +,- (left assoc)  <  *  <  unary -  <  ^, '
//   formulas  <->  <  -> (right assoc)  <  |  <  &  <  !, <a>, [a], \exists, \forall
//   games     ++  <  ;  (both right assoc)  <  postfix *, ^d
//
// Printing is the inverse of parsing: parse(pretty(e)) == e for every
// well-formed e.
#pragma once

#include <ostream>
#include <sstream>
#include <string>

#include "dgl/syntax.hpp"

namespace dgl {

namespace print_detail {

enum TermLevel { kSum = 1, kProd = 2, kUnary = 3, kPostfix = 4, kPrimary = 5 };
enum FormulaLevel { kEquiv = 1, kImply = 2, kOr = 3, kAnd = 4, kPrefix = 5 };
enum GameLevel { kChoice = 1, kSeq = 2, kPost = 3 };

inline int level(const Term& t) {
  switch (t.kind()) {
    case TermKind::Plus:
    case TermKind::Minus: return kSum;
    case TermKind::Times: return kProd;
    case TermKind::Neg: return kUnary;
    case TermKind::Power: return kPostfix;
    case TermKind::Number: return denominator(t.value()) == 1 ? kPrimary : kPostfix;
    default: return kPrimary;
  }
}

inline int level(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Equiv: return kEquiv;
    case FormulaKind::Imply: return kImply;
    case FormulaKind::Or: return kOr;
    case FormulaKind::And: return kAnd;
    default: return kPrefix;
  }
}

inline const char* comparison_token(FormulaKind k) {
  switch (k) {
    case FormulaKind::Geq: return ">=";
    case FormulaKind::Gt: return ">";
    case FormulaKind::Leq: return "<=";
    case FormulaKind::Lt: return "<";
    case FormulaKind::Eq: return "=";
    case FormulaKind::Neq: return "!=";
    default: return "?";
  }
}

inline bool formula_ends_with_pred(const Formula& f, int min_level) {
  if (level(f) < min_level) return false;
  switch (f.kind()) {
    case FormulaKind::Pred: return true;
    case FormulaKind::Not: return formula_ends_with_pred(f.left(), kPrefix);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::Diamond:
    case FormulaKind::Box: return formula_ends_with_pred(f.body(), kPrefix);
    case FormulaKind::And: return formula_ends_with_pred(f.right(), kPrefix);
    case FormulaKind::Or: return formula_ends_with_pred(f.right(), kAnd);
    case FormulaKind::Imply:
    case FormulaKind::Equiv: return formula_ends_with_pred(f.right(), kImply);
    default: return false;
  }
}

inline bool game_ends_with_pred(const Game& g, int min_level) {
  switch (g.kind()) {
    case GameKind::Test: return formula_ends_with_pred(g.condition(), kPrefix);
    case GameKind::Choice: return min_level <= kChoice && game_ends_with_pred(g.right(), kChoice);
    case GameKind::Seq: return min_level <= kSeq && game_ends_with_pred(g.right(), kSeq);
    default: return false;
  }
}

class Printer {
 public:
  std::string out;

  void term(const Term& t, int min_level) {
    bool parens = level(t) < min_level;
    if (parens) out += '(';
    term_body(t);
    if (parens) out += ')';
  }

  void formula(const Formula& f, int min_level) {
    bool parens = level(f) < min_level;
    if (parens) out += '(';
    formula_body(f);
    if (parens) out += ')';
  }

  void game(const Game& g, int min_level) {
    int lv = g.kind() == GameKind::Choice ? kChoice : g.kind() == GameKind::Seq ? kSeq : kPost;
    bool braces = lv < min_level;
    if (braces) out += '{';
    game_body(g);
    if (braces) out += '}';
  }

  void number(const Rational& q) { out += q.str(); }

 private:
  void term_body(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: out += t.variable().str(); return;
      case TermKind::Number: number(t.value()); return;
      case TermKind::Apply:
        out += t.symbol().name;
        if (t.symbol().is_dot()) return;
        out += '(';
        if (t.has_arg()) term(t.arg(), kSum);
        out += ')';
        return;
      case TermKind::Plus:
      case TermKind::Minus:
        term(t.left(), kSum);
        out += t.kind() == TermKind::Plus ? '+' : '-';
        term(t.right(), kProd);
        return;
      case TermKind::Times:
        term(t.left(), kProd);
        out += '*';
        term(t.right(), kUnary);
        return;
      case TermKind::Neg:
        out += '-';
        term(t.operand(), kUnary);
        return;
      case TermKind::Power:
        term(t.operand(), kPrimary);
        out += '^';
        out += std::to_string(t.exponent());
        return;
      case TermKind::Differential:
        out += '(';
        term(t.operand(), kSum);
        out += ")'";
        return;
    }
  }

  void formula_body(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Geq:
      case FormulaKind::Gt:
      case FormulaKind::Leq:
      case FormulaKind::Lt:
      case FormulaKind::Eq:
      case FormulaKind::Neq:
        term(f.lhs(), kSum);
        out += comparison_token(f.kind());
        term(f.rhs(), kSum);
        return;
      case FormulaKind::Pred:
        out += f.symbol().name;
        out += '(';
        if (f.has_arg()) term(f.arg(), kSum);
        out += ')';
        return;
      case FormulaKind::True: out += "true"; return;
      case FormulaKind::False: out += "false"; return;
      case FormulaKind::Not:
        out += '!';
        formula(f.left(), kPrefix);
        return;
      case FormulaKind::And:
        formula(f.left(), kAnd);
        out += '&';
        formula(f.right(), kPrefix);
        return;
      case FormulaKind::Or:
        formula(f.left(), kOr);
        out += '|';
        formula(f.right(), kAnd);
        return;
      case FormulaKind::Imply:
        formula(f.left(), kOr);
        out += "->";
        formula(f.right(), kImply);
        return;
      case FormulaKind::Equiv:
        formula(f.left(), kImply);
        out += "<->";
        formula(f.right(), kImply);
        return;
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        out += f.kind() == FormulaKind::Exists ? "\\exists " : "\\forall ";
        out += f.bound().str();
        out += ' ';
        formula(f.body(), kPrefix);
        return;
      case FormulaKind::Diamond:
        // `<?p()>q()` would read as the comparison p()>q(); brace such games.
        out += '<';
        game(f.game(), game_ends_with_pred(f.game(), kChoice) ? kPost + 1 : kChoice);
        out += '>';
        formula(f.body(), kPrefix);
        return;
      case FormulaKind::Box:
        out += '[';
        game(f.game(), kChoice);
        out += ']';
        formula(f.body(), kPrefix);
        return;
    }
  }

  void equations(const std::vector<OdeEquation>& eqs) {
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      if (i) out += ", ";
      out += eqs[i].x.str();
      out += "'=";
      term(eqs[i].rhs, kSum);
    }
  }

  void game_body(const Game& g) {
    switch (g.kind()) {
      case GameKind::Symbol: out += g.symbol().name; return;
      case GameKind::Assign:
        out += g.target().str();
        out += ":=";
        term(g.rhs(), kSum);
        return;
      case GameKind::Ode:
        out += '{';
        equations(g.equations());
        if (g.domain().kind() != FormulaKind::True) {
          out += " & ";
          formula(g.domain(), kEquiv);
        }
        out += '}';
        return;
      case GameKind::Test:
        out += '?';
        formula(g.condition(), kPrefix);
        return;
      case GameKind::Choice:
        game(g.left(), kSeq);
        out += "++";
        game(g.right(), kChoice);
        return;
      case GameKind::Seq:
        game(g.left(), kPost);
        out += ';';
        game(g.right(), kSeq);
        return;
      case GameKind::Loop:
      case GameKind::Dual: {
        const Game& inner = g.operand();
        if (inner.kind() == GameKind::Loop || inner.kind() == GameKind::Dual) {
          game_body(inner);
        } else {
          out += '{';
          game(inner, kChoice);
          out += '}';
        }
        out += g.kind() == GameKind::Loop ? "*" : "^d";
        return;
      }
      case GameKind::DiffGame:
        out += '{';
        equations(g.equations());
        out += " &d ";
        out += g.y().str();
        out += " in (";
        formula(g.y_set(), kEquiv);
        out += ") & ";
        out += g.z().str();
        out += " in (";
        formula(g.z_set(), kEquiv);
        out += ")}";
        return;
    }
  }
};

}  // namespace print_detail

inline std::string pretty(const Term& t) {
  print_detail::Printer p;
  p.term(t, print_detail::kSum);
  return p.out;
}
inline std::string pretty(const Formula& f) {
  print_detail::Printer p;
  p.formula(f, print_detail::kEquiv);
  return p.out;
}
inline std::string pretty(const Game& g) {
  print_detail::Printer p;
  p.game(g, print_detail::kChoice);
  return p.out;
}
inline std::string pretty(const Expression& e) {
  return std::visit([](const auto& x) { return pretty(x); }, e);
}

inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << pretty(t); }
inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << pretty(f); }
inline std::ostream& operator<<(std::ostream& os, const Game& g) { return os << pretty(g); }
inline std::ostream& operator<<(std::ostream& os, const VarSet& s) { return os << s.str(); }

}  // namespace dgl
