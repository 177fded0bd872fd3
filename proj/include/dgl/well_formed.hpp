// Structural invariants of terms, formulas and games.
#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "dgl/syntax.hpp"

namespace dgl {

/// One invariant violation. `path` lists child indices from the root.
struct Violation {
  std::vector<int> path;
  std::string message;
};

inline std::string path_string(const std::vector<int>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(path[i]);
  }
  return s.empty() ? "root" : s;
}

inline bool reserved_word(const std::string& s) { return s == "true" || s == "false" || s == "in"; }

inline bool valid_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }) &&
         !reserved_word(s);
}

namespace wf_detail {

class Checker {
 public:
  std::vector<Violation> out;

  void term(const Term& t, bool in_differential) {
    switch (t.kind()) {
      case TermKind::Var:
        variable(t.variable());
        if (in_differential && t.variable().differential())
          report("differential of differential variable " + t.variable().str());
        return;
      case TermKind::Number:
        if (t.value() < 0) report("negative number literal; use unary minus");
        return;
      case TermKind::Apply: {
        const Symbol& f = t.symbol();
        if (f.kind != SymbolKind::Function) report("applied symbol " + f.name + " is not a function symbol");
        symbol_name(f);
        if (f.is_dot() && t.has_arg()) report("placeholder . takes no argument");
        if (f.arity != (t.has_arg() ? 1 : 0))
          report("arity mismatch for " + f.name + ": declared " + std::to_string(f.arity));
        if (f.arity < 0 || f.arity > 1) report("arity of " + f.name + " must be 0 or 1");
        if (t.has_arg()) child(0, [&] { term(t.arg(), in_differential); });
        return;
      }
      case TermKind::Plus:
      case TermKind::Minus:
      case TermKind::Times:
        child(0, [&] { term(t.left(), in_differential); });
        child(1, [&] { term(t.right(), in_differential); });
        return;
      case TermKind::Neg:
      case TermKind::Power: child(0, [&] { term(t.operand(), in_differential); }); return;
      case TermKind::Differential:
        if (in_differential) report("nested differential");
        child(0, [&] { term(t.operand(), true); });
        return;
    }
  }

  void formula(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Geq:
      case FormulaKind::Gt:
      case FormulaKind::Leq:
      case FormulaKind::Lt:
      case FormulaKind::Eq:
      case FormulaKind::Neq:
        child(0, [&] { term(f.lhs(), false); });
        child(1, [&] { term(f.rhs(), false); });
        return;
      case FormulaKind::Pred: {
        const Symbol& p = f.symbol();
        if (p.kind != SymbolKind::Predicate) report("symbol " + p.name + " is not a predicate symbol");
        symbol_name(p);
        if (p.arity != (f.has_arg() ? 1 : 0))
          report("arity mismatch for " + p.name + ": declared " + std::to_string(p.arity));
        if (f.has_arg()) child(0, [&] { term(f.arg(), false); });
        return;
      }
      case FormulaKind::True:
      case FormulaKind::False: return;
      case FormulaKind::Not: child(0, [&] { formula(f.left()); }); return;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Imply:
      case FormulaKind::Equiv:
        child(0, [&] { formula(f.left()); });
        child(1, [&] { formula(f.right()); });
        return;
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        variable(f.bound());
        child(0, [&] { formula(f.body()); });
        return;
      case FormulaKind::Diamond:
      case FormulaKind::Box:
        child(0, [&] { game(f.game()); });
        child(1, [&] { formula(f.body()); });
        return;
    }
  }

  void game(const Game& g) {
    switch (g.kind()) {
      case GameKind::Symbol:
        if (g.symbol().kind != SymbolKind::Game) report("symbol " + g.symbol().name + " is not a game symbol");
        if (g.symbol().arity != 0) report("game symbol " + g.symbol().name + " must have arity 0");
        symbol_name(g.symbol());
        return;
      case GameKind::Assign:
        variable(g.target());
        child(0, [&] { term(g.rhs(), false); });
        return;
      case GameKind::Ode:
        equations(g.equations());
        child(static_cast<int>(g.equations().size()), [&] { formula(g.domain()); });
        return;
      case GameKind::Test: child(0, [&] { formula(g.condition()); }); return;
      case GameKind::Choice:
      case GameKind::Seq:
        child(0, [&] { game(g.left()); });
        child(1, [&] { game(g.right()); });
        return;
      case GameKind::Loop:
      case GameKind::Dual: child(0, [&] { game(g.operand()); }); return;
      case GameKind::DiffGame: {
        equations(g.equations());
        variable(g.y());
        variable(g.z());
        if (g.y().differential() || g.z().differential()) report("differential game controls must have order 0");
        if (g.y() == g.z()) report("differential game controls must be distinct");
        for (const auto& e : g.equations())
          if (e.x == g.y() || e.x == g.z()) report("control " + e.x.str() + " is also an evolving variable");
        int n = static_cast<int>(g.equations().size());
        child(n, [&] {
          formula(g.y_set());
          control_set(g.y_set(), g.y(), "Y");
        });
        child(n + 1, [&] {
          formula(g.z_set());
          control_set(g.z_set(), g.z(), "Z");
        });
        return;
      }
    }
  }

 private:
  std::vector<int> path_;

  template <class F>
  void child(int i, F&& f) {
    path_.push_back(i);
    f();
    path_.pop_back();
  }

  void report(std::string msg) { out.push_back({path_, std::move(msg)}); }

  void variable(const Variable& v) {
    if (!valid_identifier(v.name)) report("invalid variable name '" + v.name + "'");
    if (v.order < 0 || v.order > 1) report("variable " + v.name + " has unsupported differential order");
  }

  void symbol_name(const Symbol& s) {
    if (!s.is_dot() && !valid_identifier(s.name)) report("invalid symbol name '" + s.name + "'");
  }

  void equations(const std::vector<OdeEquation>& eqs) {
    if (eqs.empty()) report("differential equation system is empty");
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      child(static_cast<int>(i), [&] {
        variable(eqs[i].x);
        if (eqs[i].x.differential()) report("left-hand side " + eqs[i].x.str() + "' would be a second derivative");
        for (std::size_t j = 0; j < i; ++j)
          if (eqs[j].x == eqs[i].x) report("duplicate left-hand side " + eqs[i].x.str());
        term(eqs[i].rhs, false);
      });
    }
  }

  void control_set(const Formula& f, const Variable& control, const char* label);
};

}  // namespace wf_detail

/// Returns every invariant violation in `e` (empty means well-formed).
inline std::vector<Violation> well_formed(const Term& t) {
  wf_detail::Checker c;
  c.term(t, false);
  return c.out;
}
inline std::vector<Violation> well_formed(const Formula& f) {
  wf_detail::Checker c;
  c.formula(f);
  return c.out;
}
inline std::vector<Violation> well_formed(const Game& g) {
  wf_detail::Checker c;
  c.game(g);
  return c.out;
}
inline std::vector<Violation> well_formed(const Expression& e) {
  return std::visit([](const auto& x) { return well_formed(x); }, e);
}

}  // namespace dgl

#include "dgl/static_semantics.hpp"

namespace dgl::wf_detail {

inline void Checker::control_set(const Formula& f, const Variable& control, const char* label) {
  VarSet fv = free_vars(f);
  if (!subset_of(fv, VarSet{control}))
    report(std::string("FV(") + label + ") = " + fv.str() + " is not contained in {" + control.str() + "}");
}

}  // namespace dgl::wf_detail
