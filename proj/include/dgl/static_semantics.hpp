// Syntactic free, bound and must-bound variables, signatures and variable
// occurrences.
#pragma once

#include <set>
#include <variant>

#include "dgl/syntax.hpp"
#include "dgl/varset.hpp"

namespace dgl {

/// Precise mode subtracts must-bound variables of a game from the free
/// variables of what follows it; coarse mode keeps them (still sound, less
/// precise).
enum class FvMode { Precise, Coarse };

struct GameInfo {
  VarSet fv;
  VarSet bv;
  VarSet mbv;
};

namespace static_detail {

inline VarSet differential_closure(const VarSet& s) {
  VarSet out = s;
  for (const auto& v : s.members()) out.insert(v.prime());
  return out;
}

inline VarSet fv_term(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var: return VarSet{t.variable()};
    case TermKind::Number: return {};
    case TermKind::Apply: return t.has_arg() ? fv_term(t.arg()) : VarSet{};
    case TermKind::Plus:
    case TermKind::Minus:
    case TermKind::Times: return fv_term(t.left()) | fv_term(t.right());
    case TermKind::Neg:
    case TermKind::Power: return fv_term(t.operand());
    case TermKind::Differential: return differential_closure(fv_term(t.operand()));
  }
  return {};
}

inline GameInfo game_info(const Game& g, FvMode mode);

inline VarSet fv_formula(const Formula& f, FvMode mode) {
  switch (f.kind()) {
    case FormulaKind::Geq:
    case FormulaKind::Gt:
    case FormulaKind::Leq:
    case FormulaKind::Lt:
    case FormulaKind::Eq:
    case FormulaKind::Neq: return fv_term(f.lhs()) | fv_term(f.rhs());
    case FormulaKind::Pred: return f.has_arg() ? fv_term(f.arg()) : VarSet{};
    case FormulaKind::True:
    case FormulaKind::False: return {};
    case FormulaKind::Not: return fv_formula(f.left(), mode);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imply:
    case FormulaKind::Equiv: return fv_formula(f.left(), mode) | fv_formula(f.right(), mode);
    case FormulaKind::Exists:
    case FormulaKind::Forall: return fv_formula(f.body(), mode).erase(f.bound());
    case FormulaKind::Diamond:
    case FormulaKind::Box: {
      GameInfo gi = game_info(f.game(), mode);
      VarSet post = fv_formula(f.body(), mode);
      return gi.fv | (mode == FvMode::Precise ? post - gi.mbv : post);
    }
  }
  return {};
}

inline VarSet equation_vars(const std::vector<OdeEquation>& eqs) {
  VarSet s;
  for (const auto& e : eqs) s.insert(e.x);
  return s;
}

inline GameInfo game_info(const Game& g, FvMode mode) {
  switch (g.kind()) {
    case GameKind::Symbol: return {VarSet::all(), VarSet::all(), {}};
    case GameKind::Assign: {
      VarSet x{g.target()};
      return {fv_term(g.rhs()), x, x};
    }
    case GameKind::Ode: {
      VarSet fv = equation_vars(g.equations());
      for (const auto& e : g.equations()) fv |= fv_term(e.rhs);
      fv |= fv_formula(g.domain(), mode);
      VarSet bv = differential_closure(equation_vars(g.equations()));
      return {fv, bv, bv};
    }
    case GameKind::Test: return {fv_formula(g.condition(), mode), {}, {}};
    case GameKind::Choice: {
      GameInfo a = game_info(g.left(), mode);
      GameInfo b = game_info(g.right(), mode);
      return {a.fv | b.fv, a.bv | b.bv, a.mbv & b.mbv};
    }
    case GameKind::Seq: {
      GameInfo a = game_info(g.left(), mode);
      GameInfo b = game_info(g.right(), mode);
      VarSet fv = a.fv | (mode == FvMode::Precise ? b.fv - a.mbv : b.fv);
      return {fv, a.bv | b.bv, a.mbv | b.mbv};
    }
    case GameKind::Loop: {
      GameInfo a = game_info(g.operand(), mode);
      return {a.fv, a.bv, {}};
    }
    case GameKind::Dual: return game_info(g.operand(), mode);
    case GameKind::DiffGame: {
      VarSet fv = equation_vars(g.equations());
      for (const auto& e : g.equations()) fv |= fv_term(e.rhs);
      fv |= fv_formula(g.y_set(), mode) | fv_formula(g.z_set(), mode);
      VarSet bv = equation_vars(g.equations());
      bv.insert(g.y()).insert(g.z());
      bv = differential_closure(bv);
      return {fv, bv, bv};
    }
  }
  return {};
}

}  // namespace static_detail

inline VarSet free_vars(const Term& t) { return static_detail::fv_term(t); }
inline VarSet free_vars(const Formula& f, FvMode mode = FvMode::Precise) {
  return static_detail::fv_formula(f, mode);
}
inline GameInfo game_info(const Game& g, FvMode mode = FvMode::Precise) {
  return static_detail::game_info(g, mode);
}
inline VarSet free_vars(const Game& g, FvMode mode = FvMode::Precise) { return game_info(g, mode).fv; }
inline VarSet free_vars(const Expression& e, FvMode mode = FvMode::Precise) {
  struct V {
    FvMode mode;
    VarSet operator()(const Term& t) const { return free_vars(t); }
    VarSet operator()(const Formula& f) const { return free_vars(f, mode); }
    VarSet operator()(const Game& g) const { return free_vars(g, mode); }
  };
  return std::visit(V{mode}, e);
}

/// Bound variables of a game. Computed without free variables, so cheap.
inline VarSet bound_vars(const Game& g) {
  switch (g.kind()) {
    case GameKind::Symbol: return VarSet::all();
    case GameKind::Assign: return VarSet{g.target()};
    case GameKind::Ode: return static_detail::differential_closure(static_detail::equation_vars(g.equations()));
    case GameKind::Test: return {};
    case GameKind::Choice:
    case GameKind::Seq: return bound_vars(g.left()) | bound_vars(g.right());
    case GameKind::Loop:
    case GameKind::Dual: return bound_vars(g.operand());
    case GameKind::DiffGame: {
      VarSet bv = static_detail::equation_vars(g.equations());
      bv.insert(g.y()).insert(g.z());
      return static_detail::differential_closure(bv);
    }
  }
  return {};
}

inline VarSet must_bound_vars(const Game& g) {
  switch (g.kind()) {
    case GameKind::Symbol:
    case GameKind::Test:
    case GameKind::Loop: return {};
    case GameKind::Assign:
    case GameKind::Ode:
    case GameKind::DiffGame: return bound_vars(g);
    case GameKind::Choice: return must_bound_vars(g.left()) & must_bound_vars(g.right());
    case GameKind::Seq: return must_bound_vars(g.left()) | must_bound_vars(g.right());
    case GameKind::Dual: return must_bound_vars(g.operand());
  }
  return {};
}

// ---- signature and occurrences --------------------------------------------

using Signature = std::set<Symbol>;

namespace static_detail {

struct Collector {
  Signature* sig = nullptr;
  VarSet* vars = nullptr;
  bool* dot = nullptr;

  void var(const Variable& v) const {
    if (vars) vars->insert(v);
  }
  void sym(const Symbol& s) const {
    if (s.is_dot()) {
      if (dot) *dot = true;
    } else if (sig) {
      sig->insert(s);
    }
  }

  void term(const Term& t) const {
    switch (t.kind()) {
      case TermKind::Var: var(t.variable()); return;
      case TermKind::Number: return;
      case TermKind::Apply:
        sym(t.symbol());
        if (t.has_arg()) term(t.arg());
        return;
      case TermKind::Plus:
      case TermKind::Minus:
      case TermKind::Times:
        term(t.left());
        term(t.right());
        return;
      case TermKind::Neg:
      case TermKind::Power:
      case TermKind::Differential: term(t.operand()); return;
    }
  }

  void formula(const Formula& f) const {
    switch (f.kind()) {
      case FormulaKind::Pred:
        sym(f.symbol());
        if (f.has_arg()) term(f.arg());
        return;
      case FormulaKind::True:
      case FormulaKind::False: return;
      case FormulaKind::Not: formula(f.left()); return;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Imply:
      case FormulaKind::Equiv:
        formula(f.left());
        formula(f.right());
        return;
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        var(f.bound());
        formula(f.body());
        return;
      case FormulaKind::Diamond:
      case FormulaKind::Box:
        game(f.game());
        formula(f.body());
        return;
      default:
        term(f.lhs());
        term(f.rhs());
        return;
    }
  }

  void equations(const std::vector<OdeEquation>& eqs) const {
    for (const auto& e : eqs) {
      var(e.x);
      var(e.x.prime());
      term(e.rhs);
    }
  }

  void game(const Game& g) const {
    switch (g.kind()) {
      case GameKind::Symbol: sym(g.symbol()); return;
      case GameKind::Assign:
        var(g.target());
        term(g.rhs());
        return;
      case GameKind::Ode:
        equations(g.equations());
        formula(g.domain());
        return;
      case GameKind::Test: formula(g.condition()); return;
      case GameKind::Choice:
      case GameKind::Seq:
        game(g.left());
        game(g.right());
        return;
      case GameKind::Loop:
      case GameKind::Dual: game(g.operand()); return;
      case GameKind::DiffGame:
        equations(g.equations());
        var(g.y());
        var(g.z());
        formula(g.y_set());
        formula(g.z_set());
        return;
    }
  }

  void any(const Expression& e) const {
    std::visit([this](const auto& x) { visit(x); }, e);
  }
  void visit(const Term& t) const { term(t); }
  void visit(const Formula& f) const { formula(f); }
  void visit(const Game& g) const { game(g); }
};

}  // namespace static_detail

/// Function, predicate and game symbols occurring in `e` (the dot excluded).
inline Signature signature(const Expression& e) {
  Signature s;
  static_detail::Collector{&s, nullptr}.any(e);
  return s;
}

/// Every variable occurring anywhere in `e`, free or bound. An ODE `x'=θ`
/// counts as an occurrence of both x and x'.
inline VarSet occurring_vars(const Expression& e) {
  VarSet v;
  static_detail::Collector{nullptr, &v}.any(e);
  return v;
}

inline bool contains_dot(const Expression& e) {
  bool found = false;
  static_detail::Collector{nullptr, nullptr, &found}.any(e);
  return found;
}

}  // namespace dgl
