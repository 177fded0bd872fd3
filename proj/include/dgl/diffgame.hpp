// Syntactic well-definedness checks for differential games. Whether the
// control sets are compact is not decidable from syntax, so it is reported as
// an assumed obligation rather than checked.
#pragma once

#include <string>
#include <vector>

#include "dgl/printer.hpp"
#include "dgl/static_semantics.hpp"
#include "dgl/syntax.hpp"
#include "dgl/well_formed.hpp"

namespace dgl {

struct DiffGameReport {
  std::vector<Violation> violations;
  /// Assumptions the checker cannot discharge, one per control set.
  std::vector<std::string> obligations;

  bool ok() const { return violations.empty(); }
};

namespace diffgame_detail {

inline bool first_order_qff(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::Diamond:
    case FormulaKind::Box: return false;
    case FormulaKind::Not: return first_order_qff(f.left());
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imply:
    case FormulaKind::Equiv: return first_order_qff(f.left()) && first_order_qff(f.right());
    default: return true;
  }
}

inline void check_node(const Game& g, const std::vector<int>& path, DiffGameReport& rep) {
  auto control = [&](const Variable& c, const Formula& set, const char* label, int child) {
    std::vector<int> p = path;
    p.push_back(child);
    VarSet fv = free_vars(set);
    if (!subset_of(fv, VarSet{c}))
      rep.violations.push_back({p, std::string(label) + " mentions " + (fv - VarSet{c}).str() + " besides " + c.str()});
    if (!first_order_qff(set))
      rep.violations.push_back({p, std::string(label) + " must be quantifier-free and modality-free"});
    if (!signature(Expression(set)).empty())
      rep.violations.push_back({p, std::string(label) + " mentions uninterpreted symbols"});
    rep.obligations.push_back("assumed: {" + c.str() + " | " + pretty(set) + "} is compact and nonempty");
  };
  if (g.y() == g.z()) rep.violations.push_back({path, "controls must be distinct"});
  int n = static_cast<int>(g.equations().size());
  control(g.y(), g.y_set(), "Y", n);
  control(g.z(), g.z_set(), "Z", n + 1);
}

inline void walk(const Formula& f, std::vector<int>& path, DiffGameReport& rep);

inline void walk(const Game& g, std::vector<int>& path, DiffGameReport& rep) {
  auto child = [&](int i, auto&& e) {
    path.push_back(i);
    walk(e, path, rep);
    path.pop_back();
  };
  switch (g.kind()) {
    case GameKind::DiffGame: check_node(g, path, rep); return;
    case GameKind::Ode: child(static_cast<int>(g.equations().size()), g.domain()); return;
    case GameKind::Test: child(0, g.condition()); return;
    case GameKind::Choice:
    case GameKind::Seq:
      child(0, g.left());
      child(1, g.right());
      return;
    case GameKind::Loop:
    case GameKind::Dual: child(0, g.operand()); return;
    default: return;
  }
}

inline void walk(const Formula& f, std::vector<int>& path, DiffGameReport& rep) {
  auto child = [&](int i, auto&& e) {
    path.push_back(i);
    walk(e, path, rep);
    path.pop_back();
  };
  switch (f.kind()) {
    case FormulaKind::Not: child(0, f.left()); return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imply:
    case FormulaKind::Equiv:
      child(0, f.left());
      child(1, f.right());
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall: child(0, f.body()); return;
    case FormulaKind::Diamond:
    case FormulaKind::Box:
      child(0, f.game());
      child(1, f.body());
      return;
    default: return;
  }
}

}  // namespace diffgame_detail

/// Checks one differential game node.
inline DiffGameReport diffgame_checks(const Game& g) {
  DiffGameReport rep;
  if (g.kind() != GameKind::DiffGame) {
    rep.violations.push_back({{}, "not a differential game"});
    return rep;
  }
  diffgame_detail::check_node(g, {}, rep);
  return rep;
}

/// Checks every differential game occurring in `e`.
inline DiffGameReport diffgame_checks_all(const Expression& e) {
  DiffGameReport rep;
  std::vector<int> path;
  if (const auto* f = std::get_if<Formula>(&e)) diffgame_detail::walk(*f, path, rep);
  if (const auto* g = std::get_if<Game>(&e)) diffgame_detail::walk(*g, path, rep);
  return rep;
}

}  // namespace dgl
