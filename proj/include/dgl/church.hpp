// Reference substitution in the classical style: substitute homomorphically
// and, at every binding operator, check that no replacement for a symbol in
// the operator's scope has a free variable the operator binds.
//
// Nothing is cached: bound variables of substituted games and the symbols of
// each scope are recomputed at every operator. This engine exists to be
// compared against the one-pass engine, both for results and for cost.
#pragma once

#include <string>
#include <vector>

#include "dgl/onepass.hpp"
#include "dgl/static_semantics.hpp"
#include "dgl/usubst.hpp"

namespace dgl {

/// A failed admissibility check: `key`'s replacement mentions `witness`,
/// which the operator binds.
struct AdmissibilityFailure {
  Symbol key;
  VarSet replacement_fv;
  VarSet witness;
};

/// σ is U-admissible for e iff no replacement of a function or predicate
/// symbol occurring in e has a free variable in U. Game replacements impose
/// no condition.
inline std::vector<AdmissibilityFailure> admissibility_failures(const USubst& s, const VarSet& U,
                                                                const Expression& e) {
  std::vector<AdmissibilityFailure> out;
  if (s.empty()) return out;
  Signature sig = signature(e);
  bool dot = contains_dot(e);
  for (const auto& [key, entry] : s.entries()) {
    if (key.kind == SymbolKind::Game) continue;
    bool occurs = key.is_dot() ? dot : sig.count(key) > 0;
    if (occurs && !disjoint(entry.fv, U)) out.push_back({key, entry.fv, entry.fv & U});
  }
  return out;
}

inline bool admissible(const USubst& s, const VarSet& U, const Expression& e) {
  return admissibility_failures(s, U, e).empty();
}

namespace subst_detail {

class Church {
 public:
  Church(const USubst& s, SubstStats* stats) : s_(s), stats_(stats) {}

  Term term(const Term& t) {
    if (stats_) ++stats_->terms;
    switch (t.kind()) {
      case TermKind::Var:
      case TermKind::Number: return t;
      case TermKind::Apply: {
        std::optional<Term> arg;
        if (t.has_arg()) arg = child(0, [&] { return term(t.arg()); });
        const SubstEntry* e = s_.find(t.symbol());
        if (!e) return arg ? Term::apply(t.symbol(), *arg) : t;
        const Term& r = std::get<Term>(e->replacement);
        if (!arg) return r;
        return apply_dot(e->key, t.arg(), *arg, [&](Church& inner) { return inner.term(r); });
      }
      case TermKind::Plus:
      case TermKind::Minus:
      case TermKind::Times: {
        Term a = child(0, [&] { return term(t.left()); });
        Term b = child(1, [&] { return term(t.right()); });
        return Term::binary(t.kind(), a, b);
      }
      case TermKind::Neg: return Term::neg(child(0, [&] { return term(t.operand()); }));
      case TermKind::Power: return Term::power(child(0, [&] { return term(t.operand()); }), t.exponent());
      case TermKind::Differential:
        require(VarSet::all(), t.operand(), "differential", 0);
        return Term::differential(child(0, [&] { return term(t.operand()); }));
    }
    return t;
  }

  Formula formula(const Formula& f) {
    if (stats_) ++stats_->formulas;
    switch (f.kind()) {
      case FormulaKind::Pred: {
        std::optional<Term> arg;
        if (f.has_arg()) arg = child(0, [&] { return term(f.arg()); });
        const SubstEntry* e = s_.find(f.symbol());
        if (!e) return arg ? Formula::pred(f.symbol(), *arg) : f;
        const Formula& r = std::get<Formula>(e->replacement);
        if (!arg) return r;
        return apply_dot(e->key, f.arg(), *arg, [&](Church& inner) { return inner.formula(r); });
      }
      case FormulaKind::True:
      case FormulaKind::False: return f;
      case FormulaKind::Not: return Formula::negate(child(0, [&] { return formula(f.left()); }));
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Imply:
      case FormulaKind::Equiv: {
        Formula a = child(0, [&] { return formula(f.left()); });
        Formula b = child(1, [&] { return formula(f.right()); });
        return Formula::connective(f.kind(), a, b);
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall:
        require(VarSet{f.bound()}, f.body(), "quantifier", 0);
        return Formula::quantifier(f.kind(), f.bound(), child(0, [&] { return formula(f.body()); }));
      case FormulaKind::Diamond:
      case FormulaKind::Box: {
        Game g = child(0, [&] { return game(f.game()); });
        require(bound_vars(g), f.body(), "modality", 1);
        return Formula::modality(f.kind(), g, child(1, [&] { return formula(f.body()); }));
      }
      default: {
        Term a = child(0, [&] { return term(f.lhs()); });
        Term b = child(1, [&] { return term(f.rhs()); });
        return Formula::compare(f.kind(), a, b);
      }
    }
  }

  Game game(const Game& g) {
    if (stats_) ++stats_->games;
    switch (g.kind()) {
      case GameKind::Symbol:
        if (const SubstEntry* e = s_.find(g.symbol())) return std::get<Game>(e->replacement);
        return g;
      case GameKind::Assign:
        if (stats_) ++stats_->assigns;
        return Game::assign(g.target(), child(0, [&] { return term(g.rhs()); }));
      case GameKind::Ode: {
        VarSet bound = bound_vars(g);
        const auto& eqs = g.equations();
        std::vector<OdeEquation> out;
        for (std::size_t i = 0; i < eqs.size(); ++i) {
          require(bound, eqs[i].rhs, "differential equation", static_cast<int>(i));
          out.push_back({eqs[i].x, child(static_cast<int>(i), [&] { return term(eqs[i].rhs); })});
        }
        int n = static_cast<int>(eqs.size());
        require(bound, g.domain(), "differential equation", n);
        return Game::ode(std::move(out), child(n, [&] { return formula(g.domain()); }));
      }
      case GameKind::Test: return Game::test(child(0, [&] { return formula(g.condition()); }));
      case GameKind::Choice: {
        Game a = child(0, [&] { return game(g.left()); });
        Game b = child(1, [&] { return game(g.right()); });
        return Game::choice(a, b);
      }
      case GameKind::Seq: {
        Game a = child(0, [&] { return game(g.left()); });
        require(bound_vars(a), g.right(), "sequential composition", 1);
        return Game::seq(a, child(1, [&] { return game(g.right()); }));
      }
      case GameKind::Loop: {
        Game a = child(0, [&] { return game(g.operand()); });
        require(bound_vars(a), g.operand(), "repetition", 0);
        return Game::loop(a);
      }
      case GameKind::Dual: return Game::dual(child(0, [&] { return game(g.operand()); }));
      case GameKind::DiffGame: {
        VarSet bound = bound_vars(g);
        const auto& eqs = g.equations();
        std::vector<OdeEquation> out;
        for (std::size_t i = 0; i < eqs.size(); ++i) {
          require(bound, eqs[i].rhs, "differential game", static_cast<int>(i));
          out.push_back({eqs[i].x, child(static_cast<int>(i), [&] { return term(eqs[i].rhs); })});
        }
        int n = static_cast<int>(eqs.size());
        require(bound, g.y_set(), "differential game", n);
        require(bound, g.z_set(), "differential game", n + 1);
        Formula ys = child(n, [&] { return formula(g.y_set()); });
        Formula zs = child(n + 1, [&] { return formula(g.z_set()); });
        return Game::diff_game(std::move(out), g.y(), ys, g.z(), zs);
      }
    }
    return g;
  }

 private:
  const USubst& s_;
  SubstStats* stats_;
  std::vector<int> path_;

  template <class F>
  auto child(int i, F&& f) -> decltype(f()) {
    path_.push_back(i);
    auto r = f();
    path_.pop_back();
    return r;
  }

  void require(const VarSet& U, const Expression& scope, const char* where, int child_index) {
    if (stats_) ++stats_->checks;
    auto failures = admissibility_failures(s_, U, scope);
    if (failures.empty()) return;
    const auto& f = failures.front();
    std::vector<int> path = path_;
    path.push_back(child_index);
    throw ClashError(ClashInfo{f.key, f.replacement_fv, U, f.witness, std::move(path), false, {}, where});
  }

  template <class F>
  auto apply_dot(const Symbol& key, const Term& original_arg, const Term& arg, F&& f) -> decltype(f(*this)) {
    USubst d = dot_subst(arg);
    Church inner(d, stats_);
    try {
      return f(inner);
    } catch (ClashError& c) {
      throw ClashError(lift_dot_clash(std::move(c.info), key, s_, original_arg, path_));
    }
  }
};

}  // namespace subst_detail

inline Result<Term> church_term(const USubst& s, const Term& t, SubstStats* stats = nullptr) {
  return subst_detail::catching([&] { return subst_detail::Church(s, stats).term(t); });
}

inline Result<Formula> church_formula(const USubst& s, const Formula& f, SubstStats* stats = nullptr) {
  return subst_detail::catching([&] { return subst_detail::Church(s, stats).formula(f); });
}

inline Result<Game> church_game(const USubst& s, const Game& g, SubstStats* stats = nullptr) {
  return subst_detail::catching([&] { return subst_detail::Church(s, stats).game(g); });
}

}  // namespace dgl
