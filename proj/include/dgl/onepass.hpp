// One-pass uniform substitution with taboo sets.
//
// Every position is visited once with the set U of variables that are taboo
// there (bound by an enclosing binder or by an earlier part of the game). A
// replacement may only be put at a position if none of its free variables is
// taboo there. Games additionally return the taboo set for whatever follows
// them, which is U plus the variables the substituted game may bind.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dgl/printer.hpp"
#include "dgl/static_semantics.hpp"
#include "dgl/usubst.hpp"

namespace dgl {

struct ClashInfo {
  /// Symbol whose replacement could not be placed. For a clash at a `.`
  /// inside a replacement this is the symbol owning that replacement.
  Symbol key;
  VarSet replacement_fv;
  VarSet taboo;
  VarSet witness;
  /// Child indices from the root; -1 steps into a replacement.
  std::vector<int> path;
  /// Set when the clash happened at an argument placeholder of `key`'s
  /// replacement, i.e. the substituted argument was captured.
  bool at_dot = false;
  /// Symbols from the argument whose replacements contributed witness
  /// variables (empty if the argument mentioned them directly).
  std::vector<Symbol> culprits;
  /// Operator whose admissibility check failed (reference engine only).
  std::string where;

  std::string describe() const {
    std::string s = "clash: ";
    if (at_dot) {
      if (!culprits.empty()) {
        s += "replacement for ";
        for (std::size_t i = 0; i < culprits.size(); ++i)
          s += (i ? ", " : "") + USubst::key_string(culprits[i]);
        s += " passed as argument of " + USubst::key_string(key);
      } else {
        s += "argument of " + USubst::key_string(key);
      }
    } else {
      s += "replacement for " + USubst::key_string(key);
    }
    s += " has free variables " + replacement_fv.str() + ", taboo " + taboo.str() + ", witness " + witness.str();
    if (!where.empty()) s += " (at " + where + ")";
    s += " at path " + path_string(path);
    return s;
  }
};

class ClashError : public std::runtime_error {
 public:
  explicit ClashError(ClashInfo c) : std::runtime_error(c.describe()), info(std::move(c)) {}
  ClashInfo info;
};

/// The second pass over a loop body did not reproduce its input taboo.
class FixpointViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

template <class T>
class Result {
 public:
  Result(T v) : v_(std::move(v)) {}
  Result(ClashInfo c) : v_(std::move(c)) {}
  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }
  const T& value() const {
    if (!ok()) throw ClashError(clash());
    return std::get<0>(v_);
  }
  const ClashInfo& clash() const { return std::get<1>(v_); }

 private:
  std::variant<T, ClashInfo> v_;
};

struct TabooedGame {
  Game game;
  VarSet out_taboo;
};

enum class LoopMode {
  /// Substitute the body once to learn its taboo, then again under it.
  TwoPass,
  /// Compute the body's bound variables after substitution directly and
  /// substitute the body once.
  BoundVars
};

struct SubstStats {
  std::size_t terms = 0;
  std::size_t formulas = 0;
  std::size_t games = 0;
  std::size_t assigns = 0;
  std::size_t checks = 0;
};

struct SubstOptions {
  LoopMode loop = LoopMode::TwoPass;
  SubstStats* stats = nullptr;
};

namespace subst_detail {

/// Symbols of `arg` replaced by `s` whose replacements mention a witness.
inline std::vector<Symbol> culprits(const USubst& s, const Term& arg, const VarSet& witness) {
  std::vector<Symbol> out;
  for (const Symbol& k : signature(arg))
    if (const SubstEntry* e = s.find(k); e && !disjoint(e->fv, witness)) out.push_back(k);
  return out;
}

/// Rewrites a clash raised inside the argument substitution {. ~> arg*} of
/// `key`'s replacement so it is reported against the outer substitution.
inline ClashInfo lift_dot_clash(ClashInfo inner, const Symbol& key, const USubst& s, const Term& arg,
                                const std::vector<int>& site) {
  ClashInfo c = std::move(inner);
  if (c.key.is_dot()) {
    c.key = key;
    c.at_dot = true;
    if (!arg.null()) c.culprits = culprits(s, arg, c.witness);
  }
  std::vector<int> path = site;
  path.push_back(-1);
  path.insert(path.end(), c.path.begin(), c.path.end());
  c.path = std::move(path);
  return c;
}

/// Bound variables of σ(α) without building σ(α).
inline VarSet substituted_bound_vars(const USubst& s, const Game& g) {
  switch (g.kind()) {
    case GameKind::Symbol:
      if (const SubstEntry* e = s.find(g.symbol())) return bound_vars(std::get<Game>(e->replacement));
      return VarSet::all();
    case GameKind::Choice:
    case GameKind::Seq: return substituted_bound_vars(s, g.left()) | substituted_bound_vars(s, g.right());
    case GameKind::Loop:
    case GameKind::Dual: return substituted_bound_vars(s, g.operand());
    default: return bound_vars(g);
  }
}

class OnePass {
 public:
  OnePass(const USubst& s, SubstOptions opt) : s_(s), opt_(opt) {}

  Term term(const Term& t, const VarSet& U) {
    if (opt_.stats) ++opt_.stats->terms;
    switch (t.kind()) {
      case TermKind::Var:
      case TermKind::Number: return t;
      case TermKind::Apply: {
        std::optional<Term> arg;
        if (t.has_arg()) arg = child(0, [&] { return term(t.arg(), U); });
        const SubstEntry* e = s_.find(t.symbol());
        if (!e) return arg ? Term::apply(t.symbol(), *arg) : t;
        check(*e, U);
        const Term& r = std::get<Term>(e->replacement);
        if (!arg) return r;
        return apply_dot(e->key, t.arg(), *arg, [&](OnePass& inner) { return inner.term(r, VarSet{}); });
      }
      case TermKind::Plus:
      case TermKind::Minus:
      case TermKind::Times: {
        Term a = child(0, [&] { return term(t.left(), U); });
        Term b = child(1, [&] { return term(t.right(), U); });
        return Term::binary(t.kind(), a, b);
      }
      case TermKind::Neg: return Term::neg(child(0, [&] { return term(t.operand(), U); }));
      case TermKind::Power: return Term::power(child(0, [&] { return term(t.operand(), U); }), t.exponent());
      case TermKind::Differential:
        return Term::differential(child(0, [&] { return term(t.operand(), VarSet::all()); }));
    }
    return t;
  }

  Formula formula(const Formula& f, const VarSet& U) {
    if (opt_.stats) ++opt_.stats->formulas;
    switch (f.kind()) {
      case FormulaKind::Pred: {
        std::optional<Term> arg;
        if (f.has_arg()) arg = child(0, [&] { return term(f.arg(), U); });
        const SubstEntry* e = s_.find(f.symbol());
        if (!e) return arg ? Formula::pred(f.symbol(), *arg) : f;
        check(*e, U);
        const Formula& r = std::get<Formula>(e->replacement);
        if (!arg) return r;
        return apply_dot(e->key, f.arg(), *arg, [&](OnePass& inner) { return inner.formula(r, VarSet{}); });
      }
      case FormulaKind::True:
      case FormulaKind::False: return f;
      case FormulaKind::Not: return Formula::negate(child(0, [&] { return formula(f.left(), U); }));
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Imply:
      case FormulaKind::Equiv: {
        Formula a = child(0, [&] { return formula(f.left(), U); });
        Formula b = child(1, [&] { return formula(f.right(), U); });
        return Formula::connective(f.kind(), a, b);
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        VarSet inner = U;
        inner.insert(f.bound());
        return Formula::quantifier(f.kind(), f.bound(), child(0, [&] { return formula(f.body(), inner); }));
      }
      case FormulaKind::Diamond:
      case FormulaKind::Box: {
        TabooedGame g = child(0, [&] { return game(f.game(), U); });
        Formula post = child(1, [&] { return formula(f.body(), g.out_taboo); });
        return Formula::modality(f.kind(), g.game, post);
      }
      default: {
        Term a = child(0, [&] { return term(f.lhs(), U); });
        Term b = child(1, [&] { return term(f.rhs(), U); });
        return Formula::compare(f.kind(), a, b);
      }
    }
  }

  TabooedGame game(const Game& g, const VarSet& U) {
    if (opt_.stats) ++opt_.stats->games;
    switch (g.kind()) {
      case GameKind::Symbol: {
        if (const SubstEntry* e = s_.find(g.symbol())) {
          const Game& r = std::get<Game>(e->replacement);
          return {r, U | bound_vars(r)};
        }
        return {g, VarSet::all()};
      }
      case GameKind::Assign: {
        if (opt_.stats) ++opt_.stats->assigns;
        Term rhs = child(0, [&] { return term(g.rhs(), U); });
        VarSet out = U;
        out.insert(g.target());
        return {Game::assign(g.target(), rhs), std::move(out)};
      }
      case GameKind::Ode: {
        VarSet inner = U | bound_vars(g);
        auto eqs = equations(g.equations(), inner);
        Formula dom = child(static_cast<int>(eqs.size()), [&] { return formula(g.domain(), inner); });
        return {Game::ode(std::move(eqs), dom), std::move(inner)};
      }
      case GameKind::Test: return {Game::test(child(0, [&] { return formula(g.condition(), U); })), U};
      case GameKind::Choice: {
        TabooedGame a = child(0, [&] { return game(g.left(), U); });
        TabooedGame b = child(1, [&] { return game(g.right(), U); });
        return {Game::choice(a.game, b.game), a.out_taboo | b.out_taboo};
      }
      case GameKind::Seq: {
        TabooedGame a = child(0, [&] { return game(g.left(), U); });
        TabooedGame b = child(1, [&] { return game(g.right(), a.out_taboo); });
        return {Game::seq(a.game, b.game), std::move(b.out_taboo)};
      }
      case GameKind::Loop: {
        VarSet V;
        if (opt_.loop == LoopMode::TwoPass) {
          V = child(0, [&] { return game(g.operand(), U); }).out_taboo;
        } else {
          V = U | substituted_bound_vars(s_, g.operand());
        }
        TabooedGame body = child(0, [&] { return game(g.operand(), V); });
        if (body.out_taboo != V)
          throw FixpointViolation("loop body taboo " + body.out_taboo.str() + " differs from its input " + V.str());
        return {Game::loop(body.game), std::move(V)};
      }
      case GameKind::Dual: {
        TabooedGame a = child(0, [&] { return game(g.operand(), U); });
        return {Game::dual(a.game), std::move(a.out_taboo)};
      }
      case GameKind::DiffGame: {
        VarSet inner = U | bound_vars(g);
        auto eqs = equations(g.equations(), inner);
        int n = static_cast<int>(eqs.size());
        Formula ys = child(n, [&] { return formula(g.y_set(), inner); });
        Formula zs = child(n + 1, [&] { return formula(g.z_set(), inner); });
        return {Game::diff_game(std::move(eqs), g.y(), ys, g.z(), zs), std::move(inner)};
      }
    }
    return {g, U};
  }

 private:
  const USubst& s_;
  SubstOptions opt_;
  std::vector<int> path_;

  template <class F>
  auto child(int i, F&& f) -> decltype(f()) {
    path_.push_back(i);
    auto r = f();
    path_.pop_back();
    return r;
  }

  void check(const SubstEntry& e, const VarSet& U) {
    if (opt_.stats) ++opt_.stats->checks;
    if (disjoint(e.fv, U)) return;
    throw ClashError(ClashInfo{e.key, e.fv, U, e.fv & U, path_, false, {}, {}});
  }

  template <class F>
  auto apply_dot(const Symbol& key, const Term& original_arg, const Term& arg, F&& f) -> decltype(f(*this)) {
    USubst d = dot_subst(arg);
    OnePass inner(d, SubstOptions{opt_.loop, opt_.stats});
    try {
      return f(inner);
    } catch (ClashError& c) {
      throw ClashError(lift_dot_clash(std::move(c.info), key, s_, original_arg, path_));
    }
  }

  std::vector<OdeEquation> equations(const std::vector<OdeEquation>& eqs, const VarSet& U) {
    std::vector<OdeEquation> out;
    out.reserve(eqs.size());
    for (std::size_t i = 0; i < eqs.size(); ++i)
      out.push_back({eqs[i].x, child(static_cast<int>(i), [&] { return term(eqs[i].rhs, U); })});
    return out;
  }
};

template <class F>
auto catching(F&& f) -> Result<decltype(f())> {
  try {
    return f();
  } catch (const ClashError& c) {
    return c.info;
  }
}

}  // namespace subst_detail

inline Result<Term> subst_term(const USubst& s, const VarSet& U, const Term& t, SubstOptions opt = {}) {
  return subst_detail::catching([&] { return subst_detail::OnePass(s, opt).term(t, U); });
}

inline Result<Formula> subst_formula(const USubst& s, const VarSet& U, const Formula& f, SubstOptions opt = {}) {
  return subst_detail::catching([&] { return subst_detail::OnePass(s, opt).formula(f, U); });
}

inline Result<TabooedGame> subst_game(const USubst& s, const VarSet& U, const Game& g, SubstOptions opt = {}) {
  return subst_detail::catching([&] { return subst_detail::OnePass(s, opt).game(g, U); });
}

/// σ(φ): substitution without any initial taboo.
inline Result<Formula> us(const USubst& s, const Formula& f, SubstOptions opt = {}) {
  return subst_formula(s, VarSet{}, f, opt);
}

}  // namespace dgl
