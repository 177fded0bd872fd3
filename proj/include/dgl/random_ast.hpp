// Seeded generators of random well-formed expressions and substitutions for
// property tests, fuzzing and the semantic oracle.
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dgl/syntax.hpp"
#include "dgl/usubst.hpp"

namespace dgl {

struct GenConfig {
  int max_depth = 7;
  /// Allow game and modality constructs; off for the evaluable fragment.
  bool games = true;
  bool quantifiers = true;
  bool differentials = true;
  /// Allow differential variables x' in terms.
  bool primed_vars = true;
};

class AstGenerator {
 public:
  AstGenerator(std::uint64_t seed, GenConfig cfg = {}) : rng_(seed), cfg_(cfg) {}

  std::mt19937_64& rng() { return rng_; }
  const GenConfig& config() const { return cfg_; }

  static const std::vector<std::string>& var_names() {
    static const std::vector<std::string> v{"x", "y", "z", "v", "w"};
    return v;
  }

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(int percent) { return static_cast<int>(rng_() % 100) < percent; }

  Variable variable(bool allow_primed) {
    const auto& names = var_names();
    Variable x(names[pick(names.size())]);
    if (allow_primed && cfg_.primed_vars && chance(15)) x = x.prime();
    return x;
  }

  Term number() {
    static const int nums[] = {0, 1, 2, 3, 5};
    if (chance(20)) return Term::number(Rational(1 + static_cast<int>(pick(3)), 2 + static_cast<int>(pick(3))));
    return Term::number(nums[pick(5)]);
  }

  /// `dot` allows the placeholder; `in_diff` forbids differentials and
  /// differential variables (operand of a differential).
  Term term(int depth, bool dot = false, bool in_diff = false) {
    if (depth <= 1 || chance(25)) return term_leaf(dot, in_diff);
    switch (pick(8)) {
      case 0: return Term::plus(term(depth - 1, dot, in_diff), term(depth - 1, dot, in_diff));
      case 1: return Term::minus(term(depth - 1, dot, in_diff), term(depth - 1, dot, in_diff));
      case 2: return Term::times(term(depth - 1, dot, in_diff), term(depth - 1, dot, in_diff));
      case 3: return Term::neg(term(depth - 1, dot, in_diff));
      case 4: return Term::power(term(depth - 1, dot, in_diff), 1 + static_cast<unsigned>(pick(3)));
      case 5:
        if (!in_diff && cfg_.differentials) return Term::differential(term(depth - 1, dot, true));
        [[fallthrough]];
      case 6: return Term::apply(Symbol::function("f", 1), term(depth - 1, dot, in_diff));
      default: return term_leaf(dot, in_diff);
    }
  }

  Term term_leaf(bool dot, bool in_diff) {
    switch (pick(dot ? 5 : 4)) {
      case 0:
      case 1: return Term::var(variable(!in_diff));
      case 2: return number();
      case 3: return Term::apply(Symbol::function("g", 0));
      default: return Term::dot();
    }
  }

  Formula formula(int depth, bool dot = false) {
    if (depth <= 1 || chance(20)) return atom(depth, dot);
    int n = cfg_.games ? 9 : (cfg_.quantifiers ? 6 : 5);
    switch (pick(n)) {
      case 0: return Formula::negate(formula(depth - 1, dot));
      case 1: return Formula::conj(formula(depth - 1, dot), formula(depth - 1, dot));
      case 2: return Formula::disj(formula(depth - 1, dot), formula(depth - 1, dot));
      case 3: return Formula::imply(formula(depth - 1, dot), formula(depth - 1, dot));
      case 4: return Formula::equiv(formula(depth - 1, dot), formula(depth - 1, dot));
      case 5:
        return Formula::quantifier(chance(50) ? FormulaKind::Exists : FormulaKind::Forall, variable(false),
                                   formula(depth - 1, dot));
      case 6:
      case 7: {
        Game g = game(depth - 1, dot);
        return Formula::modality(chance(50) ? FormulaKind::Diamond : FormulaKind::Box, g, formula(depth - 1, dot));
      }
      default: return atom(depth, dot);
    }
  }

  Formula atom(int depth, bool dot) {
    int td = std::max(1, std::min(depth - 1, 3));
    switch (pick(6)) {
      case 0: return Formula::pred(Symbol::predicate("p", 1), term(td, dot));
      case 1: return Formula::pred(Symbol::predicate("q", 0));
      case 2:
        if (chance(30)) return chance(50) ? Formula::truth() : Formula::falsity();
        [[fallthrough]];
      default: {
        static const FormulaKind ops[] = {FormulaKind::Geq, FormulaKind::Gt, FormulaKind::Leq,
                                          FormulaKind::Lt,  FormulaKind::Eq, FormulaKind::Neq};
        return Formula::compare(ops[pick(6)], term(td, dot), term(td, dot));
      }
    }
  }

  Game game(int depth, bool dot = false) {
    if (depth <= 1 || chance(20)) return game_leaf(depth, dot);
    switch (pick(8)) {
      case 0: return Game::choice(game(depth - 1, dot), game(depth - 1, dot));
      case 1:
      case 2: return Game::seq(game(depth - 1, dot), game(depth - 1, dot));
      case 3: return Game::loop(game(depth - 1, dot));
      case 4: return Game::dual(game(depth - 1, dot));
      case 5: return Game::test(formula(depth - 1, dot));
      default: return game_leaf(depth, dot);
    }
  }

  Game game_leaf(int depth, bool dot) {
    int td = std::max(1, std::min(depth - 1, 3));
    switch (pick(7)) {
      case 0: {
        static const char* games[] = {"a", "b", "c"};
        return Game::symbol(games[pick(3)]);
      }
      case 1:
      case 2: return Game::assign(variable(true), term(td, dot));
      case 3:
      case 4: {
        std::vector<OdeEquation> eqs;
        Variable x = variable(false);
        eqs.push_back({x, term(td, dot)});
        if (chance(40)) {
          Variable y = variable(false);
          if (y != x) eqs.push_back({y, term(td, dot)});
        }
        Formula dom = chance(50) ? Formula::truth() : formula(std::min(td, 2), dot);
        return Game::ode(std::move(eqs), dom);
      }
      case 5: {
        const auto& names = var_names();
        std::vector<std::size_t> idx{0, 1, 2, 3, 4};
        std::shuffle(idx.begin(), idx.end(), rng_);
        Variable x(names[idx[0]]), y(names[idx[1]]), z(names[idx[2]]);
        return Game::diff_game({{x, term(td, dot)}}, y, control_set(y), z, control_set(z));
      }
      default: return Game::test(formula(td, dot));
    }
  }

  /// A set formula mentioning only `c`.
  Formula control_set(const Variable& c) {
    Term cv = Term::var(c);
    Formula lo = Formula::compare(FormulaKind::Leq, Term::neg(Term::number(1)), cv);
    Formula hi = Formula::compare(FormulaKind::Leq, cv, Term::number(1 + static_cast<int>(pick(3))));
    switch (pick(3)) {
      case 0: return Formula::conj(lo, hi);
      case 1: return hi;
      default: return Formula::geq(cv, Term::number(0));
    }
  }

  /// Random taboo set over the variable pool; occasionally all variables.
  VarSet taboo() {
    if (chance(5)) return VarSet::all();
    std::vector<Variable> vs;
    for (const auto& n : var_names()) {
      if (chance(30)) vs.emplace_back(n);
      if (chance(15)) vs.emplace_back(n, 1);
    }
    return VarSet::finite(vs);
  }

  /// A random substitution over the symbols f(.), g(), p(.), q(), a, b, c.
  /// Half of the term/formula replacements use the shared variable pool and
  /// tend to clash; the others use only `u`, which the generators never
  /// bind.
  USubst subst(int depth = 3) {
    USubst s;
    auto replacement_term = [&](bool dot) {
      if (chance(50)) return term(depth, dot);
      return closed_ish_term(depth, dot);
    };
    if (chance(60)) s.add(Symbol::function("f", 1), replacement_term(true));
    if (chance(60)) s.add(Symbol::function("g", 0), replacement_term(false));
    if (chance(60)) s.add(Symbol::predicate("p", 1), chance(50) ? formula(depth, true) : closed_ish_formula(depth, true));
    if (chance(60)) s.add(Symbol::predicate("q", 0), chance(50) ? formula(depth, false) : closed_ish_formula(depth, false));
    for (const char* a : {"a", "b", "c"})
      if (chance(40)) s.add(Symbol::game(a), game(depth, false));
    return s;
  }

  Term closed_ish_term(int depth, bool dot) {
    if (depth <= 1 || chance(30)) {
      switch (pick(dot ? 3 : 2)) {
        case 0: return Term::var("u");
        case 1: return number();
        default: return Term::dot();
      }
    }
    switch (pick(4)) {
      case 0: return Term::plus(closed_ish_term(depth - 1, dot), closed_ish_term(depth - 1, dot));
      case 1: return Term::times(closed_ish_term(depth - 1, dot), closed_ish_term(depth - 1, dot));
      case 2: return Term::neg(closed_ish_term(depth - 1, dot));
      default: return Term::power(closed_ish_term(depth - 1, dot), 2);
    }
  }

  Formula closed_ish_formula(int depth, bool dot) {
    Formula f = Formula::geq(closed_ish_term(depth, dot), closed_ish_term(depth, dot));
    if (cfg_.games && chance(40)) {
      // binders inside the replacement exercise clashes at the placeholder
      Game g = chance(50) ? Game::assign(variable(false), closed_ish_term(2, dot))
                          : Game::ode({{variable(false), closed_ish_term(2, dot)}}, Formula::truth());
      return Formula::box(g, f);
    }
    return f;
  }

 private:
  std::mt19937_64 rng_;
  GenConfig cfg_;
};

}  // namespace dgl
