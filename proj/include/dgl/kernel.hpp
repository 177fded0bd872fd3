// Proof kernel: the concrete axioms and axiomatic rules, uniform substitution
// of proved formulas (US) and of inferences (USR), modus ponens,
// generalization, bound renaming, contextual equivalence and trusted oracle
// steps. A Provable can only be obtained through the Kernel.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dgl/onepass.hpp"
#include "dgl/parser.hpp"
#include "dgl/printer.hpp"
#include "dgl/static_semantics.hpp"
#include "dgl/syntax.hpp"
#include "dgl/usubst.hpp"

namespace dgl {

enum class AxiomId { box, assign_eq, assign_eq_d, DS, test, choice, compose, iterate, dual };
enum class RuleId { M, FP };

inline const std::vector<std::pair<AxiomId, const char*>>& axiom_names() {
  static const std::vector<std::pair<AxiomId, const char*>> names{
      {AxiomId::box, "box"},         {AxiomId::assign_eq, "assign_eq"}, {AxiomId::assign_eq_d, "assign_eq_d"},
      {AxiomId::DS, "DS"},           {AxiomId::test, "test"},           {AxiomId::choice, "choice"},
      {AxiomId::compose, "compose"}, {AxiomId::iterate, "iterate"},     {AxiomId::dual, "dual"}};
  return names;
}

inline std::optional<AxiomId> axiom_from_name(const std::string& s) {
  for (const auto& [id, n] : axiom_names())
    if (s == n) return id;
  return std::nullopt;
}

inline std::optional<RuleId> rule_from_name(const std::string& s) {
  if (s == "M") return RuleId::M;
  if (s == "FP") return RuleId::FP;
  return std::nullopt;
}

class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RenameUnsupported : public KernelError {
 public:
  using KernelError::KernelError;
};

class Kernel;

/// A formula derived by the kernel, together with the oracle formulas it
/// depends on.
class Provable {
 public:
  const Formula& formula() const { return formula_; }
  const std::vector<Formula>& oracles() const { return *oracles_; }

 private:
  friend class Kernel;
  using Oracles = std::shared_ptr<const std::vector<Formula>>;
  Provable(Formula f, Oracles o) : formula_(std::move(f)), oracles_(std::move(o)) {}

  Formula formula_;
  Oracles oracles_;
};

class Inference {
 public:
  const std::vector<Formula>& premises() const { return premises_; }
  const Formula& conclusion() const { return conclusion_; }

 private:
  friend class Kernel;
  Inference(std::vector<Formula> p, Formula c) : premises_(std::move(p)), conclusion_(std::move(c)) {}

  std::vector<Formula> premises_;
  Formula conclusion_;
};

namespace kernel_detail {

inline Variable swap(const Variable& v, const Variable& x, const Variable& y) {
  if (v.name == x.name) return Variable(y.name, v.order);
  if (v.name == y.name) return Variable(x.name, v.order);
  return v;
}

struct Renamer {
  Variable x, y;

  Term term(const Term& t) const {
    switch (t.kind()) {
      case TermKind::Var: return Term::var(swap(t.variable(), x, y));
      case TermKind::Number: return t;
      case TermKind::Apply:
        if (!t.has_arg()) return t;
        return Term::apply(t.symbol(), term(t.arg()));
      case TermKind::Neg: return Term::neg(term(t.operand()));
      case TermKind::Power: return Term::power(term(t.operand()), t.exponent());
      case TermKind::Differential: return Term::differential(term(t.operand()));
      default: return Term::binary(t.kind(), term(t.left()), term(t.right()));
    }
  }

  std::vector<OdeEquation> equations(const std::vector<OdeEquation>& eqs) const {
    std::vector<OdeEquation> r;
    for (const auto& e : eqs) r.push_back({swap(e.x, x, y), term(e.rhs)});
    return r;
  }

  Formula formula(const Formula& f) const {
    FormulaKind k = f.kind();
    if (is_comparison(k)) return Formula::compare(k, term(f.lhs()), term(f.rhs()));
    switch (k) {
      case FormulaKind::Pred:
        if (!f.has_arg()) return f;
        return Formula::pred(f.symbol(), term(f.arg()));
      case FormulaKind::True:
      case FormulaKind::False: return f;
      case FormulaKind::Not: return Formula::negate(formula(f.left()));
      case FormulaKind::Exists:
      case FormulaKind::Forall: return Formula::quantifier(k, swap(f.bound(), x, y), formula(f.body()));
      case FormulaKind::Diamond:
      case FormulaKind::Box: return Formula::modality(k, game(f.game()), formula(f.body()));
      default: return Formula::connective(k, formula(f.left()), formula(f.right()));
    }
  }

  Game game(const Game& g) const {
    switch (g.kind()) {
      case GameKind::Symbol: throw RenameUnsupported("cannot rename inside game symbol " + g.symbol().name);
      case GameKind::Assign: return Game::assign(swap(g.target(), x, y), term(g.rhs()));
      case GameKind::Ode: return Game::ode(equations(g.equations()), formula(g.domain()));
      case GameKind::Test: return Game::test(formula(g.condition()));
      case GameKind::Choice:
      case GameKind::Seq: return Game::binary(g.kind(), game(g.left()), game(g.right()));
      case GameKind::Loop:
      case GameKind::Dual: return Game::unary(g.kind(), game(g.operand()));
      case GameKind::DiffGame:
        return Game::diff_game(equations(g.equations()), swap(g.y(), x, y), formula(g.y_set()), swap(g.z(), x, y),
                               formula(g.z_set()));
    }
    return g;
  }
};

// Whether `after` arises from `before` by replacing some occurrences of one
// side of `a <-> b` by the other.
struct Congruence {
  const Formula& a;
  const Formula& b;

  bool swapped(const Formula& before, const Formula& after) const {
    return (before == a && after == b) || (before == b && after == a);
  }

  bool formula(const Formula& before, const Formula& after) const {
    if (before == after || swapped(before, after)) return true;
    FormulaKind k = before.kind();
    if (k != after.kind() || is_comparison(k)) return false;
    switch (k) {
      case FormulaKind::Pred:
      case FormulaKind::True:
      case FormulaKind::False: return false;
      case FormulaKind::Not: return formula(before.left(), after.left());
      case FormulaKind::Exists:
      case FormulaKind::Forall: return before.bound() == after.bound() && formula(before.body(), after.body());
      case FormulaKind::Diamond:
      case FormulaKind::Box: return game(before.game(), after.game()) && formula(before.body(), after.body());
      default: return formula(before.left(), after.left()) && formula(before.right(), after.right());
    }
  }

  bool game(const Game& before, const Game& after) const {
    if (before == after) return true;
    if (before.kind() != after.kind()) return false;
    switch (before.kind()) {
      case GameKind::Ode:
        return before.equations() == after.equations() && formula(before.domain(), after.domain());
      case GameKind::Test: return formula(before.condition(), after.condition());
      case GameKind::Choice:
      case GameKind::Seq: return game(before.left(), after.left()) && game(before.right(), after.right());
      case GameKind::Loop:
      case GameKind::Dual: return game(before.operand(), after.operand());
      case GameKind::DiffGame:
        return before.equations() == after.equations() && before.y() == after.y() && before.z() == after.z() &&
               formula(before.y_set(), after.y_set()) && formula(before.z_set(), after.z_set());
      default: return false;
    }
  }
};

}  // namespace kernel_detail

/// Transposes x with y and x' with y' everywhere in `e`, bound positions
/// included.
inline Formula uniform_rename(const Formula& f, const Variable& x, const Variable& y) {
  return kernel_detail::Renamer{x, y}.formula(f);
}
inline Term uniform_rename(const Term& t, const Variable& x, const Variable& y) {
  return kernel_detail::Renamer{x, y}.term(t);
}
inline Game uniform_rename(const Game& g, const Variable& x, const Variable& y) {
  return kernel_detail::Renamer{x, y}.game(g);
}

class Kernel {
 public:
  static const Formula& axiom_formula(AxiomId id) {
    static const std::map<AxiomId, Formula> axioms = [] {
      std::map<AxiomId, Formula> m;
      auto add = [&](AxiomId id, const char* text) { m.emplace(id, parse_formula(text)); };
      add(AxiomId::box, "[a]<c>true <-> !<a>!<c>true");
      add(AxiomId::assign_eq, "<x:=f()><c>true <-> \\exists x (x=f() & <c>true)");
      add(AxiomId::assign_eq_d, "<x':=f()><c>true <-> \\exists x' (x'=f() & <c>true)");
      add(AxiomId::DS, "<{x'=f()}><c>true <-> \\exists t (t>=0 & <x:=x+f()*t><x':=f()><c>true)");
      add(AxiomId::test, "<{?q()}>p() <-> q() & p()");
      add(AxiomId::choice, "<a++b><c>true <-> <a><c>true | <b><c>true");
      add(AxiomId::compose, "<a;b><c>true <-> <a><b><c>true");
      add(AxiomId::iterate, "<{a}*><c>true <-> <c>true | <a><{a}*><c>true");
      add(AxiomId::dual, "<{a}^d><c>true <-> !<a>!<c>true");
      return m;
    }();
    return axioms.at(id);
  }

  static Provable axiom(AxiomId id) { return Provable(axiom_formula(id), none()); }

  static Inference rule(RuleId id) {
    switch (id) {
      case RuleId::M:
        return Inference({parse_formula("<c>true -> <d>true")}, parse_formula("<a><c>true -> <a><d>true"));
      case RuleId::FP:
        return Inference({parse_formula("<c>true | <a><d>true -> <d>true")}, parse_formula("<{a}*><c>true -> <d>true"));
    }
    throw KernelError("unknown rule");
  }

  /// Rule US: substitutes into a proved formula with an empty top-level taboo.
  static Provable us(const USubst& s, const Provable& p) {
    auto r = dgl::us(s, p.formula());
    if (!r.ok()) throw ClashError(r.clash());
    return Provable(r.value(), p.oracles_);
  }

  /// Rule USR: substitutes into every premise and the conclusion with every
  /// variable taboo.
  static Inference usr(const USubst& s, const Inference& inf) {
    auto apply = [&](const Formula& f) {
      auto r = subst_formula(s, VarSet::all(), f);
      if (!r.ok()) throw ClashError(r.clash());
      return r.value();
    };
    std::vector<Formula> premises;
    for (const auto& p : inf.premises()) premises.push_back(apply(p));
    return Inference(std::move(premises), apply(inf.conclusion()));
  }

  static Provable infer(const Inference& inf, const std::vector<Provable>& premises) {
    if (premises.size() != inf.premises().size())
      throw KernelError("inference needs " + std::to_string(inf.premises().size()) + " premises, got " +
                        std::to_string(premises.size()));
    Provable::Oracles deps = none();
    for (std::size_t i = 0; i < premises.size(); ++i) {
      if (!(premises[i].formula() == inf.premises()[i]))
        throw KernelError("premise " + std::to_string(i + 1) + " is " + pretty(premises[i].formula()) +
                          " but the inference needs " + pretty(inf.premises()[i]));
      deps = merge(deps, premises[i].oracles_);
    }
    return Provable(inf.conclusion(), deps);
  }

  static Provable mp(const Provable& imp, const Provable& ant) {
    const Formula& f = imp.formula();
    if (f.kind() != FormulaKind::Imply) throw KernelError("modus ponens needs an implication, got " + pretty(f));
    if (!(f.left() == ant.formula()))
      throw KernelError("antecedent " + pretty(f.left()) + " does not match " + pretty(ant.formula()));
    return Provable(f.right(), merge(imp.oracles_, ant.oracles_));
  }

  static Provable allgen(const Provable& p, const Variable& x) {
    return Provable(Formula::forall(x, p.formula()), p.oracles_);
  }

  /// Uniform renaming: swaps x with y and x' with y' throughout. Formulas
  /// with game symbols are rejected since their bound variables are unknown.
  static Provable ur(const Provable& p, const Variable& x, const Variable& y) {
    if (x.order != 0 || y.order != 0) throw KernelError("renaming needs non-differential variables");
    if (x == y) throw KernelError("renaming needs two distinct variables");
    return Provable(uniform_rename(p.formula(), x, y), p.oracles_);
  }

  /// Rule BR. The fresh variable is read off the premise.
  static Provable br(const Provable& premise, const Formula& target) {
    auto shape = [](const Formula& f, const char* what) {
      if (f.kind() != FormulaKind::Imply) throw KernelError(std::string(what) + " is not an implication");
      const Formula& m = f.right();
      if ((m.kind() != FormulaKind::Diamond && m.kind() != FormulaKind::Box) || m.game().kind() != GameKind::Assign)
        throw KernelError(std::string(what) + " does not end in an assignment modality");
      return m;
    };
    const Formula& m = shape(target, "target");
    const Formula& pm = shape(premise.formula(), "premise");
    const Variable& x = m.game().target();
    const Variable& y = pm.game().target();
    const Formula& psi = m.body();
    if (x.differential() || y.differential()) throw KernelError("renamed variables must not be differential");
    if (x == y) throw KernelError("renaming " + x.str() + " to itself");
    VarSet occurring = occurring_vars(Expression(psi));
    if (occurring.contains(y) || occurring.contains(y.prime()))
      throw KernelError(y.str() + " or " + y.prime().str() + " occurs in " + pretty(psi));
    Formula renamed = uniform_rename(psi, x, y);
    Formula expected = Formula::imply(
        target.left(),
        Formula::modality(m.kind(), Game::assign(y, m.game().rhs()),
                          Formula::modality(m.kind(), Game::assign(y.prime(), Term::var(x.prime())), renamed)));
    if (!(expected == premise.formula()))
      throw KernelError("premise " + pretty(premise.formula()) + " is not the renaming " + pretty(expected));
    return Provable(target, premise.oracles_);
  }

  /// Contextual equivalence: from a proved `a <-> b` and a proved formula,
  /// derives `target` if it differs only by replacing occurrences of one side
  /// by the other.
  static Provable ce(const Provable& eq, const Provable& base, const Formula& target) {
    const Formula& e = eq.formula();
    if (e.kind() != FormulaKind::Equiv) throw KernelError("contextual equivalence needs an equivalence, got " + pretty(e));
    if (!kernel_detail::Congruence{e.left(), e.right()}.formula(base.formula(), target))
      throw KernelError(pretty(target) + " does not follow from " + pretty(base.formula()) + " by replacing " +
                        pretty(e.left()) + " with " + pretty(e.right()));
    return Provable(target, merge(eq.oracles_, base.oracles_));
  }

  /// A trusted base-logic fact.
  static Provable oracle(const Formula& f) {
    return Provable(f, std::make_shared<const std::vector<Formula>>(std::vector<Formula>{f}));
  }

 private:
  static Provable::Oracles none() {
    static const Provable::Oracles empty = std::make_shared<const std::vector<Formula>>();
    return empty;
  }

  static Provable::Oracles merge(const Provable::Oracles& a, const Provable::Oracles& b) {
    if (b->empty() || a == b) return a;
    if (a->empty()) return b;
    std::vector<Formula> all = *a;
    for (const auto& f : *b) {
      bool seen = false;
      for (const auto& g : all) seen = seen || g == f;
      if (!seen) all.push_back(f);
    }
    return std::make_shared<const std::vector<Formula>>(std::move(all));
  }
};

}  // namespace dgl
