// Exact semantic evaluation of terms and of quantifier-free, modality-free
// formulas, adjoint interpretations, and randomized checks that substituting
// then evaluating agrees with evaluating under the adjoint.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgl/onepass.hpp"
#include "dgl/polynomial.hpp"
#include "dgl/printer.hpp"
#include "dgl/random_ast.hpp"
#include "dgl/static_semantics.hpp"
#include "dgl/syntax.hpp"
#include "dgl/usubst.hpp"

namespace dgl {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Total map from variables to rationals; unlisted variables are 0.
class State {
 public:
  State() = default;
  State(std::initializer_list<std::pair<const Variable, Rational>> init) : values_(init) {}

  Rational operator()(const Variable& v) const {
    auto it = values_.find(v);
    return it == values_.end() ? Rational(0) : it->second;
  }
  void set(const Variable& v, Rational q) { values_[v] = std::move(q); }
  const std::map<Variable, Rational>& values() const { return values_; }

  std::string str() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [v, q] : values_) {
      if (!first) os << ", ";
      first = false;
      os << v.str() << "=" << q;
    }
    os << "}";
    return os.str();
  }

  friend bool operator==(const State&, const State&) = default;

 private:
  std::map<Variable, Rational> values_;
};

/// Function symbols are interpreted by dot-terms, predicate symbols by
/// dot-formulas. Both may mention only the placeholder and numbers.
struct Interpretation {
  std::map<Symbol, Term> functions;
  std::map<Symbol, Formula> predicates;
};

namespace oracle_detail {

/// The placeholder is evaluated as this pseudo-variable.
inline const Variable& dot_var() {
  static const Variable d(".");
  return d;
}

inline void check_dot_only(const Expression& e, const Symbol& key) {
  if (!occurring_vars(e).empty() || !signature(e).empty())
    throw EvalError("interpretation of " + USubst::key_string(key) + " must mention only . and numbers");
}

/// What evaluation needs: each function as a polynomial in the placeholder,
/// each predicate as a truth function of its argument.
struct Semantics {
  std::map<Symbol, Polynomial> functions;
  std::map<Symbol, std::function<bool(const Rational&)>> predicates;
};

class Evaluator {
 public:
  explicit Evaluator(const Semantics& sem) : sem_(sem) {}

  Rational term(const State& s, const Term& t) const {
    switch (t.kind()) {
      case TermKind::Var: return s(t.variable());
      case TermKind::Number: return t.value();
      case TermKind::Apply: {
        if (t.symbol().is_dot()) return s(dot_var());
        const Polynomial& p = function(t.symbol());
        Rational d = t.has_arg() ? term(s, t.arg()) : Rational(0);
        return p.eval([&](const Variable&) { return d; });
      }
      case TermKind::Plus: return term(s, t.left()) + term(s, t.right());
      case TermKind::Minus: return term(s, t.left()) - term(s, t.right());
      case TermKind::Times: return term(s, t.left()) * term(s, t.right());
      case TermKind::Neg: return -term(s, t.operand());
      case TermKind::Power: return Polynomial::ipow(term(s, t.operand()), t.exponent());
      case TermKind::Differential: return poly(t).eval(s);
    }
    throw EvalError("unknown term");
  }

  /// The term as a polynomial in its variables and the placeholder, with
  /// differentials expanded to sum v' * d/dv.
  Polynomial poly(const Term& t) const {
    switch (t.kind()) {
      case TermKind::Var: return Polynomial::var(t.variable());
      case TermKind::Number: return Polynomial::constant(t.value());
      case TermKind::Apply: {
        if (t.symbol().is_dot()) return Polynomial::var(dot_var());
        const Polynomial& p = function(t.symbol());
        if (!t.has_arg()) return p;
        return p.compose(dot_var(), poly(t.arg()));
      }
      case TermKind::Plus: return poly(t.left()) + poly(t.right());
      case TermKind::Minus: return poly(t.left()) - poly(t.right());
      case TermKind::Times: return poly(t.left()) * poly(t.right());
      case TermKind::Neg: return -poly(t.operand());
      case TermKind::Power: return poly(t.operand()).pow(t.exponent());
      case TermKind::Differential: {
        Polynomial p = poly(t.operand());
        Polynomial r;
        for (const Variable& v : p.variables()) {
          if (v == dot_var()) continue;
          if (v.differential()) throw EvalError("differential of a differential variable");
          r = r + Polynomial::var(v.prime()) * p.partial(v);
        }
        return r;
      }
    }
    throw EvalError("unknown term");
  }

  bool formula(const State& s, const Formula& f) const {
    switch (f.kind()) {
      case FormulaKind::Geq: return term(s, f.lhs()) >= term(s, f.rhs());
      case FormulaKind::Gt: return term(s, f.lhs()) > term(s, f.rhs());
      case FormulaKind::Leq: return term(s, f.lhs()) <= term(s, f.rhs());
      case FormulaKind::Lt: return term(s, f.lhs()) < term(s, f.rhs());
      case FormulaKind::Eq: return term(s, f.lhs()) == term(s, f.rhs());
      case FormulaKind::Neq: return term(s, f.lhs()) != term(s, f.rhs());
      case FormulaKind::Pred: {
        auto it = sem_.predicates.find(f.symbol());
        if (it == sem_.predicates.end()) throw EvalError("uninterpreted predicate " + USubst::key_string(f.symbol()));
        return it->second(f.has_arg() ? term(s, f.arg()) : Rational(0));
      }
      case FormulaKind::True: return true;
      case FormulaKind::False: return false;
      case FormulaKind::Not: return !formula(s, f.left());
      case FormulaKind::And: return formula(s, f.left()) && formula(s, f.right());
      case FormulaKind::Or: return formula(s, f.left()) || formula(s, f.right());
      case FormulaKind::Imply: return !formula(s, f.left()) || formula(s, f.right());
      case FormulaKind::Equiv: return formula(s, f.left()) == formula(s, f.right());
      case FormulaKind::Exists:
      case FormulaKind::Forall: throw EvalError("cannot evaluate a quantifier");
      case FormulaKind::Diamond:
      case FormulaKind::Box: throw EvalError("cannot evaluate a modality");
    }
    throw EvalError("unknown formula");
  }

 private:
  const Polynomial& function(const Symbol& f) const {
    auto it = sem_.functions.find(f);
    if (it == sem_.functions.end()) throw EvalError("uninterpreted function " + USubst::key_string(f));
    return it->second;
  }

  const Semantics& sem_;
};

inline Semantics semantics(const Interpretation& I) {
  Semantics sem;
  Semantics empty;
  for (const auto& [f, t] : I.functions) {
    check_dot_only(Expression(t), f);
    sem.functions[f] = Evaluator(empty).poly(t);
  }
  for (const auto& [p, phi] : I.predicates) {
    check_dot_only(Expression(phi), p);
    sem.predicates[p] = [phi](const Rational& d) {
      Semantics none;
      State s;
      s.set(dot_var(), d);
      return Evaluator(none).formula(s, phi);
    };
  }
  return sem;
}

/// The adjoint: every symbol bound by `s` means what its replacement means at
/// the anchor state `omega` (as a function of the argument); other symbols
/// keep their meaning under `I`.
inline Semantics adjoint(const USubst& s, const Semantics& base, const State& omega) {
  Semantics sem = base;
  auto lookup = [&](const Variable& v) { return omega(v); };
  for (const auto& [key, e] : s.entries()) {
    if (e.key.kind == SymbolKind::Function) {
      Polynomial p = Evaluator(base).poly(std::get<Term>(e.replacement));
      sem.functions[e.key] = p.partial_eval(lookup, dot_var());
    } else if (e.key.kind == SymbolKind::Predicate) {
      Formula phi = std::get<Formula>(e.replacement);
      auto shared = std::make_shared<Semantics>(base);
      sem.predicates[e.key] = [phi, shared, omega](const Rational& d) {
        State at = omega;
        at.set(dot_var(), d);
        return Evaluator(*shared).formula(at, phi);
      };
    }
  }
  return sem;
}

}  // namespace oracle_detail

inline Rational eval_term(const Interpretation& I, const State& nu, const Term& t) {
  auto sem = oracle_detail::semantics(I);
  return oracle_detail::Evaluator(sem).term(nu, t);
}

inline bool eval_qff(const Interpretation& I, const State& nu, const Formula& f) {
  auto sem = oracle_detail::semantics(I);
  return oracle_detail::Evaluator(sem).formula(nu, f);
}

/// Value of `t` at `nu` under the adjoint interpretation anchored at `omega`.
inline Rational adjoint_eval_term(const USubst& s, const Interpretation& I, const State& omega, const State& nu,
                                  const Term& t) {
  auto sem = oracle_detail::adjoint(s, oracle_detail::semantics(I), omega);
  return oracle_detail::Evaluator(sem).term(nu, t);
}

inline bool adjoint_eval_qff(const USubst& s, const Interpretation& I, const State& omega, const State& nu,
                             const Formula& f) {
  auto sem = oracle_detail::adjoint(s, oracle_detail::semantics(I), omega);
  return oracle_detail::Evaluator(sem).formula(nu, f);
}

/// Small rational with numerator and denominator in [-9, 9].
inline Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  return Rational(num(rng), den(rng));
}

/// A state agreeing with `omega` outside `U`. Members of `U` that `omega`
/// lists explicitly, and all finite members of `U`, are resampled.
inline State sample_variation(const State& omega, const VarSet& U, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  State nu = omega;
  for (const auto& [v, q] : omega.values())
    if (U.contains(v)) nu.set(v, small_rational(rng));
  if (!U.cofinite())
    for (const Variable& v : U.members())
      if (!omega.values().count(v)) nu.set(v, small_rational(rng));
  return nu;
}

inline State random_state(const std::vector<Variable>& vars, std::mt19937_64& rng) {
  State s;
  for (const Variable& v : vars) s.set(v, small_rational(rng));
  return s;
}

/// Random interpretation of f(.), g(), p(.), q() by polynomial dot-terms and
/// dot-formulas.
inline Interpretation random_interpretation(std::mt19937_64& rng) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  auto coeff = [&]() { return Term::number(Rational(pick(7), 1 + pick(3))); };
  std::function<Term(int, bool)> dot_term = [&](int depth, bool dot) -> Term {
    if (depth <= 1 || pick(3) == 0) return dot && pick(2) ? Term::dot() : coeff();
    switch (pick(5)) {
      case 0: return Term::plus(dot_term(depth - 1, dot), dot_term(depth - 1, dot));
      case 1: return Term::times(dot_term(depth - 1, dot), dot_term(depth - 1, dot));
      case 2: return Term::minus(dot_term(depth - 1, dot), dot_term(depth - 1, dot));
      case 3: return Term::neg(dot_term(depth - 1, dot));
      default: return Term::power(dot_term(depth - 1, dot), 2);
    }
  };
  Interpretation I;
  I.functions[Symbol::function("f", 1)] = dot_term(3, true);
  I.functions[Symbol::function("g", 0)] = dot_term(2, false);
  static const FormulaKind ops[] = {FormulaKind::Geq, FormulaKind::Gt, FormulaKind::Leq,
                                    FormulaKind::Lt,  FormulaKind::Eq, FormulaKind::Neq};
  I.predicates[Symbol::predicate("p", 1)] = Formula::compare(ops[pick(6)], dot_term(3, true), dot_term(2, true));
  I.predicates[Symbol::predicate("q", 0)] = Formula::compare(ops[pick(6)], dot_term(2, false), dot_term(1, false));
  return I;
}

struct OracleReport {
  std::size_t trials = 0;
  /// Set when the substitution clashes and nothing could be checked.
  std::optional<std::string> precondition;
  std::optional<std::string> counterexample;

  bool ok() const { return !precondition && !counterexample; }
};

namespace oracle_detail {

inline std::vector<Variable> relevant_vars(const USubst& s, const Expression& e) {
  VarSet vs = occurring_vars(e);
  for (const auto& [key, entry] : s.entries())
    std::visit([&](const auto& r) { vs |= occurring_vars(Expression(r)); }, entry.replacement);
  std::vector<Variable> out;
  for (const Variable& v : vs.members()) {
    out.push_back(v.base());
    out.push_back(v.prime());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class Substituted, class Lhs, class Rhs>
OracleReport run_trials(const std::vector<Variable>& vars, const VarSet& U, std::size_t trials, std::uint64_t seed,
                        const Substituted& substituted, Lhs&& lhs, Rhs&& rhs) {
  OracleReport rep;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < trials; ++i) {
    State omega = random_state(vars, rng);
    State nu = sample_variation(omega, U, rng());
    auto a = lhs(nu, substituted);
    auto b = rhs(omega, nu);
    ++rep.trials;
    if (a != b) {
      std::ostringstream os;
      os << "omega=" << omega.str() << " nu=" << nu.str() << ": substituted gives " << a << ", adjoint gives " << b;
      rep.counterexample = os.str();
      break;
    }
  }
  return rep;
}

}  // namespace oracle_detail

/// Substitute-then-evaluate against evaluate-under-adjoint at random
/// U-variations, with exact equality.
inline OracleReport check_term_substitution(const USubst& s, const VarSet& U, const Term& t, const Interpretation& I,
                                 std::size_t trials, std::uint64_t seed) {
  auto r = subst_term(s, U, t);
  if (!r.ok()) {
    OracleReport rep;
    rep.precondition = r.clash().describe();
    return rep;
  }
  auto sem = oracle_detail::semantics(I);
  return oracle_detail::run_trials(
      oracle_detail::relevant_vars(s, Expression(t)), U, trials, seed, r.value(),
      [&](const State& nu, const Term& st) { return oracle_detail::Evaluator(sem).term(nu, st); },
      [&](const State& omega, const State& nu) {
        auto adj = oracle_detail::adjoint(s, sem, omega);
        return oracle_detail::Evaluator(adj).term(nu, t);
      });
}

/// The same check for quantifier-free, modality-free formulas.
inline OracleReport check_formula_substitution(const USubst& s, const VarSet& U, const Formula& f, const Interpretation& I,
                                      std::size_t trials, std::uint64_t seed) {
  auto r = subst_formula(s, U, f);
  if (!r.ok()) {
    OracleReport rep;
    rep.precondition = r.clash().describe();
    return rep;
  }
  auto sem = oracle_detail::semantics(I);
  return oracle_detail::run_trials(
      oracle_detail::relevant_vars(s, Expression(f)), U, trials, seed, r.value(),
      [&](const State& nu, const Formula& sf) { return oracle_detail::Evaluator(sem).formula(nu, sf); },
      [&](const State& omega, const State& nu) {
        auto adj = oracle_detail::adjoint(s, sem, omega);
        return oracle_detail::Evaluator(adj).formula(nu, f);
      });
}

/// Generator settings for the evaluable fragment.
inline GenConfig evaluable_config() {
  GenConfig c;
  c.games = false;
  c.quantifiers = false;
  return c;
}

struct CampaignResult {
  std::size_t instances = 0;
  std::size_t checked = 0;
  std::size_t clashes = 0;
  std::vector<std::string> failures;
};

/// Random campaign: `instances` draws of (sigma, U, theta, I, omega, nu),
/// counting only draws where the substitution is defined.
inline CampaignResult substitution_campaign(std::size_t instances, std::uint64_t seed, bool formulas = false) {
  AstGenerator gen(seed, evaluable_config());
  CampaignResult res;
  while (res.checked < instances) {
    USubst s = gen.subst(3);
    VarSet U = gen.taboo();
    Interpretation I = random_interpretation(gen.rng());
    ++res.instances;
    OracleReport rep;
    std::string what;
    if (formulas) {
      Formula f = gen.formula(4);
      rep = check_formula_substitution(s, U, f, I, 1, gen.rng()());
      what = pretty(f);
    } else {
      Term t = gen.term(5);
      rep = check_term_substitution(s, U, t, I, 1, gen.rng()());
      what = pretty(t);
    }
    if (rep.precondition) {
      ++res.clashes;
      continue;
    }
    ++res.checked;
    if (rep.counterexample && res.failures.size() < 10)
      res.failures.push_back(what + " under " + pretty(s) + " taboo " + U.str() + ": " + *rep.counterexample);
  }
  return res;
}

}  // namespace dgl
