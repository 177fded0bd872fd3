// Proof scripts (.dglp): one step per line, checked by the kernel in order.
//
//   # comment
//   let NAME = axiom ID
//   let NAME = us STEP "substitution"
//   let NAME = usr RULE|STEP "substitution"
//   let NAME = infer RULE|STEP PREMISE...
//   let NAME = mp IMPLICATION ANTECEDENT
//   let NAME = allgen STEP VAR
//   let NAME = br STEP "target"
//   let NAME = ce EQUIVALENCE STEP "target"
//   let NAME = oracle "formula"
//   qed "formula"
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dgl/kernel.hpp"
#include "dgl/parser.hpp"
#include "dgl/printer.hpp"
#include "dgl/usubst.hpp"
#include "dgl/well_formed.hpp"

namespace dgl {

struct ScriptArg {
  std::string text;
  bool quoted = false;
};

struct ScriptLine {
  int line = 0;
  /// Empty for `qed`.
  std::string name;
  std::string op;
  std::vector<ScriptArg> args;
};

class ProofError : public std::runtime_error {
 public:
  ProofError(int step, int line, const std::string& reason)
      : std::runtime_error("step " + std::to_string(step) + " (line " + std::to_string(line) + "): " + reason),
        step(step),
        line(line),
        reason(reason) {}
  int step;
  int line;
  std::string reason;
};

struct ProofReport {
  bool accepted = false;
  std::vector<std::pair<std::string, Formula>> derived;
  /// Every oracle formula, in script order. These are trusted, not checked.
  std::vector<Formula> oracles;
  std::optional<ProofError> error;
};

namespace script_detail {

inline std::vector<ScriptArg> split_words(const std::string& s, int line) {
  std::vector<ScriptArg> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    } else if (s[i] == '"') {
      std::size_t j = s.find('"', i + 1);
      if (j == std::string::npos) throw ProofError(0, line, "unterminated string");
      out.push_back({s.substr(i + 1, j - i - 1), true});
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '"') ++j;
      out.push_back({s.substr(i, j - i), false});
      i = j;
    }
  }
  return out;
}

}  // namespace script_detail

/// Splits a script into steps. Syntax errors carry step index 0.
inline std::vector<ScriptLine> parse_script(std::string_view text) {
  std::vector<ScriptLine> steps;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto words = script_detail::split_words(raw, line);
    if (words.empty() || (!words[0].quoted && words[0].text.starts_with("#"))) continue;
    ScriptLine s;
    s.line = line;
    if (!words[0].quoted && words[0].text == "qed") {
      s.op = "qed";
      s.args.assign(words.begin() + 1, words.end());
    } else {
      if (words.size() < 4 || words[0].quoted || words[0].text != "let" || words[2].text != "=" || words[1].quoted)
        throw ProofError(0, line, "expected `let NAME = STEP ARGS` or `qed \"formula\"`");
      s.name = words[1].text;
      s.op = words[3].text;
      s.args.assign(words.begin() + 4, words.end());
    }
    steps.push_back(std::move(s));
  }
  return steps;
}

inline std::string render_script(const std::vector<ScriptLine>& steps) {
  std::string out;
  for (const auto& s : steps) {
    out += s.op == "qed" ? "qed" : "let " + s.name + " = " + s.op;
    for (const auto& a : s.args) out += a.quoted ? " \"" + a.text + "\"" : " " + a.text;
    out += "\n";
  }
  return out;
}

namespace script_detail {

using Value = std::variant<Provable, Inference>;

class Checker {
 public:
  ProofReport run(const std::vector<ScriptLine>& steps) {
    ProofReport rep;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      step_ = static_cast<int>(i) + 1;
      line_ = steps[i].line;
      try {
        execute(steps[i], rep, i + 1 == steps.size());
      } catch (const ProofError&) {
        throw;
      } catch (const std::exception& e) {
        fail(e.what());
      }
    }
    if (steps.empty() || steps.back().op != "qed") {
      step_ = static_cast<int>(steps.size());
      fail("script does not end with qed");
    }
    rep.accepted = true;
    return rep;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const { throw ProofError(step_, line_, why); }

  void arity(const ScriptLine& s, std::size_t words, std::size_t quoted) const {
    std::size_t w = 0, q = 0;
    for (const auto& a : s.args) (a.quoted ? q : w)++;
    if (w != words || q != quoted || (quoted && !s.args.back().quoted))
      fail(s.op + " expects " + std::to_string(words) + " name(s) followed by " + std::to_string(quoted) +
           " quoted argument(s)");
  }

  const Value& lookup(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) fail("unknown step " + name);
    return it->second;
  }
  const Provable& provable(const std::string& name) const {
    const auto* p = std::get_if<Provable>(&lookup(name));
    if (!p) fail(name + " is an inference, not a formula");
    return *p;
  }
  Inference inference(const std::string& name) const {
    if (values_.count(name)) {
      const auto* r = std::get_if<Inference>(&values_.at(name));
      if (!r) fail(name + " is a formula, not an inference");
      return *r;
    }
    auto id = rule_from_name(name);
    if (!id) fail("unknown rule or step " + name);
    return Kernel::rule(*id);
  }

  void execute(const ScriptLine& s, ProofReport& rep, bool last) {
    const auto& a = s.args;
    if (s.op == "qed") {
      arity(s, 0, 1);
      if (!last) fail("qed must be the last step");
      if (!last_) fail("qed before any derived formula");
      Formula goal = parse_formula(a[0].text);
      if (!(goal == last_->formula()))
        fail("qed " + pretty(goal) + " does not match the last derived formula " + pretty(last_->formula()));
      return;
    }
    if (values_.count(s.name)) fail("step name " + s.name + " is already used");
    std::optional<Value> v;
    if (s.op == "axiom") {
      arity(s, 1, 0);
      auto id = axiom_from_name(a[0].text);
      if (!id) fail("unknown axiom " + a[0].text);
      v = Kernel::axiom(*id);
    } else if (s.op == "us") {
      arity(s, 1, 1);
      v = Kernel::us(parse_subst(a[1].text), provable(a[0].text));
    } else if (s.op == "usr") {
      arity(s, 1, 1);
      v = Kernel::usr(parse_subst(a[1].text), inference(a[0].text));
    } else if (s.op == "infer") {
      if (a.empty()) fail("infer needs an inference");
      std::vector<Provable> premises;
      for (std::size_t i = 1; i < a.size(); ++i) {
        if (a[i].quoted) fail("infer takes step names only");
        premises.push_back(provable(a[i].text));
      }
      v = Kernel::infer(inference(a[0].text), premises);
    } else if (s.op == "mp") {
      arity(s, 2, 0);
      v = Kernel::mp(provable(a[0].text), provable(a[1].text));
    } else if (s.op == "allgen") {
      arity(s, 2, 0);
      Term x = parse_term(a[1].text);
      if (x.kind() != TermKind::Var) fail("allgen needs a variable, got " + a[1].text);
      v = Kernel::allgen(provable(a[0].text), x.variable());
    } else if (s.op == "ur") {
      arity(s, 3, 0);
      Term x = parse_term(a[1].text), y = parse_term(a[2].text);
      if (x.kind() != TermKind::Var || y.kind() != TermKind::Var) fail("ur needs two variables");
      v = Kernel::ur(provable(a[0].text), x.variable(), y.variable());
    } else if (s.op == "br") {
      arity(s, 1, 1);
      v = Kernel::br(provable(a[0].text), parse_formula(a[1].text));
    } else if (s.op == "ce") {
      arity(s, 2, 1);
      v = Kernel::ce(provable(a[0].text), provable(a[1].text), parse_formula(a[2].text));
    } else if (s.op == "oracle") {
      arity(s, 0, 1);
      Formula f = parse_formula(a[0].text);
      rep.oracles.push_back(f);
      v = Kernel::oracle(f);
    } else {
      fail("unknown step kind " + s.op);
    }
    if (const auto* p = std::get_if<Provable>(&*v)) {
      rep.derived.emplace_back(s.name, p->formula());
      last_ = *p;
    }
    values_.emplace(s.name, std::move(*v));
  }

  std::map<std::string, Value> values_;
  std::optional<Provable> last_;
  int step_ = 0;
  int line_ = 0;
};

}  // namespace script_detail

/// Checks a script; never throws. On rejection `error` names the first
/// failing step (1-based, counting non-comment lines).
inline ProofReport check_proof(std::string_view text) {
  ProofReport rep;
  try {
    return script_detail::Checker{}.run(parse_script(text));
  } catch (const ProofError& e) {
    rep.error = e;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Single-node mutations of the formulas and substitutions in a script.

namespace script_detail {

class Mutator {
 public:
  Mutator(long target, std::mt19937_64& rng) : target_(target), rng_(rng) {}

  long visited() const { return counter_; }
  bool done() const { return counter_ > target_ && target_ >= 0; }

  Term term(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var:
        if (hit()) return Term::var(other_var(t.variable()));
        return t;
      case TermKind::Number:
        if (hit()) return Term::number(t.value() + 1);
        return t;
      case TermKind::Apply:
        if (!t.has_arg()) return t;
        return Term::apply(t.symbol(), term(t.arg()));
      case TermKind::Neg: return Term::neg(term(t.operand()));
      case TermKind::Power: return Term::power(term(t.operand()), t.exponent());
      case TermKind::Differential: return Term::differential(term(t.operand()));
      default: {
        TermKind k = t.kind();
        if (hit()) k = pick({TermKind::Plus, TermKind::Minus, TermKind::Times}, k);
        Term l = term(t.left());
        return Term::binary(k, l, term(t.right()));
      }
    }
  }

  Formula formula(const Formula& f) {
    FormulaKind k = f.kind();
    if (is_comparison(k)) {
      if (hit())
        k = pick({FormulaKind::Geq, FormulaKind::Gt, FormulaKind::Leq, FormulaKind::Lt, FormulaKind::Eq, FormulaKind::Neq},
                 k);
      Term l = term(f.lhs());
      return Formula::compare(k, l, term(f.rhs()));
    }
    switch (k) {
      case FormulaKind::Pred:
        if (!f.has_arg()) return f;
        return Formula::pred(f.symbol(), term(f.arg()));
      case FormulaKind::True: return hit() ? Formula::falsity() : f;
      case FormulaKind::False: return hit() ? Formula::truth() : f;
      case FormulaKind::Not: return Formula::negate(formula(f.left()));
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        if (hit()) k = k == FormulaKind::Exists ? FormulaKind::Forall : FormulaKind::Exists;
        return Formula::quantifier(k, f.bound(), formula(f.body()));
      }
      case FormulaKind::Diamond:
      case FormulaKind::Box: {
        if (hit()) k = k == FormulaKind::Diamond ? FormulaKind::Box : FormulaKind::Diamond;
        Game g = game(f.game());
        return Formula::modality(k, g, formula(f.body()));
      }
      default: {
        if (hit()) k = pick({FormulaKind::And, FormulaKind::Or, FormulaKind::Imply, FormulaKind::Equiv}, k);
        Formula l = formula(f.left());
        return Formula::connective(k, l, formula(f.right()));
      }
    }
  }

  Game game(const Game& g) {
    switch (g.kind()) {
      case GameKind::Symbol: return g;
      case GameKind::Assign: {
        Variable x = hit() ? other_var(g.target()) : g.target();
        return Game::assign(x, term(g.rhs()));
      }
      case GameKind::Ode: {
        std::vector<OdeEquation> eqs;
        for (const auto& e : g.equations()) eqs.push_back({e.x, term(e.rhs)});
        return Game::ode(eqs, formula(g.domain()));
      }
      case GameKind::Test: return Game::test(formula(g.condition()));
      case GameKind::Choice:
      case GameKind::Seq: {
        GameKind k = g.kind();
        if (hit()) k = k == GameKind::Choice ? GameKind::Seq : GameKind::Choice;
        Game l = game(g.left());
        return Game::binary(k, l, game(g.right()));
      }
      case GameKind::Loop:
      case GameKind::Dual: return Game::unary(g.kind(), game(g.operand()));
      case GameKind::DiffGame: {
        std::vector<OdeEquation> eqs;
        for (const auto& e : g.equations()) eqs.push_back({e.x, term(e.rhs)});
        Formula ys = formula(g.y_set());
        return Game::diff_game(eqs, g.y(), ys, g.z(), formula(g.z_set()));
      }
    }
    return g;
  }

  USubst subst(const USubst& s) {
    USubst out;
    for (const auto& [key, e] : s.entries()) {
      Replacement r = std::visit([this](const auto& x) -> Replacement { return visit(x); }, e.replacement);
      out.add(key, r);
    }
    return out;
  }

 private:
  Term visit(const Term& t) { return term(t); }
  Formula visit(const Formula& f) { return formula(f); }
  Game visit(const Game& g) { return game(g); }

  bool hit() { return counter_++ == target_; }

  template <class K>
  K pick(std::initializer_list<K> options, K current) {
    std::vector<K> others;
    for (K o : options)
      if (o != current) others.push_back(o);
    return others[std::uniform_int_distribution<std::size_t>(0, others.size() - 1)(rng_)];
  }

  Variable other_var(const Variable& v) {
    static const char* names[] = {"x", "y", "z", "t", "u"};
    std::vector<std::string> others;
    for (const char* n : names)
      if (v.name != n) others.push_back(n);
    return Variable(others[std::uniform_int_distribution<std::size_t>(0, others.size() - 1)(rng_)], v.order);
  }

  long target_;
  long counter_ = 0;
  std::mt19937_64& rng_;
};

inline long count_nodes(const ScriptArg& a, const std::string& op, std::mt19937_64& rng) {
  Mutator m(-1, rng);
  if (op == "us" || op == "usr")
    m.subst(parse_subst(a.text));
  else
    m.formula(parse_formula(a.text));
  return m.visited();
}

}  // namespace script_detail

struct ScriptMutant {
  std::string text;
  /// 1-based index of the mutated step.
  int step = 0;
  std::string original;
  std::string mutated;
};

/// Produces `count` distinct well-formed single-node mutants of the quoted
/// arguments of a script.
inline std::vector<ScriptMutant> mutate_script(std::string_view text, int count, std::uint64_t seed) {
  auto steps = parse_script(text);
  std::mt19937_64 rng(seed);
  struct Site {
    std::size_t step, arg;
    long nodes;
  };
  std::vector<Site> sites;
  long total = 0;
  for (std::size_t i = 0; i < steps.size(); ++i)
    for (std::size_t j = 0; j < steps[i].args.size(); ++j)
      if (steps[i].args[j].quoted) {
        long n = script_detail::count_nodes(steps[i].args[j], steps[i].op, rng);
        sites.push_back({i, j, n});
        total += n;
      }
  std::vector<ScriptMutant> out;
  if (total == 0) return out;
  std::vector<std::string> seen;
  for (int attempt = 0; static_cast<int>(out.size()) < count && attempt < 100 * count; ++attempt) {
    long k = std::uniform_int_distribution<long>(0, total - 1)(rng);
    std::size_t si = 0;
    while (k >= sites[si].nodes) k -= sites[si++].nodes;
    const Site& site = sites[si];
    ScriptLine& line = steps[site.step];
    const std::string& op = line.op;
    const std::string original = line.args[site.arg].text;
    std::string mutated;
    try {
      script_detail::Mutator m(k, rng);
      if (op == "us" || op == "usr") {
        USubst before = parse_subst(original);
        USubst after = m.subst(before);
        mutated = pretty(after);
        if (pretty(before) == mutated) continue;
        parse_subst(mutated);
      } else {
        Formula before = parse_formula(original);
        Formula after = m.formula(before);
        if (after == before || !well_formed(after).empty()) continue;
        mutated = pretty(after);
        if (!(parse_formula(mutated) == after)) continue;
      }
    } catch (const std::exception&) {
      continue;
    }
    bool dup = false;
    std::string key = std::to_string(site.step) + ":" + std::to_string(site.arg) + ":" + mutated;
    for (const auto& s : seen) dup = dup || s == key;
    if (dup) continue;
    seen.push_back(key);
    line.args[site.arg].text = mutated;
    out.push_back({render_script(steps), static_cast<int>(site.step) + 1, original, mutated});
    line.args[site.arg].text = original;
  }
  return out;
}

}  // namespace dgl
