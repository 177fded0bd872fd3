// Abstract syntax of differential game logic: terms, formulas, hybrid games
// (including the atomic differential game).
//
// All three sorts are immutable handles to shared nodes. Copying is cheap and
// values may be shared freely between threads.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dgl/varset.hpp"

namespace dgl {

using Rational = boost::multiprecision::cpp_rational;

enum class SymbolKind : std::uint8_t { Function, Predicate, Game };

struct Symbol {
  SymbolKind kind = SymbolKind::Function;
  std::string name;
  int arity = 0;

  static Symbol function(std::string n, int arity) { return {SymbolKind::Function, std::move(n), arity}; }
  static Symbol predicate(std::string n, int arity) { return {SymbolKind::Predicate, std::move(n), arity}; }
  static Symbol game(std::string n) { return {SymbolKind::Game, std::move(n), 0}; }
  /// The reserved argument placeholder `.` (a 0-ary function symbol).
  static Symbol dot() { return {SymbolKind::Function, ".", 0}; }

  bool is_dot() const { return kind == SymbolKind::Function && name == "."; }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

inline const char* kind_name(SymbolKind k) {
  switch (k) {
    case SymbolKind::Function: return "function";
    case SymbolKind::Predicate: return "predicate";
    case SymbolKind::Game: return "game";
  }
  return "?";
}

namespace detail {
struct TermNode;
struct FormulaNode;
struct GameNode;
}  // namespace detail

enum class TermKind : std::uint8_t { Var, Number, Apply, Plus, Minus, Times, Neg, Power, Differential };

class Term {
 public:
  Term() = default;

  static Term var(Variable v);
  static Term var(const std::string& name, int order = 0) { return var(Variable(name, order)); }
  static Term number(Rational q);
  static Term number(long long n) { return number(Rational(n)); }
  static Term apply(Symbol f, std::optional<Term> arg = std::nullopt);
  static Term dot() { return apply(Symbol::dot()); }
  static Term plus(Term a, Term b) { return binary(TermKind::Plus, std::move(a), std::move(b)); }
  static Term minus(Term a, Term b) { return binary(TermKind::Minus, std::move(a), std::move(b)); }
  static Term times(Term a, Term b) { return binary(TermKind::Times, std::move(a), std::move(b)); }
  static Term neg(Term a);
  static Term power(Term base, unsigned exponent);
  static Term differential(Term a);
  static Term binary(TermKind k, Term a, Term b);

  bool null() const { return !node_; }
  TermKind kind() const;
  const Variable& variable() const;
  const Rational& value() const;
  const Symbol& symbol() const;
  bool has_arg() const;
  const Term& arg() const;
  const Term& left() const;
  const Term& right() const;
  /// Child of Neg, Power, Differential.
  const Term& operand() const;
  unsigned exponent() const;

  bool is_binary() const {
    auto k = kind();
    return k == TermKind::Plus || k == TermKind::Minus || k == TermKind::Times;
  }

  std::size_t size() const;
  const void* id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const detail::TermNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::TermNode> node_;
};

enum class FormulaKind : std::uint8_t {
  Geq, Gt, Leq, Lt, Eq, Neq,
  Pred, True, False,
  Not, And, Or, Imply, Equiv,
  Exists, Forall,
  Diamond, Box
};

inline bool is_comparison(FormulaKind k) { return k <= FormulaKind::Neq; }

class Game;

class Formula {
 public:
  Formula() = default;

  static Formula compare(FormulaKind op, Term lhs, Term rhs);
  static Formula geq(Term a, Term b) { return compare(FormulaKind::Geq, std::move(a), std::move(b)); }
  static Formula eq(Term a, Term b) { return compare(FormulaKind::Eq, std::move(a), std::move(b)); }
  static Formula pred(Symbol p, std::optional<Term> arg = std::nullopt);
  static Formula truth();
  static Formula falsity();
  static Formula negate(Formula a);
  static Formula conj(Formula a, Formula b) { return connective(FormulaKind::And, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return connective(FormulaKind::Or, std::move(a), std::move(b)); }
  static Formula imply(Formula a, Formula b) { return connective(FormulaKind::Imply, std::move(a), std::move(b)); }
  static Formula equiv(Formula a, Formula b) { return connective(FormulaKind::Equiv, std::move(a), std::move(b)); }
  static Formula connective(FormulaKind k, Formula a, Formula b);
  static Formula exists(Variable x, Formula body) { return quantifier(FormulaKind::Exists, std::move(x), std::move(body)); }
  static Formula forall(Variable x, Formula body) { return quantifier(FormulaKind::Forall, std::move(x), std::move(body)); }
  static Formula quantifier(FormulaKind k, Variable x, Formula body);
  static Formula diamond(Game g, Formula post);
  static Formula box(Game g, Formula post);
  static Formula modality(FormulaKind k, Game g, Formula post);

  bool null() const { return !node_; }
  FormulaKind kind() const;
  // comparisons
  const Term& lhs() const;
  const Term& rhs() const;
  // predicate application
  const Symbol& symbol() const;
  bool has_arg() const;
  const Term& arg() const;
  // Not: left(); binary connectives: left(), right()
  const Formula& left() const;
  const Formula& right() const;
  // quantifiers
  const Variable& bound() const;
  /// Body of a quantifier or postcondition of a modality.
  const Formula& body() const;
  // modalities
  const Game& game() const;

  bool is_connective() const {
    auto k = kind();
    return k == FormulaKind::And || k == FormulaKind::Or || k == FormulaKind::Imply || k == FormulaKind::Equiv;
  }
  bool is_quantifier() const { return kind() == FormulaKind::Exists || kind() == FormulaKind::Forall; }
  bool is_modality() const { return kind() == FormulaKind::Diamond || kind() == FormulaKind::Box; }

  std::size_t size() const;
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const detail::FormulaNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::FormulaNode> node_;
};

enum class GameKind : std::uint8_t { Symbol, Assign, Ode, Test, Choice, Seq, Loop, Dual, DiffGame };

struct OdeEquation {
  Variable x;
  Term rhs;
  friend bool operator==(const OdeEquation&, const OdeEquation&) = default;
};

class Game {
 public:
  Game() = default;

  static Game symbol(Symbol a);
  static Game symbol(const std::string& name) { return symbol(Symbol::game(name)); }
  static Game assign(Variable x, Term rhs);
  static Game ode(std::vector<OdeEquation> eqs, Formula domain);
  static Game test(Formula f);
  static Game choice(Game a, Game b) { return binary(GameKind::Choice, std::move(a), std::move(b)); }
  static Game seq(Game a, Game b) { return binary(GameKind::Seq, std::move(a), std::move(b)); }
  static Game binary(GameKind k, Game a, Game b);
  static Game loop(Game a) { return unary(GameKind::Loop, std::move(a)); }
  static Game dual(Game a) { return unary(GameKind::Dual, std::move(a)); }
  static Game unary(GameKind k, Game a);
  /// x'=θ &d y∈Y & z∈Z (Demon controls y, Angel controls z).
  static Game diff_game(std::vector<OdeEquation> eqs, Variable y, Formula ys, Variable z, Formula zs);

  bool null() const { return !node_; }
  GameKind kind() const;
  const Symbol& symbol() const;
  // Assign
  const Variable& target() const;
  const Term& rhs() const;
  // Ode, DiffGame
  const std::vector<OdeEquation>& equations() const;
  const Formula& domain() const;
  // Test
  const Formula& condition() const;
  // Choice, Seq: left/right; Loop, Dual: operand
  const Game& left() const;
  const Game& right() const;
  const Game& operand() const;
  // DiffGame controls
  const Variable& y() const;
  const Formula& y_set() const;
  const Variable& z() const;
  const Formula& z_set() const;

  std::size_t size() const;
  const void* id() const { return node_.get(); }

  friend bool operator==(const Game& a, const Game& b);

 private:
  explicit Game(std::shared_ptr<const detail::GameNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::GameNode> node_;
};

namespace detail {

struct TermNode {
  TermKind kind;
  std::variant<std::monostate, Variable, Rational, Symbol, unsigned> payload;
  Term a, b;
  std::size_t size = 1;
};

struct FormulaNode {
  FormulaKind kind;
  Term lhs, rhs;  // comparisons; lhs doubles as predicate argument
  Symbol symbol;
  Variable bound;
  Formula a, b;
  Game game;
  std::size_t size = 1;
};

struct GameNode {
  GameKind kind;
  Symbol symbol;
  Variable x;  // Assign target, DiffGame y
  Term rhs;
  std::vector<OdeEquation> eqs;
  Formula f;   // Ode domain, Test condition, DiffGame Y
  Formula f2;  // DiffGame Z
  Variable z;
  Game a, b;
  std::size_t size = 1;
};

[[noreturn]] inline void bad_access(const char* what) {
  throw std::logic_error(std::string("dgl: invalid AST accessor ") + what);
}

}  // namespace detail

// ---- Term -----------------------------------------------------------------

inline Term Term::var(Variable v) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Var;
  n->payload = std::move(v);
  return Term(std::move(n));
}
inline Term Term::number(Rational q) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Number;
  n->payload = std::move(q);
  return Term(std::move(n));
}
inline Term Term::apply(Symbol f, std::optional<Term> arg) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Apply;
  n->payload = std::move(f);
  if (arg) {
    n->size += arg->size();
    n->a = std::move(*arg);
  }
  return Term(std::move(n));
}
inline Term Term::binary(TermKind k, Term a, Term b) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = k;
  n->size += a.size() + b.size();
  n->a = std::move(a);
  n->b = std::move(b);
  return Term(std::move(n));
}
inline Term Term::neg(Term a) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Neg;
  n->size += a.size();
  n->a = std::move(a);
  return Term(std::move(n));
}
inline Term Term::power(Term base, unsigned exponent) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Power;
  n->payload = exponent;
  n->size += base.size();
  n->a = std::move(base);
  return Term(std::move(n));
}
inline Term Term::differential(Term a) {
  auto n = std::make_shared<detail::TermNode>();
  n->kind = TermKind::Differential;
  n->size += a.size();
  n->a = std::move(a);
  return Term(std::move(n));
}

inline TermKind Term::kind() const { return node_->kind; }
inline const Variable& Term::variable() const {
  if (kind() != TermKind::Var) detail::bad_access("Term::variable");
  return std::get<Variable>(node_->payload);
}
inline const Rational& Term::value() const {
  if (kind() != TermKind::Number) detail::bad_access("Term::value");
  return std::get<Rational>(node_->payload);
}
inline const Symbol& Term::symbol() const {
  if (kind() != TermKind::Apply) detail::bad_access("Term::symbol");
  return std::get<Symbol>(node_->payload);
}
inline bool Term::has_arg() const { return kind() == TermKind::Apply && !node_->a.null(); }
inline const Term& Term::arg() const {
  if (!has_arg()) detail::bad_access("Term::arg");
  return node_->a;
}
inline const Term& Term::left() const {
  if (!is_binary()) detail::bad_access("Term::left");
  return node_->a;
}
inline const Term& Term::right() const {
  if (!is_binary()) detail::bad_access("Term::right");
  return node_->b;
}
inline const Term& Term::operand() const {
  auto k = kind();
  if (k != TermKind::Neg && k != TermKind::Power && k != TermKind::Differential) detail::bad_access("Term::operand");
  return node_->a;
}
inline unsigned Term::exponent() const {
  if (kind() != TermKind::Power) detail::bad_access("Term::exponent");
  return std::get<unsigned>(node_->payload);
}
inline std::size_t Term::size() const { return node_ ? node_->size : 0; }

inline bool operator==(const Term& x, const Term& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_) return false;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  return a.kind == b.kind && a.size == b.size && a.payload == b.payload && a.a == b.a && a.b == b.b;
}

// ---- Formula --------------------------------------------------------------

inline Formula Formula::compare(FormulaKind op, Term lhs, Term rhs) {
  if (!is_comparison(op)) throw std::logic_error("dgl: not a comparison operator");
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = op;
  n->size += lhs.size() + rhs.size();
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}
inline Formula Formula::pred(Symbol p, std::optional<Term> arg) {
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = FormulaKind::Pred;
  n->symbol = std::move(p);
  if (arg) {
    n->size += arg->size();
    n->lhs = std::move(*arg);
  }
  return Formula(std::move(n));
}
inline Formula Formula::truth() {
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = FormulaKind::True;
  return Formula(std::move(n));
}
inline Formula Formula::falsity() {
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = FormulaKind::False;
  return Formula(std::move(n));
}
inline Formula Formula::negate(Formula a) {
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = FormulaKind::Not;
  n->size += a.size();
  n->a = std::move(a);
  return Formula(std::move(n));
}
inline Formula Formula::connective(FormulaKind k, Formula a, Formula b) {
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = k;
  n->size += a.size() + b.size();
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}
inline Formula Formula::quantifier(FormulaKind k, Variable x, Formula body) {
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = k;
  n->bound = std::move(x);
  n->size += body.size();
  n->a = std::move(body);
  return Formula(std::move(n));
}
inline Formula Formula::modality(FormulaKind k, Game g, Formula post) {
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = k;
  n->size += g.size() + post.size();
  n->game = std::move(g);
  n->a = std::move(post);
  return Formula(std::move(n));
}
inline Formula Formula::diamond(Game g, Formula post) { return modality(FormulaKind::Diamond, std::move(g), std::move(post)); }
inline Formula Formula::box(Game g, Formula post) { return modality(FormulaKind::Box, std::move(g), std::move(post)); }

inline FormulaKind Formula::kind() const { return node_->kind; }
inline const Term& Formula::lhs() const {
  if (!is_comparison(kind())) detail::bad_access("Formula::lhs");
  return node_->lhs;
}
inline const Term& Formula::rhs() const {
  if (!is_comparison(kind())) detail::bad_access("Formula::rhs");
  return node_->rhs;
}
inline const Symbol& Formula::symbol() const {
  if (kind() != FormulaKind::Pred) detail::bad_access("Formula::symbol");
  return node_->symbol;
}
inline bool Formula::has_arg() const { return kind() == FormulaKind::Pred && !node_->lhs.null(); }
inline const Term& Formula::arg() const {
  if (!has_arg()) detail::bad_access("Formula::arg");
  return node_->lhs;
}
inline const Formula& Formula::left() const {
  if (kind() != FormulaKind::Not && !is_connective()) detail::bad_access("Formula::left");
  return node_->a;
}
inline const Formula& Formula::right() const {
  if (!is_connective()) detail::bad_access("Formula::right");
  return node_->b;
}
inline const Variable& Formula::bound() const {
  if (!is_quantifier()) detail::bad_access("Formula::bound");
  return node_->bound;
}
inline const Formula& Formula::body() const {
  if (!is_quantifier() && !is_modality()) detail::bad_access("Formula::body");
  return node_->a;
}
inline const Game& Formula::game() const {
  if (!is_modality()) detail::bad_access("Formula::game");
  return node_->game;
}
inline std::size_t Formula::size() const { return node_ ? node_->size : 0; }

inline bool operator==(const Formula& x, const Formula& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_) return false;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  return a.kind == b.kind && a.size == b.size && a.symbol == b.symbol && a.bound == b.bound && a.lhs == b.lhs &&
         a.rhs == b.rhs && a.a == b.a && a.b == b.b && a.game == b.game;
}

// ---- Game -----------------------------------------------------------------

inline Game Game::symbol(Symbol a) {
  auto n = std::make_shared<detail::GameNode>();
  n->kind = GameKind::Symbol;
  n->symbol = std::move(a);
  return Game(std::move(n));
}
inline Game Game::assign(Variable x, Term rhs) {
  auto n = std::make_shared<detail::GameNode>();
  n->kind = GameKind::Assign;
  n->x = std::move(x);
  n->size += rhs.size();
  n->rhs = std::move(rhs);
  return Game(std::move(n));
}
inline Game Game::ode(std::vector<OdeEquation> eqs, Formula domain) {
  auto n = std::make_shared<detail::GameNode>();
  n->kind = GameKind::Ode;
  for (const auto& e : eqs) n->size += 1 + e.rhs.size();
  n->size += domain.size();
  n->eqs = std::move(eqs);
  n->f = std::move(domain);
  return Game(std::move(n));
}
inline Game Game::test(Formula f) {
  auto n = std::make_shared<detail::GameNode>();
  n->kind = GameKind::Test;
  n->size += f.size();
  n->f = std::move(f);
  return Game(std::move(n));
}
inline Game Game::binary(GameKind k, Game a, Game b) {
  auto n = std::make_shared<detail::GameNode>();
  n->kind = k;
  n->size += a.size() + b.size();
  n->a = std::move(a);
  n->b = std::move(b);
  return Game(std::move(n));
}
inline Game Game::unary(GameKind k, Game a) {
  auto n = std::make_shared<detail::GameNode>();
  n->kind = k;
  n->size += a.size();
  n->a = std::move(a);
  return Game(std::move(n));
}
inline Game Game::diff_game(std::vector<OdeEquation> eqs, Variable y, Formula ys, Variable z, Formula zs) {
  auto n = std::make_shared<detail::GameNode>();
  n->kind = GameKind::DiffGame;
  for (const auto& e : eqs) n->size += 1 + e.rhs.size();
  n->size += ys.size() + zs.size();
  n->eqs = std::move(eqs);
  n->x = std::move(y);
  n->f = std::move(ys);
  n->z = std::move(z);
  n->f2 = std::move(zs);
  return Game(std::move(n));
}

inline GameKind Game::kind() const { return node_->kind; }
inline const Symbol& Game::symbol() const {
  if (kind() != GameKind::Symbol) detail::bad_access("Game::symbol");
  return node_->symbol;
}
inline const Variable& Game::target() const {
  if (kind() != GameKind::Assign) detail::bad_access("Game::target");
  return node_->x;
}
inline const Term& Game::rhs() const {
  if (kind() != GameKind::Assign) detail::bad_access("Game::rhs");
  return node_->rhs;
}
inline const std::vector<OdeEquation>& Game::equations() const {
  if (kind() != GameKind::Ode && kind() != GameKind::DiffGame) detail::bad_access("Game::equations");
  return node_->eqs;
}
inline const Formula& Game::domain() const {
  if (kind() != GameKind::Ode) detail::bad_access("Game::domain");
  return node_->f;
}
inline const Formula& Game::condition() const {
  if (kind() != GameKind::Test) detail::bad_access("Game::condition");
  return node_->f;
}
inline const Game& Game::left() const {
  if (kind() != GameKind::Choice && kind() != GameKind::Seq) detail::bad_access("Game::left");
  return node_->a;
}
inline const Game& Game::right() const {
  if (kind() != GameKind::Choice && kind() != GameKind::Seq) detail::bad_access("Game::right");
  return node_->b;
}
inline const Game& Game::operand() const {
  if (kind() != GameKind::Loop && kind() != GameKind::Dual) detail::bad_access("Game::operand");
  return node_->a;
}
inline const Variable& Game::y() const {
  if (kind() != GameKind::DiffGame) detail::bad_access("Game::y");
  return node_->x;
}
inline const Formula& Game::y_set() const {
  if (kind() != GameKind::DiffGame) detail::bad_access("Game::y_set");
  return node_->f;
}
inline const Variable& Game::z() const {
  if (kind() != GameKind::DiffGame) detail::bad_access("Game::z");
  return node_->z;
}
inline const Formula& Game::z_set() const {
  if (kind() != GameKind::DiffGame) detail::bad_access("Game::z_set");
  return node_->f2;
}
inline std::size_t Game::size() const { return node_ ? node_->size : 0; }

inline bool operator==(const Game& x, const Game& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_) return false;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  return a.kind == b.kind && a.size == b.size && a.symbol == b.symbol && a.x == b.x && a.z == b.z &&
         a.rhs == b.rhs && a.eqs == b.eqs && a.f == b.f && a.f2 == b.f2 && a.a == b.a && a.b == b.b;
}

/// Any of the three syntactic sorts.
using Expression = std::variant<Term, Formula, Game>;

}  // namespace dgl
