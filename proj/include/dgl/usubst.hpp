// Uniform substitutions: finite maps from function, predicate and game
// symbols to replacements, with the free variables of each replacement
// cached at construction.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dgl/parser.hpp"
#include "dgl/printer.hpp"
#include "dgl/static_semantics.hpp"
#include "dgl/syntax.hpp"

namespace dgl {

class DuplicateKeyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KindMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Replacement = std::variant<Term, Formula, Game>;

struct SubstEntry {
  Symbol key;
  Replacement replacement;
  /// Free variables of the replacement; the dot is a symbol and adds none.
  VarSet fv;
};

class USubst {
 public:
  USubst() = default;

  /// Adds `key ~> replacement`. Throws on duplicate keys, on a replacement
  /// of the wrong sort, and on dots where none may appear.
  void add(Symbol key, Replacement r, FvMode mode = FvMode::Precise) {
    if (entries_.count(key) || find_name(key.kind, key.name))
      throw DuplicateKeyError("duplicate substitution key " + key_string(key));
    bool sort_ok = (key.kind == SymbolKind::Function && std::holds_alternative<Term>(r)) ||
                   (key.kind == SymbolKind::Predicate && std::holds_alternative<Formula>(r)) ||
                   (key.kind == SymbolKind::Game && std::holds_alternative<Game>(r));
    if (!sort_ok)
      throw KindMismatchError(std::string(kind_name(key.kind)) + " key " + key_string(key) + " bound to a " +
                              sort_name(r));
    if (key.is_dot()) throw KindMismatchError("the placeholder . cannot be a substitution key");
    if (key.arity == 0 && contains_dot(r))
      throw KindMismatchError("replacement for " + key_string(key) + " mentions . but the key takes no argument");
    auto v = well_formed(r);
    if (!v.empty()) throw WellFormedError(std::move(v));
    VarSet fv = free_vars(r, mode);
    entries_.emplace(key, SubstEntry{key, std::move(r), std::move(fv)});
  }

  const SubstEntry* find(const Symbol& s) const {
    if (entries_.empty()) return nullptr;
    auto it = entries_.find(s);
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<Symbol, SubstEntry>& entries() const { return entries_; }

  friend USubst dot_subst(const Term& t);

  static std::string key_string(const Symbol& s) {
    if (s.kind == SymbolKind::Game) return s.name;
    return s.name + (s.arity == 1 ? "(.)" : "()");
  }

 private:
  static const char* sort_name(const Replacement& r) {
    return std::holds_alternative<Term>(r) ? "term" : std::holds_alternative<Formula>(r) ? "formula" : "game";
  }
  bool find_name(SymbolKind k, const std::string& name) const {
    for (const auto& [s, e] : entries_)
      if (s.kind == k && s.name == name) return true;
    return false;
  }

  std::map<Symbol, SubstEntry> entries_;
};

/// The single-entry substitution {. ~> t} used at replacement sites.
inline USubst dot_subst(const Term& t) {
  USubst s;
  s.entries_.emplace(Symbol::dot(), SubstEntry{Symbol::dot(), t, free_vars(t)});
  return s;
}

// ---- text format ------------------------------------------------------------
//
//   f(.) ~> term ; f() ~> term ; p(.) ~> formula ; a ~> {game}
//
// The sort of a key is inferred from its replacement. A replacement that is a
// bare application such as `q()` is read as a term; write `pred p() ~> q()`
// to bind a predicate instead. `func` and `game` prefixes are also accepted.

namespace parse_detail {

inline USubst parse_subst_tokens(Parser& p, FvMode mode) {
  USubst out;
  while (!p.at_end()) {
    std::optional<SymbolKind> forced;
    const Token& first = p.peek();
    if (first.kind == Tok::Ident && !first.primed && p.peek(1).kind == Tok::Ident) {
      if (first.text == "pred") forced = SymbolKind::Predicate;
      else if (first.text == "func") forced = SymbolKind::Function;
      else if (first.text == "game") forced = SymbolKind::Game;
      if (forced) ++p.pos;
    }
    const Token& name = p.peek();
    if (name.kind != Tok::Ident || name.primed || reserved_word(name.text)) p.fail("substitution key");
    std::size_t key_start = name.span.start;
    ++p.pos;
    int arity = -1;
    if (p.accept("(")) {
      if (p.accept(".")) arity = 1;
      else arity = 0;
      p.expect(")");
    }
    SourceSpan key_span{key_start, p.peek().span.start};
    p.expect("~>");

    Replacement r;
    if (arity < 0) {
      if (forced && *forced != SymbolKind::Game)
        throw KindMismatchError(std::string(kind_name(*forced)) + " key " + name.text + " needs an argument list");
      // `;` separates entries, so composite games must be braced
      r = p.postfix_game();
    } else if (forced == SymbolKind::Game) {
      throw KindMismatchError("game key " + name.text + " cannot take an argument list");
    } else if (forced == SymbolKind::Predicate) {
      r = p.formula();
    } else if (forced == SymbolKind::Function) {
      r = p.term();
    } else {
      std::size_t save = p.pos;
      bool is_term = false;
      try {
        Term t = p.term();
        if (p.at_end() || p.at_punct(";")) {
          r = t;
          is_term = true;
        }
      } catch (const Backtrack&) {
      }
      if (!is_term) {
        p.pos = save;
        bool is_formula = false;
        try {
          r = p.formula();
          is_formula = p.at_end() || p.at_punct(";");
        } catch (const Backtrack&) {
        }
        if (!is_formula) {
          p.pos = save;
          bool is_game = false;
          try {
            p.game();
            is_game = p.at_end() || p.at_punct(";");
          } catch (const Backtrack&) {
          }
          if (is_game)
            throw KindMismatchError("key " + name.text + (arity ? "(.)" : "()") +
                                    " takes a term or formula but is bound to a game");
          p.pos = save;
          r = p.formula();
        }
      }
    }
    if (!p.at_end()) p.expect(";");

    SymbolKind kind = arity < 0 ? SymbolKind::Game
                      : std::holds_alternative<Term>(r) ? SymbolKind::Function
                                                        : SymbolKind::Predicate;
    Symbol key = kind == SymbolKind::Game ? Symbol::game(name.text)
                 : kind == SymbolKind::Function ? Symbol::function(name.text, arity)
                                                : Symbol::predicate(name.text, arity);
    try {
      out.add(key, std::move(r), mode);
    } catch (const DuplicateKeyError& e) {
      throw DuplicateKeyError(std::string(e.what()) + " at offset " + std::to_string(key_span.start));
    }
  }
  return out;
}

}  // namespace parse_detail

inline USubst parse_subst(std::string_view text, FvMode mode = FvMode::Precise) {
  parse_detail::Parser p(text);
  return p.run([&] { return parse_detail::parse_subst_tokens(p, mode); });
}

inline std::string pretty(const USubst& s) {
  std::string out;
  for (const auto& [key, e] : s.entries()) {
    if (!out.empty()) out += " ; ";
    if (key.kind == SymbolKind::Predicate && std::get<Formula>(e.replacement).kind() == FormulaKind::Pred)
      out += "pred ";
    out += USubst::key_string(key);
    out += " ~> ";
    const auto* g = std::get_if<Game>(&e.replacement);
    if (g && (g->kind() == GameKind::Seq || g->kind() == GameKind::Choice))
      out += "{" + pretty(*g) + "}";
    else
      out += pretty(e.replacement);
  }
  return out;
}

}  // namespace dgl
