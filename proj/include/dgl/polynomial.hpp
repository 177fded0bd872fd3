// Sparse multivariate polynomials with exact rational coefficients.
#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dgl/syntax.hpp"

namespace dgl {

/// Sorted (variable, exponent) pairs with positive exponents.
using Monomial = std::vector<std::pair<Variable, unsigned>>;

class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_[Monomial{}] = c;
    return p;
  }
  static Polynomial var(const Variable& v) {
    Polynomial p;
    p.terms_[Monomial{{v, 1u}}] = 1;
    return p;
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::set<Variable> variables() const {
    std::set<Variable> vs;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m) vs.insert(v);
    return vs;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) {
      unsigned md = 0;
      for (const auto& [v, e] : m) md += e;
      d = std::max(d, md);
    }
    return d;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(multiply(ma, mb), ca * cb);
    return r;
  }

  Polynomial pow(unsigned n) const {
    Polynomial r = constant(1), base = *this;
    while (n) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return r;
  }

  Polynomial partial(const Variable& v) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].first != v) continue;
        Monomial dm = m;
        unsigned e = dm[i].second;
        if (e == 1)
          dm.erase(dm.begin() + static_cast<std::ptrdiff_t>(i));
        else
          --dm[i].second;
        r.add_term(dm, c * e);
      }
    }
    return r;
  }

  /// Replaces `v` by `q` everywhere.
  Polynomial compose(const Variable& v, const Polynomial& q) const {
    Polynomial r;
    std::map<unsigned, Polynomial> powers;
    for (const auto& [m, c] : terms_) {
      Monomial rest;
      unsigned e = 0;
      for (const auto& vp : m) {
        if (vp.first == v)
          e = vp.second;
        else
          rest.push_back(vp);
      }
      Polynomial t;
      t.terms_[rest] = c;
      if (e) {
        auto it = powers.find(e);
        if (it == powers.end()) it = powers.emplace(e, q.pow(e)).first;
        t = t * it->second;
      }
      r = r + t;
    }
    return r;
  }

  /// Substitutes values for every variable except `keep`.
  template <class Lookup>
  Polynomial partial_eval(Lookup&& value, const Variable& keep) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
      Rational k = c;
      Monomial rest;
      for (const auto& [v, e] : m) {
        if (v == keep)
          rest.emplace_back(v, e);
        else
          k *= ipow(value(v), e);
      }
      r.add_term(rest, k);
    }
    return r;
  }

  template <class Lookup>
  Rational eval(Lookup&& value) const {
    Rational s = 0;
    for (const auto& [m, c] : terms_) {
      Rational k = c;
      for (const auto& [v, e] : m) k *= ipow(value(v), e);
      s += k;
    }
    return s;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << c;
      for (const auto& [v, e] : m) {
        os << "*" << v.str();
        if (e > 1) os << "^" << e;
      }
    }
    return os.str();
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  static Rational ipow(const Rational& b, unsigned e) {
    Rational r = 1, x = b;
    while (e) {
      if (e & 1) r *= x;
      e >>= 1;
      if (e) x *= x;
    }
    return r;
  }

 private:
  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  static Monomial multiply(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        r.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        r.push_back(b[j++]);
      } else {
        r.emplace_back(a[i].first, a[i].second + b[j].second);
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::map<Monomial, Rational> terms_;
};

}  // namespace dgl
