// Variables and finite/cofinite variable sets used for free/bound variables
// and substitution taboos.
#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

namespace dgl {

/// A plain variable `x` (order 0) or its differential variable `x'` (order 1).
struct Variable {
  std::string name;
  int order = 0;

  Variable() = default;
  explicit Variable(std::string n, int o = 0) : name(std::move(n)), order(o) {}

  bool differential() const { return order == 1; }
  Variable prime() const { return Variable(name, 1); }
  Variable base() const { return Variable(name, 0); }
  std::string str() const { return order == 1 ? name + "'" : name; }

  friend auto operator<=>(const Variable&, const Variable&) = default;
  friend bool operator==(const Variable&, const Variable&) = default;
};

/// A set of variables that is either finite or cofinite (complement of a
/// finite set). `VarSet::all()` is the set of all variables and is what the
/// substitution machinery uses as the "everything is taboo" value.
///
/// Representation is canonical: `members_` is sorted and duplicate-free and
/// holds the elements (finite) or the excluded variables (cofinite), so
/// structural equality is set equality.
class VarSet {
 public:
  VarSet() = default;
  VarSet(std::initializer_list<Variable> vs) : members_(vs) { normalize(); }

  static VarSet finite(std::vector<Variable> vs) {
    VarSet s;
    s.members_ = std::move(vs);
    s.normalize();
    return s;
  }
  static VarSet all() { return all_except({}); }
  static VarSet all_except(std::vector<Variable> excluded) {
    VarSet s = finite(std::move(excluded));
    s.cofinite_ = true;
    return s;
  }

  bool cofinite() const { return cofinite_; }
  /// Elements of a finite set, excluded variables of a cofinite one.
  const std::vector<Variable>& members() const { return members_; }

  bool contains(const Variable& v) const {
    return std::binary_search(members_.begin(), members_.end(), v) != cofinite_;
  }
  bool empty() const { return !cofinite_ && members_.empty(); }
  bool is_all() const { return cofinite_ && members_.empty(); }

  VarSet& insert(const Variable& v) {
    if (cofinite_)
      erase_member(v);
    else
      insert_member(v);
    return *this;
  }
  VarSet& erase(const Variable& v) {
    if (cofinite_)
      insert_member(v);
    else
      erase_member(v);
    return *this;
  }

  friend VarSet operator~(VarSet a) {
    a.cofinite_ = !a.cofinite_;
    return a;
  }
  friend VarSet operator|(const VarSet& a, const VarSet& b) {
    if (!a.cofinite_ && !b.cofinite_) return make(false, merge(a.members_, b.members_));
    if (a.cofinite_ && b.cofinite_) return make(true, meet(a.members_, b.members_));
    const VarSet& fin = a.cofinite_ ? b : a;
    const VarSet& cof = a.cofinite_ ? a : b;
    return make(true, minus(cof.members_, fin.members_));
  }
  friend VarSet operator&(const VarSet& a, const VarSet& b) {
    if (!a.cofinite_ && !b.cofinite_) return make(false, meet(a.members_, b.members_));
    if (a.cofinite_ && b.cofinite_) return make(true, merge(a.members_, b.members_));
    const VarSet& fin = a.cofinite_ ? b : a;
    const VarSet& cof = a.cofinite_ ? a : b;
    return make(false, minus(fin.members_, cof.members_));
  }
  friend VarSet operator-(const VarSet& a, const VarSet& b) { return a & ~b; }
  VarSet& operator|=(const VarSet& b) { return *this = *this | b; }

  friend bool disjoint(const VarSet& a, const VarSet& b) {
    if (a.cofinite_ && b.cofinite_) return false;
    if (!a.cofinite_ && !b.cofinite_) {
      auto i = a.members_.begin();
      auto j = b.members_.begin();
      while (i != a.members_.end() && j != b.members_.end()) {
        if (*i < *j)
          ++i;
        else if (*j < *i)
          ++j;
        else
          return false;
      }
      return true;
    }
    const VarSet& fin = a.cofinite_ ? b : a;
    const VarSet& cof = a.cofinite_ ? a : b;
    return std::all_of(fin.members_.begin(), fin.members_.end(),
                       [&](const Variable& v) { return !cof.contains(v); });
  }
  /// a ⊆ b
  friend bool subset_of(const VarSet& a, const VarSet& b) { return (a - b).empty(); }

  friend bool operator==(const VarSet&, const VarSet&) = default;

  /// `{x,x'}`, `all`, or `all\{y}`.
  std::string str() const {
    std::string body;
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (i) body += ',';
      body += members_[i].str();
    }
    if (!cofinite_) return "{" + body + "}";
    return members_.empty() ? "all" : "all\\{" + body + "}";
  }

 private:
  using Vec = std::vector<Variable>;

  static VarSet make(bool cof, Vec m) {
    VarSet s;
    s.cofinite_ = cof;
    s.members_ = std::move(m);
    return s;
  }
  static Vec merge(const Vec& a, const Vec& b) {
    Vec out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }
  static Vec meet(const Vec& a, const Vec& b) {
    Vec out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }
  static Vec minus(const Vec& a, const Vec& b) {
    Vec out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }
  void normalize() {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }
  void insert_member(const Variable& v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it == members_.end() || *it != v) members_.insert(it, v);
  }
  void erase_member(const Variable& v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it != members_.end() && *it == v) members_.erase(it);
  }

  bool cofinite_ = false;
  Vec members_;
};

}  // namespace dgl
