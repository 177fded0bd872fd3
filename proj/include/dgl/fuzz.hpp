// Differential testing of the one-pass engine against the Church-style
// reference on random (substitution, formula) pairs.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgl/church.hpp"
#include "dgl/onepass.hpp"
#include "dgl/printer.hpp"
#include "dgl/random_ast.hpp"

namespace dgl {

struct FuzzCase {
  std::string kind;
  std::string sigma;
  std::string formula;
};

struct FuzzResult {
  std::size_t trials = 0;
  std::size_t both_defined = 0;
  std::size_t neither_defined = 0;
  /// Defined by one-pass only: the reference is more conservative here.
  std::size_t onepass_only = 0;
  /// Defined by the reference only. Expected to stay zero.
  std::size_t church_only = 0;
  /// Both defined with different results. Expected to stay zero.
  std::size_t mismatches = 0;
  std::vector<FuzzCase> findings;

  bool ok() const { return church_only == 0 && mismatches == 0; }
};

/// Runs `trials` seeded draws at the given maximum depth. Every draw with a
/// definedness asymmetry or a mismatch is kept in `findings`, up to
/// `max_findings`.
inline FuzzResult differential_fuzz(std::size_t trials, std::uint64_t seed, int depth = 7,
                                    std::size_t max_findings = 100) {
  GenConfig cfg;
  cfg.max_depth = depth;
  AstGenerator gen(seed, cfg);
  FuzzResult res;
  for (std::size_t i = 0; i < trials; ++i) {
    USubst s = gen.subst();
    Formula f = gen.formula(depth);
    auto one = us(s, f);
    auto ref = church_formula(s, f);
    ++res.trials;
    std::string kind;
    if (one.ok() && ref.ok()) {
      ++res.both_defined;
      if (!(one.value() == ref.value())) {
        ++res.mismatches;
        kind = "mismatch";
      }
    } else if (one.ok()) {
      ++res.onepass_only;
      kind = "onepass-only";
    } else if (ref.ok()) {
      ++res.church_only;
      kind = "church-only";
    } else {
      ++res.neither_defined;
    }
    if (!kind.empty() && res.findings.size() < max_findings) res.findings.push_back({kind, pretty(s), pretty(f)});
  }
  return res;
}

}  // namespace dgl
