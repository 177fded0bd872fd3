#include <gtest/gtest.h>

#include "dgl/church.hpp"
#include "dgl/onepass.hpp"
#include "dgl/parser.hpp"
#include "dgl/printer.hpp"
#include "dgl/random_ast.hpp"

using namespace dgl;

namespace {

Variable v(const char* n, int o = 0) { return Variable(n, o); }

}  // namespace

TEST(Admissible, FailsWhenSymbolOccursWithTabooVariable) {
  USubst s = parse_subst("f() ~> -x");
  auto fails = admissibility_failures(s, VarSet{v("x"), v("x", 1)}, parse_term("f()*2"));
  ASSERT_EQ(fails.size(), 1u);
  EXPECT_EQ(fails[0].key, Symbol::function("f", 0));
  EXPECT_EQ(fails[0].witness, VarSet{v("x")});
}

TEST(Admissible, HoldsWhenSymbolDoesNotOccur) {
  EXPECT_TRUE(admissible(parse_subst("f() ~> -x"), VarSet{v("x")}, parse_term("y+1")));
}

TEST(Admissible, HoldsWhenReplacementAvoidsTaboo) {
  EXPECT_TRUE(admissible(parse_subst("p(.) ~> [{x'=.}]x>=0"), VarSet{v("v")}, parse_formula("p(v)")));
}

TEST(Admissible, GameKeysImposeNothing) {
  EXPECT_TRUE(admissible(parse_subst("a ~> {x:=y}"), VarSet::all(), parse_game("a")));
}

TEST(Church, ClashAtOdeInsideReplacement) {
  auto r = church_formula(parse_subst("p(.) ~> [{x'=.}]x>=0 ; f() ~> -x"), parse_formula("<v:=f()>p(v) <-> p(f())"));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.clash().where, "differential equation");
  EXPECT_TRUE(r.clash().at_dot);
  EXPECT_EQ(r.clash().witness, VarSet{v("x")});
}

TEST(Church, SoundExampleMatchesOnePass) {
  USubst s = parse_subst("p(.) ~> [{x:=x+.; {x'=.}}*](x+.>=0) ; f() ~> -v");
  Formula f = parse_formula("<v:=f()>p(v) <-> p(f())");
  auto c = church_formula(s, f);
  auto o = us(s, f);
  ASSERT_TRUE(c.ok());
  ASSERT_TRUE(o.ok());
  EXPECT_EQ(pretty(c.value()), pretty(o.value()));
}

TEST(Church, SequentialCompositionCheck) {
  auto r = church_game(parse_subst("g() ~> x"), parse_game("x:=1; y:=g()"));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.clash().where, "sequential composition");
}

TEST(Church, IdentityOnRandomFormulas) {
  AstGenerator gen(21);
  for (int i = 0; i < 10000; ++i) {
    Formula f = gen.formula(6);
    auto r = church_formula(USubst{}, f);
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.value(), f);
  }
}

TEST(Church, AgreesWithOnePassOnRandomInputs) {
  AstGenerator gen(22);
  int both = 0, onepass_only = 0;
  for (int i = 0; i < 3000; ++i) {
    USubst s = gen.subst();
    Formula f = gen.formula(7);
    auto c = church_formula(s, f);
    auto o = us(s, f);
    if (c.ok()) {
      ASSERT_TRUE(o.ok()) << pretty(f) << "\nunder " << pretty(s) << "\n" << o.clash().describe();
      ASSERT_EQ(c.value(), o.value());
      ++both;
    } else if (o.ok()) {
      ++onepass_only;
    }
  }
  EXPECT_GT(both, 300);
  RecordProperty("onepass_only", onepass_only);
}
