#include <gtest/gtest.h>

#include "dgl/parser.hpp"
#include "dgl/static_semantics.hpp"

using namespace dgl;

namespace {

Variable v(const char* n, int o = 0) { return Variable(n, o); }

}  // namespace

TEST(FreeVars, Terms) {
  EXPECT_EQ(free_vars(parse_term("-x")), VarSet{v("x")});
  EXPECT_EQ(free_vars(parse_term("(x*y)'")), (VarSet{v("x"), v("y"), v("x", 1), v("y", 1)}));
  EXPECT_EQ(free_vars(parse_term("5")), VarSet{});
  EXPECT_EQ(free_vars(parse_term("f(.)+g()")), VarSet{});
}

TEST(FreeVars, Formulas) {
  EXPECT_EQ(free_vars(parse_formula("[{x'=.}]x>=0")), VarSet{v("x")});
  EXPECT_EQ(free_vars(parse_formula("\\exists x x>=y")), VarSet{v("y")});
  EXPECT_EQ(free_vars(parse_formula("<x:=1>x>=y")), VarSet{v("y")});
  EXPECT_EQ(free_vars(parse_formula("<x:=1>x>=y"), FvMode::Coarse), (VarSet{v("x"), v("y")}));
  EXPECT_EQ(free_vars(parse_formula("<{x:=1}*>x>=y")), (VarSet{v("x"), v("y")}));
  EXPECT_TRUE(free_vars(parse_formula("<a>true")).is_all());
}

TEST(GameInfo, LoopWithOde) {
  GameInfo gi = game_info(parse_game("{x:=x+1; {x'=-x}}*"));
  EXPECT_EQ(gi.fv, VarSet{v("x")});
  EXPECT_EQ(gi.bv, (VarSet{v("x"), v("x", 1)}));
  EXPECT_EQ(gi.mbv, VarSet{});
}

TEST(GameInfo, VectorialOde) {
  GameInfo gi = game_info(parse_game("{x'=x^2, y'=z*x^2*y}"));
  EXPECT_EQ(gi.bv, (VarSet{v("x"), v("x", 1), v("y"), v("y", 1)}));
  EXPECT_EQ(gi.fv, (VarSet{v("x"), v("y"), v("z")}));
  EXPECT_EQ(gi.mbv, gi.bv);
}

TEST(GameInfo, ChoiceWithGameSymbol) {
  GameInfo gi = game_info(parse_game("a++x:=1"));
  EXPECT_EQ(gi.mbv, VarSet{});
  EXPECT_TRUE(gi.bv.is_all());
  EXPECT_TRUE(gi.fv.is_all());
}

TEST(GameInfo, Sequence) {
  GameInfo gi = game_info(parse_game("x:=1;y:=x+z"));
  EXPECT_EQ(gi.fv, VarSet{v("z")});
  EXPECT_EQ(gi.mbv, (VarSet{v("x"), v("y")}));
  EXPECT_EQ(game_info(parse_game("x:=1;y:=x+z"), FvMode::Coarse).fv, (VarSet{v("x"), v("z")}));
}

TEST(GameInfo, DifferentialGame) {
  GameInfo gi = game_info(parse_game("{x'=f(x)*y*z &d y in (y<=1) & z in (z<=1)}"));
  EXPECT_EQ(gi.bv, (VarSet{v("x"), v("x", 1), v("y"), v("y", 1), v("z"), v("z", 1)}));
  EXPECT_EQ(gi.fv, (VarSet{v("x"), v("y"), v("z")}));
}

TEST(GameInfo, BoundVarsAgreeWithCombinedComputation) {
  for (const char* text : {"x:=1;{y'=2}", "a;b", "{x:=1}^d++?x>=0", "{{x:=1}*}*"}) {
    Game g = parse_game(text);
    EXPECT_EQ(bound_vars(g), game_info(g).bv) << text;
    EXPECT_EQ(must_bound_vars(g), game_info(g).mbv) << text;
  }
}

TEST(Signature, Basics) {
  Signature s = signature(Expression(parse_formula("<v:=f()>p(v)")));
  EXPECT_EQ(s, (Signature{Symbol::function("f", 0), Symbol::predicate("p", 1)}));
  EXPECT_TRUE(signature(Expression(parse_term("x+1"))).empty());
  EXPECT_TRUE(signature(Expression(parse_term(".+1"))).empty());
  EXPECT_TRUE(contains_dot(Expression(parse_term(".+1"))));
}

TEST(OccurringVars, CountsBoundOccurrences) {
  EXPECT_EQ(occurring_vars(Expression(parse_formula("\\exists x x>=0"))), VarSet{v("x")});
  EXPECT_EQ(occurring_vars(Expression(parse_game("{y'=1}"))), (VarSet{v("y"), v("y", 1)}));
}
