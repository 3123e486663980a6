#include <gtest/gtest.h>

#include "nrc/term.hpp"
#include "support.hpp"

namespace nrc {
namespace {

using testing::T;

TEST(FreeVars, ClosedLambda) {
  auto fv = free_vars(T("\\x:Int. x"));
  EXPECT_TRUE(fv.vars.empty());
  EXPECT_TRUE(fv.holes.empty());
}

TEST(FreeVars, HoleReportedSeparately) {
  auto fv = free_vars(T("for (x <- [p]) y"));
  EXPECT_EQ(fv.vars, (std::set<std::string>{"y"}));
  EXPECT_EQ(fv.holes, (std::set<std::string>{"p"}));
}

TEST(FreeVars, TableIsFree) {
  auto fv = free_vars(T("for (x <- t) {{x.id}}"));
  EXPECT_EQ(fv.vars, (std::set<std::string>{"t"}));
  EXPECT_TRUE(fv.holes.empty());
}

TEST(Subst, UnderUnrelatedBinder) {
  EXPECT_TRUE(alpha_eq(subst(T("for (y <- s) x"), "x", T("1")), T("for (y <- s) 1")));
}

TEST(Subst, AvoidsCapture) {
  Term r = subst(T("\\y:Int. x"), "x", T("y"));
  ASSERT_EQ(r.kind(), TermKind::kLambda);
  EXPECT_NE(r.name(), "y");
  EXPECT_TRUE(r.kid(0).kind() == TermKind::kVar && r.kid(0).name() == "y");
  EXPECT_TRUE(alpha_eq(r, T("\\z:Int. y")));
}

TEST(Subst, IntoProjection) {
  EXPECT_TRUE(alpha_eq(subst(T("x.id"), "x", T("<id = 3>")), T("<id = 3>.id")));
}

TEST(Subst, ShadowedVariableUntouched) {
  EXPECT_TRUE(alpha_eq(subst(T("for (x <- s) {x}"), "x", T("1")), T("for (x <- s) {x}")));
}

TEST(AlphaEq, RenamedBinder) { EXPECT_TRUE(alpha_eq(T("\\x:Int.x"), T("\\y:Int.y"))); }

TEST(AlphaEq, DifferentFreeVariables) {
  EXPECT_FALSE(alpha_eq(T("\\x:Int.z"), T("\\y:Int.w")));
}

TEST(AlphaEq, HolesAreNotRenamed) {
  EXPECT_TRUE(alpha_eq(T("for (x <- [p]) x"), T("for (y <- [p]) y")));
  EXPECT_FALSE(alpha_eq(T("for (x <- [p]) x"), T("for (x <- [q]) x")));
}

TEST(AlphaEq, LambdaAnnotationMatters) {
  EXPECT_FALSE(alpha_eq(T("\\x:Int.x"), T("\\x:Bool.x")));
}

TEST(TermSize, Examples) {
  EXPECT_EQ(term_size(T("x")), 1u);
  EXPECT_EQ(term_size(T("{x} union {y}")), 5u);
  EXPECT_EQ(term_size(T("for (x <- t) {x.id}")), 5u);
}

TEST(Paths, ReplaceAndRead) {
  Term t = T("{x} union {y}");
  EXPECT_TRUE(alpha_eq(subterm_at(t, {1, 0}), T("y")));
  EXPECT_TRUE(alpha_eq(replace_at(t, {1, 0}, T("z")), T("{x} union {z}")));
}

TEST(Printer, RoundTrip) {
  for (const char* src :
       {"for (x <- t) {x.id}", "\\x:Int. x + 1", "dedup (promote {1} uplus promote {2})",
        "bagwhere b do {||}:{|Int|}", "for (x <- [p]) ([q] union {x})",
        "empty (for (x <- t) where x.id <= 2 do {x})", "<a = true, b = \"s\">.a"}) {
    Term t = T(src);
    EXPECT_TRUE(alpha_eq(T(print_term(t)), t)) << src;
  }
}

TEST(Parser, ProjectionBindsTighterThanApplication) {
  Term t = T("f x.a");
  ASSERT_EQ(t.kind(), TermKind::kApply);
  EXPECT_EQ(t.kid(1).kind(), TermKind::kProject);
}

TEST(Parser, RejectsGarbage) {
  EXPECT_EQ(testing::error_code([] { T("for (x <- ) {x}"); }), "ParseError");
}

}  // namespace
}  // namespace nrc
