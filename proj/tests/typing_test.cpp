#include <gtest/gtest.h>

#include "nrc/typing.hpp"
#include "support.hpp"

namespace nrc {
namespace {

using testing::env_of;
using testing::error_code;
using testing::T;
using testing::Ty;

TEST(Infer, CollectionOfSingletons) {
  auto env = env_of({{"t", "{<id:Int>}"}});
  EXPECT_EQ(infer(env, T("for (x <- t) {{x.id}}")), Ty("{{Int}}"));
}

TEST(Infer, Projection) { EXPECT_EQ(infer({}, T("<a = true>.a")), Ty("Bool")); }

TEST(Infer, GeneratorMustBeCollection) {
  EXPECT_EQ(error_code([] { infer({}, T("for (x <- true) {x}")); }), "NotACollection");
}

TEST(Infer, OtherErrors) {
  EXPECT_EQ(error_code([] { infer({}, T("x")); }), "UnboundVariable");
  EXPECT_EQ(error_code([] { infer({}, T("<a = 1>.b")); }), "FieldMissing");
  EXPECT_EQ(error_code([] { infer({}, T("1 2")); }), "NotAFunction");
  EXPECT_EQ(error_code([] { infer({}, T("{}")); }), "MissingAnnotation");
  EXPECT_EQ(error_code([] { infer({}, T("(\\x:Int. x) true")); }), "ArgTypeMismatch");
  EXPECT_EQ(error_code([] { infer({}, T("dedup {1}")); }), "KindMismatch");
  EXPECT_EQ(error_code([] { infer({}, T("{1} uplus {|2|}")); }), "KindMismatch");
}

TEST(Check, AnnotatedEmpty) {
  EXPECT_NO_THROW(check({}, T("{}:{Int}"), Ty("{Int}")));
  EXPECT_NO_THROW(check({}, T("{}"), Ty("{Int}")));
}

TEST(Check, BagSingleton) { EXPECT_NO_THROW(check({}, T("{|1|}"), Ty("{|Int|}"))); }

TEST(Check, DedupYieldsSet) {
  EXPECT_EQ(error_code([] { check({}, T("dedup {|1|}"), Ty("{|Int|}")); }), "TypeMismatch");
  EXPECT_EQ(check({}, T("dedup {|1|}"), Ty("{Int}")).type, Ty("{Int}"));
}

TEST(Check, RecordsCompareUpToLabelOrder) {
  EXPECT_NO_THROW(check({}, T("{<a = 1, b = true>}"), Ty("{<b:Bool, a:Int>}")));
}

TEST(Calculi, DeltaIotaOnSets) {
  EXPECT_EQ(infer({}, T("dedup (promote {1})"), Calculus::kDeltaIota), Ty("{Int}"));
  EXPECT_EQ(error_code([] { infer({}, T("promote {1} uplus {|2|}"), Calculus::kDeltaIota); }),
            "KindMismatch");
}

TEST(RelationType, Examples) {
  EXPECT_TRUE(is_relation_type(Ty("{<id:Int>}")));
  EXPECT_FALSE(is_relation_type(Ty("{{Int}}")));
  EXPECT_TRUE(is_relation_type(Ty("{|<a:Bool,b:Int>|}")));
  EXPECT_FALSE(is_relation_type(Ty("Int")));
}

TEST(Properties, WeakeningAndSubstitution) {
  auto env = env_of({{"t", "{<id:Int>}"}});
  Term body = T("for (y <- t) where y.id = x do {y}");
  auto env_x = env.extended("x", Ty("Int"));
  Type ty = infer(env_x, body);
  EXPECT_EQ(infer(env_x.extended("z", Ty("Bool")), body), ty);
  EXPECT_EQ(infer(env, subst(body, "x", T("1 + 2"))), ty);
}

TEST(HoleTyping, HolesUseHoleEnvironment) {
  auto env = env_of({}, {{"p", "{Int}"}});
  EXPECT_EQ(infer(env, T("for (x <- [p]) {x + 1}")), Ty("{Int}"));
}

}  // namespace
}  // namespace nrc
