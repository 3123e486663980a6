#include <gtest/gtest.h>

#include <algorithm>

#include "nrc/erasure.hpp"
#include "nrc/rewrite.hpp"
#include "support.hpp"

namespace nrc {
namespace {

using testing::env_of;
using testing::T;
using testing::Ty;

TEST(EraseType, Examples) {
  EXPECT_EQ(erase_type(Ty("{|Int|}")), Ty("{Int}"));
  EXPECT_EQ(erase_type(Ty("Bool")), Ty("Bool"));
  EXPECT_EQ(erase_type(Ty("(<a:Int> -> {|<a:Int>|})")), Ty("(<a:Int> -> {<a:Int>})"));
  EXPECT_EQ(erase_type(Ty("{|{|Int|}|}")), Ty("{{Int}}"));
}

TEST(EraseTerm, Examples) {
  EXPECT_TRUE(alpha_eq(erase_term(T("{|1|} uplus {|2|}")), T("{1} union {2}")));
  EXPECT_TRUE(alpha_eq(erase_term(T("bagwhere b do {||}:{|Int|}")), T("where b do {}:{Int}")));
  EXPECT_TRUE(alpha_eq(erase_term(T("dedup (promote {1})")), T("dedup (promote {1})")));
  EXPECT_TRUE(alpha_eq(erase_term(T("bagfor (x <- s) {|x.id|}")), T("for (x <- s) {x.id}")));
}

TEST(EraseTerm, Idempotent) {
  Term m = T("dedup (bagfor (x <- promote t) bagwhere x = 1 do {|x|} uplus {||}:{|Int|})");
  EXPECT_TRUE(alpha_eq(erase_term(erase_term(m)), erase_term(m)));
}

TEST(EraseEnv, Examples) {
  auto e = erase_env(env_of({{"t", "{|<id:Int>|}"}, {"f", "(Int -> {|Int|})"}}));
  ASSERT_NE(e.lookup("t"), nullptr);
  EXPECT_EQ(*e.lookup("t"), Ty("{<id:Int>}"));
  EXPECT_EQ(*e.lookup("f"), Ty("(Int -> {Int})"));
  EXPECT_TRUE(erase_env({}).bindings().empty());
}

TEST(Erasure, TypabilityAndSimulation) {
  auto env = env_of({{"s", "{|<id:Int>|}"}, {"t", "{Int}"}});
  Term m = T("dedup (bagfor (x <- s) bagfor (y <- promote (for (z <- t) {z})) "
             "bagwhere x.id = y do {|y|}) union {}:{Int}");
  TypedTerm h = typed(env, m);
  Type erased = infer(erase_env(env), erase_term(m), Calculus::kDeltaIota);
  EXPECT_EQ(erased, erase_type(h.type));
  for (const auto& s : step_all(h)) {
    auto lower = step_all(erase_env(env), erase_term(s.before), Calculus::kDeltaIota);
    Term target = erase_term(s.after);
    EXPECT_TRUE(std::any_of(lower.begin(), lower.end(),
                            [&](const ReductStep& e) { return alpha_eq(e.after, target); }))
        << rule_name(s.rule) << " @ " << path_to_string(s.position);
  }
}

}  // namespace
}  // namespace nrc
