#include <gtest/gtest.h>

#include "nrc/metatheory.hpp"
#include "support.hpp"

namespace nrc {
namespace {

using testing::env_of;
using testing::error_code;
using testing::T;

using Holes = std::set<std::string>;

TEST(Support, Examples) {
  EXPECT_EQ(support(T("[p] union [q]")), (Holes{"p", "q"}));
  EXPECT_TRUE(support(T("{1}")).empty());
  EXPECT_EQ(support(T("for (x <- [p]) ([q] union x)")), (Holes{"p", "q"}));
}

TEST(Instantiate, Plain) { EXPECT_TRUE(alpha_eq(instantiate(T("[p]"), {{"p", T("x")}}), T("x"))); }

TEST(Instantiate, PermitsCapture) {
  Term r = instantiate(T("\\z:Int.[p]"), {{"p", T("z")}});
  EXPECT_TRUE(alpha_eq(r, T("\\z:Int.z")));
  EXPECT_TRUE(free_vars(r).vars.empty());
}

TEST(Instantiate, PartialMap) {
  EXPECT_TRUE(alpha_eq(instantiate(T("[p] union [q]"), {{"p", T("{1}")}}), T("{1} union [q]")));
}

TEST(Instantiate, Simultaneous) {
  // q in eta(p) is not plugged again.
  EXPECT_TRUE(alpha_eq(instantiate(T("[p] union [q]"), {{"p", T("[q]")}, {"q", T("{1}")}}),
                       T("[q] union {1}")));
}

TEST(Permutable, Examples) {
  EXPECT_TRUE(is_permutable({{"p", T("x")}, {"q", T("y")}}));
  EXPECT_FALSE(is_permutable({{"p", T("[q]")}, {"q", T("x")}}));
  EXPECT_TRUE(is_permutable({}));
}

TEST(Continuations, Examples) {
  EXPECT_TRUE(is_continuation(T("for (x <- [p]) {x}")));
  EXPECT_FALSE(is_continuation(T("[p] union [p]")));
  EXPECT_FALSE(is_aux_continuation(T("[p] union [p]")));
  EXPECT_FALSE(is_continuation(T("for (x <- t) [p]")));
  EXPECT_TRUE(is_aux_continuation(T("for (x <- t) [p]")));
}

TEST(Continuations, PureTermsAndDeltaIota) {
  EXPECT_TRUE(is_continuation(T("{1}")));
  EXPECT_TRUE(is_continuation(T("dedup (promote [p])")));
  EXPECT_TRUE(is_continuation(T("where b do [p]")));
  EXPECT_FALSE(is_continuation(T("{[p]}")));
  EXPECT_FALSE(is_continuation(T("bagfor (x <- [p]) {|x|}")));
}

TEST(Compose, WhereFrame) {
  EXPECT_TRUE(alpha_eq(compose(T("[p]"), "p", Frame::where(T("true"))), T("where true do [p]")));
}

TEST(Compose, HeadFrame) {
  EXPECT_TRUE(alpha_eq(compose(T("[p] union n"), "p", Frame::comp_head("x", T("t"))),
                       T("(for (x <- t) [p]) union n")));
}

TEST(Compose, SourceAndDeltaIotaFrames) {
  EXPECT_TRUE(alpha_eq(compose(T("[p]"), "p", Frame::comp_src(T("{x}"), "x")),
                       T("for (x <- [p]) {x}")));
  EXPECT_TRUE(alpha_eq(compose(T("[p]"), "p", Frame::dedup()), T("dedup [p]")));
  EXPECT_TRUE(alpha_eq(compose(T("[p]"), "p", Frame::promote()), T("promote [p]")));
}

TEST(Compose, Errors) {
  EXPECT_EQ(error_code([] { compose(T("[q] union [p]"), "p", Frame::where(T("true"))); }), "");
  EXPECT_EQ(error_code([] { compose(T("[q]"), "p", Frame::dedup()); }), "PreconditionViolated");
  EXPECT_EQ(error_code([] { compose(T("[p] union [q]"), "p", Frame::comp_src(T("[q]"), "x")); }),
            "HoleClash");
}

TEST(Measures, Examples) {
  EXPECT_EQ(measure_sz(T("[p]"), "p"), 1u);
  EXPECT_EQ(measure_len(T("[p]"), "p"), 1u);
  EXPECT_EQ(measure_len(T("where true do [p]"), "p"), 2u);
  EXPECT_EQ(measure_len(T("for (x <- t) [p]"), "p"), 1u);
  EXPECT_EQ(measure_sz(T("for (x <- t) [p]"), "p"), 2u);
}

TEST(Measures, DeltaIotaAddOne) {
  EXPECT_EQ(measure_sz(T("dedup (promote [p])"), "p"), 3u);
  EXPECT_EQ(measure_len(T("dedup (promote [p])"), "p"), 3u);
}

TEST(Measures, AbsentHoleIsZero) {
  EXPECT_EQ(measure_len(T("{1} union [q]"), "p"), 0u);
  EXPECT_EQ(measure_sz(T("{1}"), "p"), 0u);
}

TEST(Measures, NotAContinuation) {
  EXPECT_EQ(error_code([] { measure_len(T("[p] union [p]"), "p"); }), "NotAContinuation");
}

TEST(Measures, HeadFrameKeepsLengthOthersGrow) {
  // For the frame {[] | x <- O}, |Q|p is unchanged; every frame grows the size measure.
  Term q = T("where b do [p]");
  std::vector<Frame> frames = {Frame::comp_head("x", T("t")), Frame::comp_src(T("{x}"), "x"),
                               Frame::where(T("c")), Frame::dedup(), Frame::promote()};
  for (const auto& f : frames) {
    Term qf = compose(q, "p", f);
    EXPECT_LT(measure_sz(q, "p"), measure_sz(qf, "p")) << f.to_string();
    if (f.kind == Frame::Kind::kCompHead)
      EXPECT_EQ(measure_len(q, "p"), measure_len(qf, "p"));
    else
      EXPECT_LT(measure_len(q, "p"), measure_len(qf, "p")) << f.to_string();
  }
}

TEST(RenamingSteps, UnionInHeadDuplicatesHole) {
  auto env = env_of({{"n1", "{Int}"}, {"n2", "{Int}"}}, {{"p", "{Int}"}});
  auto steps = renaming_steps(env, T("for (x <- [p]) (n1 union n2)"), {"p"});
  ASSERT_EQ(steps.size(), 1u);
  const auto& s = steps[0];
  EXPECT_EQ(s.rule, RuleTag::kCompUnionHead);
  ASSERT_EQ(s.sigma.size(), 2u);
  std::vector<std::string> fresh;
  for (const auto& [q, p] : s.sigma) {
    EXPECT_EQ(p, "p");
    EXPECT_NE(q, "p");
    fresh.push_back(q);
  }
  EXPECT_TRUE(holes_linear(s.reduct));
  EXPECT_TRUE(alpha_eq(rename_holes(s.reduct, s.sigma), s.plain));
  Term expect = T("(for (x <- [" + fresh[0] + "]) n1) union (for (x <- [" + fresh[1] + "]) n2)");
  Term swapped = T("(for (x <- [" + fresh[1] + "]) n1) union (for (x <- [" + fresh[0] + "]) n2)");
  EXPECT_TRUE(alpha_eq(s.reduct, expect) || alpha_eq(s.reduct, swapped));
}

TEST(RenamingSteps, FreshnessAgainstAvoid) {
  auto env = env_of({{"n1", "{Int}"}, {"n2", "{Int}"}}, {{"p", "{Int}"}});
  auto steps = renaming_steps(env, T("for (x <- [p]) (n1 union n2)"), {"p", "q1", "q2", "q3"});
  ASSERT_EQ(steps.size(), 1u);
  for (const auto& [q, p] : steps[0].sigma) EXPECT_TRUE(q != "q1" && q != "q2" && q != "q3");
}

TEST(RenamingSteps, DeletedAndKeptHole) {
  auto env = env_of({}, {{"p", "{Int}"}});
  auto del = renaming_steps(env, T("where false do [p]"), {"p"});
  ASSERT_EQ(del.size(), 1u);
  EXPECT_EQ(del[0].reduct.kind(), TermKind::kEmptySet);
  EXPECT_TRUE(del[0].sigma.empty());
  auto keep = renaming_steps(env, T("where true do [p]"), {"p"});
  ASSERT_EQ(keep.size(), 1u);
  EXPECT_TRUE(alpha_eq(keep[0].reduct, T("[p]")));
  for (const auto& [q, p] : keep[0].sigma) EXPECT_EQ(q, p);
}

TEST(RenameInst, Examples) {
  auto r = rename_inst({{"p", T("x")}}, {{"q1", "p"}, {"q2", "p"}});
  ASSERT_TRUE(r.count("q1") && r.count("q2"));
  EXPECT_TRUE(alpha_eq(r.at("q1"), T("x")));
  EXPECT_TRUE(alpha_eq(r.at("q2"), T("x")));
  auto id = rename_inst({{"p", T("x")}}, {});
  ASSERT_EQ(id.size(), 1u);
  EXPECT_TRUE(alpha_eq(id.at("p"), T("x")));
  EXPECT_TRUE(rename_inst({}, {{"q", "p"}}).empty());
}

TEST(RenameInst, CommutesWithRenaming) {
  // C sigma eta = C eta^sigma sigma when eta's codomain avoids dom(sigma).
  Term c = T("[q1] union ([q2] union [r])");
  Renaming sigma = {{"q1", "p"}, {"q2", "p"}};
  Instantiation eta = {{"p", T("{1}")}, {"r", T("{2}")}};
  Term lhs = instantiate(rename_holes(c, sigma), eta);
  Term rhs = rename_holes(instantiate(c, rename_inst(eta, sigma)), sigma);
  EXPECT_TRUE(alpha_eq(lhs, rhs));
}

ReductStep find_step(const TypeEnv& env, const Term& m, RuleTag rule, const Path& pos) {
  for (const auto& s : step_all(env, m, Calculus::kDeltaIota))
    if (s.rule == rule && s.position == pos) return s;
  ADD_FAILURE() << "no " << rule_name(rule) << " step at " << path_to_string(pos);
  return {};
}

TEST(Classify, InterfaceReduction) {
  auto env = env_of({{"n1", "{Int}"}, {"n2", "{Int}"}, {"l", "Int"}}, {{"p", "{Int}"}});
  Term q = T("for (x <- [p]) (n1 union n2)");
  Instantiation eta = {{"p", T("{l}")}};
  auto step = find_step(env, instantiate(q, eta), RuleTag::kCompSingleton, {});
  auto c = classify(env, q, eta, step);
  EXPECT_EQ(c.kind, Classification::Case::kInterface);
  EXPECT_EQ(c.hole, "p");
  EXPECT_EQ(c.frame.kind, Frame::Kind::kCompSrc);
  EXPECT_TRUE(alpha_eq(c.m, T("n1 union n2")));
  EXPECT_FALSE(verify_classification(env, q, eta, step, c).has_value());
}

TEST(Classify, WithinEta) {
  auto env = env_of({}, {{"p", "Int"}});
  Term q = T("[p]");
  Instantiation eta = {{"p", T("(\\x:Int.x) 1")}};
  auto step = find_step(env, instantiate(q, eta), RuleTag::kBeta, {});
  auto c = classify(env, q, eta, step);
  EXPECT_EQ(c.kind, Classification::Case::kWithinEta);
  ASSERT_TRUE(c.theta_prime.count("p"));
  EXPECT_TRUE(alpha_eq(c.theta_prime.at("p"), T("1")));
  EXPECT_FALSE(verify_classification(env, q, eta, step, c).has_value());
}

TEST(Classify, ContinuationReduction) {
  auto env = env_of({}, {{"p", "{Int}"}});
  Term q = T("where true do [p]");
  Instantiation eta = {{"p", T("{1}")}};
  auto step = find_step(env, instantiate(q, eta), RuleTag::kWhereTrue, {});
  auto c = classify(env, q, eta, step);
  EXPECT_EQ(c.kind, Classification::Case::kContinuation);
  EXPECT_TRUE(alpha_eq(c.q_prime, T("[p]")));
  EXPECT_FALSE(verify_classification(env, q, eta, step, c).has_value());
}

TEST(Classify, SpecialReductionOnAuxiliaryContinuation) {
  auto env = env_of({}, {{"q", "{Int}"}});
  Term q = T("for (x <- {4}) ([q] union {x})");
  Instantiation eta = {{"q", T("{5}")}};
  auto step = find_step(env, instantiate(q, eta), RuleTag::kCompSingleton, {});
  auto c = classify(env, q, eta, step);
  EXPECT_EQ(c.kind, Classification::Case::kSpecial);
  // Q = Q1[hole -> {Q2 | x <- {L}}] with a fresh hole.
  EXPECT_FALSE(support(q).count(c.hole));
  EXPECT_TRUE(support(c.q1).count(c.hole));
  EXPECT_TRUE(alpha_eq(c.l, T("4")));
  EXPECT_FALSE(verify_classification(env, q, eta, step, c).has_value());
}

TEST(Classify, RejectsNonPermutable) {
  auto env = env_of({}, {{"p", "{Int}"}, {"q", "{Int}"}});
  Term q = T("where true do ([p] union [q])");
  Instantiation eta = {{"p", T("[q]")}, {"q", T("{1}")}};
  auto step = find_step(env, instantiate(q, eta), RuleTag::kWhereTrue, {});
  EXPECT_EQ(error_code([&] { classify(env, q, eta, step); }), "PreconditionViolated");
}

// Capturing instantiation breaks the interface case: after the singleton
// contraction the captured x in eta(q) is replaced by 1, which no choice of
// Q0 with instantiation eta restricted off p can reproduce.
TEST(Classify, CaptureAtSourceSingletonHasNoInterfaceWitness) {
  auto env = env_of({}, {{"p", "{Int}"}, {"q", "{Int}"}});
  Term q = T("for (x <- [p]) [q]");
  Instantiation eta = {{"p", T("{1}")}, {"q", T("{x}")}};
  auto step = find_step(env, instantiate(q, eta), RuleTag::kCompSingleton, {});
  EXPECT_TRUE(alpha_eq(step.after, T("{1}")));
  auto c = classify(env, q, eta, step);
  EXPECT_EQ(c.kind, Classification::Case::kInterface);
  EXPECT_TRUE(verify_classification(env, q, eta, step, c).has_value());
  // Without capture the same shape verifies.
  Instantiation closed = {{"p", T("{1}")}, {"q", T("{2}")}};
  auto s2 = find_step(env, instantiate(q, closed), RuleTag::kCompSingleton, {});
  auto c2 = classify(env, q, closed, s2);
  EXPECT_FALSE(verify_classification(env, q, closed, s2, c2).has_value());
}

TEST(Bv, Examples) {
  // A binder counts only when its head contains a hole.
  EXPECT_TRUE(bv(T("for (x <- [p]) {x}")).empty());
  EXPECT_EQ(bv(T("for (x <- n) [p]")), (std::set<std::string>{"x"}));
  EXPECT_EQ(bv(T("for (x <- n) ([p] union {x})")), (std::set<std::string>{"x"}));
  EXPECT_EQ(bv(T("for (y <- [q]) (for (x <- n) [p])")), (std::set<std::string>{"x", "y"}));
  EXPECT_TRUE(bv(T("{1}")).empty());
}

TEST(Bv, RegularContinuationsBindNothing) {
  EXPECT_TRUE(bv(T("where b do for (x <- [p]) {x}")).empty());
}

TEST(Neutral, Examples) {
  EXPECT_TRUE(is_neutral(T("x")));
  EXPECT_FALSE(is_neutral(T("{x}")));
  EXPECT_TRUE(is_neutral(T("dedup {|1|}")));
  EXPECT_TRUE(is_neutral(T("f 1")));
  EXPECT_TRUE(is_neutral(T("x.a")));
  EXPECT_FALSE(is_neutral(T("\\x:Int.x")));
}

TEST(Maxred, Examples) {
  EXPECT_EQ(maxred({}, T("1"), Calculus::kHeterogeneous), 0u);
  EXPECT_EQ(maxred({}, T("(\\x:Int.x) 1"), Calculus::kHeterogeneous), 1u);
  // Two where-true steps, or where-where, the and-constant, then where-true.
  EXPECT_EQ(maxred({}, T("where true do (where true do {1})"), Calculus::kHeterogeneous), 3u);
}

TEST(Maxred, LongestPathNotShortest) {
  // Reducing the argument first costs an extra step compared with beta first
  // followed by the duplicated redexes: beta yields two copies of 1 + 1.
  Term m = T("(\\x:Int. x + x) (1 + 1)");
  // Paths: beta, delta, delta, delta = 4; delta, beta, delta = 3.
  EXPECT_EQ(maxred({}, m, Calculus::kHeterogeneous), 4u);
}

TEST(Maxred, CapExceeded) {
  Term m = T("(\\x:Int. x + x) (1 + 1)");
  EXPECT_EQ(error_code([&] { maxred({}, m, Calculus::kHeterogeneous, 2); }), "CapExceeded");
}

}  // namespace
}  // namespace nrc
