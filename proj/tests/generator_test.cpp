#include <gtest/gtest.h>

#include <functional>

#include "nrc/generator.hpp"
#include "nrc/metatheory.hpp"
#include "nrc/suites.hpp"
#include "support.hpp"

namespace nrc {
namespace {

using testing::Ty;

bool contains(const Term& t, const std::function<bool(const Term&)>& pred) {
  if (pred(t)) return true;
  for (const auto& k : t.kids())
    if (contains(k, pred)) return true;
  return false;
}

TEST(Generator, SetOnlyTargetType) {
  GenConfig cfg;
  cfg.seed = 1;
  cfg.fragment = Fragment::kSetOnly;
  cfg.type_target = Ty("{Int}");
  TypedTerm m = gen_well_typed(cfg);
  EXPECT_EQ(m.type, Ty("{Int}"));
  EXPECT_EQ(infer(m.env, m.term, m.calculus), m.type);
  EXPECT_FALSE(contains(m.term, [](const Term& t) {
    return t.kind() == TermKind::kDedup || t.kind() == TermKind::kPromote ||
           t.kind() == TermKind::kCompBag || t.kind() == TermKind::kDisjUnion;
  }));
}

TEST(Generator, Deterministic) {
  GenConfig cfg;
  cfg.seed = 42;
  EXPECT_EQ(print_term(gen_well_typed(cfg).term), print_term(gen_well_typed(cfg).term));
  cfg.seed = 43;
  GenConfig other = cfg;
  other.seed = 44;
  EXPECT_NE(print_term(gen_well_typed(cfg).term), print_term(gen_well_typed(other).term));
}

TEST(Generator, HeterogeneousCoverage) {
  std::size_t hits = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    TypedTerm m = gen_well_typed(cfg);
    EXPECT_LE(term_size(m.term), cfg.max_size);
    if (contains(m.term, [](const Term& t) {
          return t.kind() == TermKind::kDisjUnion || t.kind() == TermKind::kDedup ||
                 t.kind() == TermKind::kPromote;
        }))
      ++hits;
  }
  EXPECT_GE(hits, 50u);
}

TEST(Generator, EveryRuleFires) {
  std::set<RuleTag> seen;
  for (std::uint64_t seed = 1; seed <= 600 && seen.size() < all_rules().size(); ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.fragment = seed % 3 == 0 ? Fragment::kDeltaIota : Fragment::kHeterogeneous;
    TypedTerm m = gen_well_typed(cfg);
    for (const auto& s : step_all(m)) seen.insert(s.rule);
  }
  for (RuleTag r : all_rules()) EXPECT_TRUE(seen.count(r)) << rule_name(r);
}

TEST(Generator, RelationQueries) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    TypedTerm q = gen_relation_query(cfg);
    EXPECT_TRUE(is_relation_type(q.type)) << print_term(q.term);
  }
}

TEST(Generator, DatabasesRespectTableTypes) {
  TypeEnv tables = default_tables(Fragment::kHeterogeneous);
  Database db = gen_database(tables, 3);
  for (const auto& [name, ty] : tables.bindings()) {
    ASSERT_TRUE(db.tables().count(name));
    EXPECT_EQ(db.tables().at(name).type, ty);
    EXPECT_LE(db.tables().at(name).rows.cardinality(), 4u);
  }
}

TEST(Generator, ContinuationsAndFrames) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    ContextConfig cc;
    cc.seed = seed;
    cc.aux = seed % 2 == 0;
    GeneratedContext ctx = gen_continuation(cc);
    EXPECT_TRUE(cc.aux ? is_aux_continuation(ctx.term) : is_continuation(ctx.term))
        << print_term(ctx.term);
    EXPECT_NO_THROW(infer(ctx.env, ctx.term, Calculus::kDeltaIota));
    auto eta = gen_instantiation(ctx, seed, false);
    EXPECT_TRUE(is_permutable(eta));
    for (const auto& [p, m] : eta) EXPECT_TRUE(support(ctx.term).count(p));
  }
}

TEST(Suites, SmallRunsPass) {
  for (const auto& name : suite_names()) {
    SuiteConfig cfg;
    cfg.n = 20;
    cfg.seed = 5;
    SuiteReport r = run_suite(name, cfg);
    EXPECT_EQ(r.failures(), 0u) << name << "\n" << r.tap();
    EXPECT_GT(r.checked(), 0u) << name;
  }
  EXPECT_EQ(testing::error_code([] { run_suite("nope", {}); }), "BadSuite");
}

}  // namespace
}  // namespace nrc
