#include <gtest/gtest.h>

#include "nrc/eval.hpp"
#include "nrc/rewrite.hpp"
#include "support.hpp"

namespace nrc {
namespace {

using testing::T;
using testing::Ty;

Value id_row(long long id) { return Value::record({{"id", Value::integer(id)}}); }
Value ints(std::vector<long long> xs) {
  std::vector<Value> out;
  for (auto x : xs) out.push_back(Value::integer(x));
  return Value::set(out);
}

TEST(Eval, SetComprehension) {
  std::map<std::string, Value> env = {{"t", Value::set({id_row(1), id_row(2)})}};
  EXPECT_TRUE(value_eq(eval(env, T("for (x <- t) {x.id}")), ints({1, 2})));
}

TEST(Eval, EmptyTest) { EXPECT_TRUE(eval({}, T("empty ({}:{Int})")).as_bool()); }

TEST(Eval, BagComprehensionKeepsMultiplicity) {
  std::map<std::string, Value> env = {{"s", Value::bag({{id_row(1), 2}})}};
  Value r = eval(env, T("bagfor (x <- s) {|x.id|}"));
  EXPECT_TRUE(value_eq(r, Value::bag({{Value::integer(1), 2}})));
  EXPECT_FALSE(value_eq(r, Value::bag({{Value::integer(1), 1}})));
}

TEST(ValueEq, Examples) {
  EXPECT_TRUE(value_eq(ints({1, 2}), ints({2, 1})));
  EXPECT_FALSE(value_eq(Value::bag({{Value::integer(1), 2}}), Value::bag({{Value::integer(1), 1}})));
  EXPECT_TRUE(value_eq(Value::record({{"a", Value::integer(1)}, {"b", Value::integer(2)}}),
                       Value::record({{"b", Value::integer(2)}, {"a", Value::integer(1)}})));
}

TEST(Eval, SetsDeduplicate) {
  EXPECT_EQ(eval({}, T("{1} union {1} union {2}")).cardinality(), 2u);
  EXPECT_EQ(eval({}, T("{|1|} uplus {|1|}")).cardinality(), 2u);
}

TEST(Eval, DedupAfterPromoteIsIdentity) {
  std::map<std::string, Value> env = {{"t", ints({1, 2, 3})}};
  for (const char* m : {"t", "for (x <- t) where x <= 2 do {x + 1}", "{}:{Int}"}) {
    std::string wrapped = std::string("dedup (promote (") + m + "))";
    EXPECT_TRUE(value_eq(eval(env, T(wrapped)), eval(env, T(m)))) << m;
  }
}

TEST(Eval, PromoteOfIdempotentUnionHasMultiplicityOne) {
  std::map<std::string, Value> env = {{"x", Value::integer(7)}};
  Value v = eval(env, T("promote ({x} union {x})"));
  ASSERT_EQ(v.kind(), ValueKind::kBag);
  ASSERT_EQ(v.counts().size(), 1u);
  EXPECT_EQ(v.counts()[0].second, 1u);
  // Distributing promote over the union would double the count.
  Value split = eval(env, T("promote {x} uplus promote {x}"));
  EXPECT_FALSE(value_eq(v, split));
}

TEST(Eval, HigherOrderIntermediate) {
  Value v = eval({}, T("for (f <- {\\x:Int. x + 1}) {f 2}"));
  EXPECT_TRUE(value_eq(v, ints({3})));
}

TEST(Eval, NormalizationPreservesMeaning) {
  Database db;
  db.add("t", Ty("{<id:Int>}"), {id_row(1), id_row(2)});
  db.add("s", Ty("{|<id:Int>|}"), {id_row(1), id_row(1), id_row(3)});
  for (const char* src :
       {"for (y <- for (x <- t) {{x.id}}) y",
        "dedup (bagfor (x <- s) bagfor (y <- promote t) bagwhere x.id = y.id do {|<id = x.id>|})",
        "bagfor (x <- s) bagwhere not (empty (for (y <- t) where y.id = x.id do {y})) do {|x|}"}) {
    TypedTerm m = typed(db.type_env(), T(src));
    Term nf = normalize(m, Strategy::leftmost_outermost()).normal_form;
    EXPECT_TRUE(value_eq(eval(db.values(), m.term), eval(db.values(), nf))) << src;
  }
}

TEST(Database, FromJson) {
  auto j = nlohmann::json::parse(R"({"tables": {
    "t": {"kind": "set", "type": "<id:Int>", "rows": [{"id": 1}, {"id": 1}]},
    "s": {"kind": "bag", "type": "{|<id:Int>|}", "rows": [{"id": 1}, {"id": 1}]}}})");
  Database db = Database::from_json(j);
  EXPECT_EQ(db.tables().at("t").rows.cardinality(), 1u);
  EXPECT_EQ(db.tables().at("s").rows.cardinality(), 2u);
  EXPECT_EQ(*db.type_env().lookup("s"), Ty("{|<id:Int>|}"));
}

}  // namespace
}  // namespace nrc
