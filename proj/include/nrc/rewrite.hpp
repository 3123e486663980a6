#ifndef NRC_REWRITE_HPP_
#define NRC_REWRITE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nrc/term.hpp"
#include "nrc/typing.hpp"

namespace nrc {

/// One tag per contraction rule. Bag rules carry a `Bag` prefix; the dedup
/// and promote rules serve both calculi (bag forms in the heterogeneous
/// calculus, set forms in NRC-delta-iota).
enum class RuleTag {
  kBeta,
  kProj,
  kDeltaConst,
  kCompEmptyHead,
  kCompEmptySrc,
  kCompSingleton,
  kCompUnionHead,
  kCompUnionSrc,
  kCompAssoc,
  kCompWhereSrc,
  kWhereTrue,
  kWhereFalse,
  kWhereEmpty,
  kWhereUnion,
  kWhereComp,
  kWhereWhere,
  kEmptyFlatten,
  kBagCompEmptyHead,
  kBagCompEmptySrc,
  kBagCompSingleton,
  kBagCompUnionHead,
  kBagCompUnionSrc,
  kBagCompAssoc,
  kBagCompWhereSrc,
  kBagWhereTrue,
  kBagWhereFalse,
  kBagWhereEmpty,
  kBagWhereUnion,
  kBagWhereComp,
  kBagWhereWhere,
  kDedupEmpty,
  kDedupSingleton,
  kDedupUnion,
  kDedupPromote,
  kDedupComp,
  kDedupWhere,
  kPromoteEmpty,
  kPromoteSingleton,
  kPromoteWhere,
};

const std::vector<RuleTag>& all_rules();
/// Kebab-case tag, e.g. "comp-singleton", "bagwhere-union".
const char* rule_name(RuleTag rule);
std::optional<RuleTag> rule_from_name(const std::string& name);

struct Contraction {
  RuleTag rule;
  Term result;
};

/// A single reduction: `after` is `before` with the redex at `position`
/// contracted by `rule`.
struct ReductStep {
  RuleTag rule;
  Path position;
  Term before;
  Term after;
};

/// Supplies the typing context at the redex; only consulted by the rules that
/// need types (empty-flatten and rules that create empty collections).
using EnvThunk = std::function<TypeEnv()>;

/// Every root contraction of `t`, in tag order.
std::vector<Contraction> contract_root(const EnvThunk& env, const Term& t, Calculus calculus);
std::vector<Contraction> contract_root(const TypedTerm& t);

/// All one-step reducts at every position (pre-order, then tag order).
std::vector<ReductStep> step_all(const TypeEnv& env, const Term& t, Calculus calculus);
std::vector<ReductStep> step_all(const TypedTerm& t);

/// The first redex in pre-order (leftmost-outermost), first matching tag.
std::optional<ReductStep> step_leftmost(const TypeEnv& env, const Term& t, Calculus calculus);

/// Re-applies `rule` at `position`; nullopt when it does not fire there.
std::optional<Term> replay(const TypeEnv& env, const Term& t, Calculus calculus, RuleTag rule,
                           const Path& position);

bool is_normal(const TypedTerm& t);
bool is_normal(const TypeEnv& env, const Term& t, Calculus calculus);

struct Strategy {
  enum class Kind { kLeftmostOutermost, kRandom, kExhaustive };
  Kind kind = Kind::kLeftmostOutermost;
  std::uint64_t seed = 0;

  static Strategy leftmost_outermost() { return {}; }
  static Strategy random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
  static Strategy exhaustive() { return {Kind::kExhaustive, 0}; }
  /// "lo" | "random:SEED" | "exhaustive"; throws BadStrategy.
  static Strategy parse(const std::string& text);
  std::string to_string() const;
};

struct NormalizeResult {
  Term normal_form;
  std::vector<ReductStep> trace;  // empty unless requested
  size_t steps = 0;
  /// Exhaustive strategy: every distinct normal form reached (alpha classes).
  std::vector<Term> normal_forms;
};

inline constexpr size_t kDefaultFuel = 1000000;

/// Reduces to a normal form. Fuel bounds the number of steps (the number of
/// explored terms for the exhaustive strategy); running out throws
/// FuelExhausted.
NormalizeResult normalize(const TypedTerm& t, const Strategy& strategy,
                          size_t fuel = kDefaultFuel, bool keep_trace = false);

/// `<step#> <rule-tag> @ <position> :: <term after>`
std::string trace_line(size_t index, const ReductStep& step);

}  // namespace nrc

#endif  // NRC_REWRITE_HPP_
