#ifndef NRC_GENERATOR_HPP_
#define NRC_GENERATOR_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "nrc/eval.hpp"
#include "nrc/metatheory.hpp"
#include "nrc/typing.hpp"

namespace nrc {

enum class Fragment { kSetOnly, kDeltaIota, kHeterogeneous };

Calculus calculus_of(Fragment fragment);
/// t : {<id:Int, v:Int>}, u : {<id:Int, name:String>} and, in the
/// heterogeneous fragment, the bag s : {|<id:Int, v:Int>|} (a set otherwise).
TypeEnv default_tables(Fragment fragment);

struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t max_size = 40;
  std::optional<Type> type_target;
  TypeEnv table_env;  // default_tables(fragment) when empty
  Fragment fragment = Fragment::kHeterogeneous;
  /// Share of draws that instantiate a redex template.
  double redex_bias = 0.3;
};

/// Deterministic per config. Throws GenerationFailed after bounded retries.
TypedTerm gen_well_typed(const GenConfig& cfg);
/// A query of relation type over the tables (a random relation type unless
/// the config fixes one); subterms may be higher-order or nested.
TypedTerm gen_relation_query(const GenConfig& cfg);

/// Random rows for every table of `tables` (atoms drawn from small ranges so
/// joins and duplicates are common).
Database gen_database(const TypeEnv& tables, std::uint64_t seed, std::size_t max_rows = 4);

struct ContextConfig {
  std::uint64_t seed = 0;
  std::size_t max_size = 20;
  bool aux = true;             // allow holes in comprehension heads
  std::string hole_prefix = "p";
};

/// A context over the delta-iota set constructs together with its typing
/// (tables plus one hole type per hole).
struct GeneratedContext {
  Term term;
  TypeEnv env;
  Type type;
};

/// A hole-linear (auxiliary) continuation of set type with at least one hole.
GeneratedContext gen_continuation(const ContextConfig& cfg);
/// A frame whose embedded continuation uses holes with prefix `hole_prefix`,
/// well-typed when composed onto a hole of type `hole_type` in `ctx`.
Frame gen_frame(const GeneratedContext& ctx, const std::string& p, std::uint64_t seed,
                const std::string& hole_prefix = "f");

/// A permutable instantiation of some of the holes of `ctx` (at least one).
/// With `capture`, plugged terms may mention the variables bound over their
/// hole; otherwise their free variables are tables only.
Instantiation gen_instantiation(const GeneratedContext& ctx, std::uint64_t seed, bool capture,
                                std::size_t max_size = 10);

}  // namespace nrc

#endif  // NRC_GENERATOR_HPP_
