#ifndef NRC_TYPING_HPP_
#define NRC_TYPING_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrc/term.hpp"
#include "nrc/types.hpp"

namespace nrc {

/// Heterogeneous: sets and bags, with dedup : {|T|} -> {T} and
/// promote : {T} -> {|T|}. DeltaIota: sets only, dedup and promote both
/// {T} -> {T}; bag constructs are rejected.
enum class Calculus { kHeterogeneous, kDeltaIota };

/// Ordered typing context. Lookup is last-binding-wins, so extending with an
/// existing name shadows it. Holes are typed by a separate map.
class TypeEnv {
 public:
  TypeEnv() = default;

  TypeEnv extended(const std::string& name, const Type& type) const;
  void bind(const std::string& name, const Type& type);
  const Type* lookup(const std::string& name) const;

  void bind_hole(const std::string& id, const Type& type);
  const Type* lookup_hole(const std::string& id) const;

  const std::vector<std::pair<std::string, Type>>& bindings() const { return vars_; }
  const std::map<std::string, Type>& hole_types() const { return holes_; }

 private:
  std::vector<std::pair<std::string, Type>> vars_;
  std::map<std::string, Type> holes_;
};

/// A term together with the context and calculus it was checked in.
/// Empty collections inside `term` carry their collection type.
struct TypedTerm {
  Term term;
  TypeEnv env;
  Type type;
  Calculus calculus = Calculus::kHeterogeneous;

  /// Type of the subterm at `path` (re-inferred under the binders above it).
  Type type_at(const Path& path) const;
};

/// Infers the type of `t`, returning the annotated term. Unannotated empty
/// collections are accepted only where `expected` (or the surrounding
/// construct) determines their type.
std::pair<Term, Type> elaborate(const TypeEnv& env, const Term& t,
                                const std::optional<Type>& expected,
                                Calculus calculus = Calculus::kHeterogeneous);

Type infer(const TypeEnv& env, const Term& t, Calculus calculus = Calculus::kHeterogeneous);
TypedTerm typed(const TypeEnv& env, const Term& t,
                Calculus calculus = Calculus::kHeterogeneous);
/// Throws TypeMismatch when the inferred type differs from `expected`.
TypedTerm check(const TypeEnv& env, const Term& t, const Type& expected,
                Calculus calculus = Calculus::kHeterogeneous);

/// Context in scope at `path` inside `t` (binders between the root and the
/// position are added with their types).
TypeEnv env_at(const TypeEnv& env, const Term& t, const Path& path,
               Calculus calculus = Calculus::kHeterogeneous);

/// Types of every collection-typed subterm, keyed by position.
std::map<Path, Type> collection_types(const TypedTerm& t);

}  // namespace nrc

#endif  // NRC_TYPING_HPP_
