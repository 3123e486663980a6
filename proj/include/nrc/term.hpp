#ifndef NRC_TERM_HPP_
#define NRC_TERM_HPP_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nrc/diagnostics.hpp"
#include "nrc/types.hpp"

namespace nrc {

enum class TermKind {
  kVar,
  kHole,
  kConst,
  kRecord,
  kProject,
  kLambda,
  kApply,
  kEmptySet,
  kSingletonSet,
  kUnion,
  kCompSet,
  kWhereSet,
  kEmptyTest,
  kEmptyBag,
  kSingletonBag,
  kDisjUnion,
  kCompBag,
  kWhereBag,
  kDedup,
  kPromote,
};

const char* kind_name(TermKind kind);

struct TermNode;

/// Immutable, structurally shared term of the heterogeneous calculus.
///
/// Child order defines AST positions:
///   Const: args | Record: fields | Project, Lambda, singletons, EmptyTest,
///   Dedup, Promote: [0] | Apply: fun, arg | Union, DisjUnion: left, right |
///   CompSet, CompBag: head, source (the binder scopes over the head only) |
///   WhereSet, WhereBag: condition, body.
/// `name()` holds the variable, hole id, constant, projected label or
/// bound variable depending on the kind.
class Term {
 public:
  Term() = default;

  static Term var(std::string name, Span span = {});
  static Term hole(std::string id, Span span = {});
  static Term constant(std::string name, std::vector<Term> args = {}, Span span = {});
  static Term boolean(bool value);
  static Term integer(long long value);
  static Term string_lit(const std::string& value);
  static Term record(std::vector<std::string> labels, std::vector<Term> fields,
                     Span span = {});
  static Term project(Term record, std::string label, Span span = {});
  static Term lambda(std::string var, Type param, Term body, Span span = {});
  static Term apply(Term fun, Term arg, Span span = {});
  static Term empty_set(std::optional<Type> annot = std::nullopt, Span span = {});
  static Term singleton_set(Term elem, Span span = {});
  static Term set_union(Term left, Term right, Span span = {});
  static Term comp_set(Term head, std::string var, Term source, Span span = {});
  static Term where_set(Term cond, Term body, Span span = {});
  static Term empty_test(Term collection, Span span = {});
  static Term empty_bag(std::optional<Type> annot = std::nullopt, Span span = {});
  static Term singleton_bag(Term elem, Span span = {});
  static Term bag_union(Term left, Term right, Span span = {});
  static Term comp_bag(Term head, std::string var, Term source, Span span = {});
  static Term where_bag(Term cond, Term body, Span span = {});
  static Term dedup(Term bag, Span span = {});
  static Term promote(Term set, Span span = {});

  bool valid() const { return node_ != nullptr; }
  TermKind kind() const;
  const std::string& name() const;
  const std::vector<std::string>& labels() const;
  const std::optional<Type>& annot() const;
  const std::vector<Term>& kids() const;
  const Term& kid(size_t i) const { return kids().at(i); }
  size_t arity() const { return kids().size(); }
  const Span& span() const;

  /// Sorted free (non-hole) variables.
  const std::vector<std::string>& free_vars() const;
  /// Sorted hole ids occurring in the term.
  const std::vector<std::string>& holes() const;
  bool has_free(const std::string& x) const;
  bool is_pure() const { return holes().empty(); }
  /// Number of AST nodes.
  size_t size() const;
  /// Number of hole occurrences (counting repeats).
  size_t hole_occurrences() const;

  bool binds() const;  // Lambda, CompSet, CompBag
  /// Index of the child in which the bound variable is in scope, or -1.
  int scoped_child() const;

  bool is_literal() const;  // 0-ary constant
  bool is_true() const;
  bool is_false() const;

  /// Same node with new children (and optionally a new binder name).
  Term with_kids(std::vector<Term> kids) const;
  Term with_name(std::string name) const;
  Term with_annot(std::optional<Type> annot) const;

  /// Pointer identity; use alpha_eq for semantic comparison.
  bool same(const Term& other) const { return node_ == other.node_; }

 private:
  friend Term make_term(TermKind, std::string, std::vector<std::string>,
                        std::optional<Type>, std::vector<Term>, Span);
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind;
  std::string name;
  std::vector<std::string> labels;
  std::optional<Type> annot;
  std::vector<Term> kids;
  Span span;
  std::vector<std::string> fv;
  std::vector<std::string> holes;
  size_t size = 1;
  size_t hole_occurrences = 0;
};

Term make_term(TermKind kind, std::string name, std::vector<std::string> labels,
               std::optional<Type> annot, std::vector<Term> kids, Span span = {});

/// Child-index path from the root.
using Path = std::vector<int>;
std::string path_to_string(const Path& path);

const Term& subterm_at(const Term& t, const Path& path);
Term replace_at(const Term& t, const Path& path, const Term& replacement);

/// Names of every variable (free or bound) occurring in the term.
std::set<std::string> all_names(const Term& t);

/// Deterministic fresh variable: `base` with trailing digits stripped, then
/// the smallest numeric suffix not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

/// Capture-avoiding substitution t[r/x]. Holes are left untouched.
Term subst(const Term& t, const std::string& x, const Term& r);
/// Simultaneous capture-avoiding renaming of free variables.
Term rename_free(const Term& t, const std::map<std::string, std::string>& renaming);

/// Equality up to consistent renaming of bound variables; holes compare by
/// id; annotations on empty collections are elaboration metadata and ignored.
bool alpha_eq(const Term& a, const Term& b);
/// A string equal for exactly the alpha-equivalent terms (de Bruijn form).
/// Unlike alpha_eq it distinguishes empty-collection annotations, so distinct
/// keys may still be alpha_eq. With `canonical_holes`, hole ids are replaced
/// by first-occurrence order.
std::string alpha_key(const Term& t, bool canonical_holes = false);

size_t term_size(const Term& t);

/// Replace hole ids per `renaming`; ids outside the map are kept.
Term rename_holes(const Term& t, const std::map<std::string, std::string>& renaming);
/// Positions of every hole occurrence, in pre-order.
std::vector<std::pair<std::string, Path>> hole_positions(const Term& t);

struct FreeVarsResult {
  std::set<std::string> vars;
  std::set<std::string> holes;
};
/// Free variables and hole support of a term.
FreeVarsResult free_vars(const Term& t);

}  // namespace nrc

#endif  // NRC_TERM_HPP_
