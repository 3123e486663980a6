#ifndef NRC_TYPES_HPP_
#define NRC_TYPES_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nrc {

enum class TypeKind { kAtomic, kFunction, kRecord, kSet, kBag };

struct TypeRep;

/// Immutable type expression: atomic, function, record, set or bag.
/// Copies share structure.
class Type {
 public:
  using Field = std::pair<std::string, Type>;

  static Type atomic(std::string name);
  static Type boolean();
  static Type integer();
  static Type string();
  static Type function(Type domain, Type codomain);
  /// Throws Error("DuplicateLabel") when labels repeat.
  static Type record(std::vector<Field> fields);
  static Type set(Type elem);
  static Type bag(Type elem);

  TypeKind kind() const;
  bool is_atomic() const { return kind() == TypeKind::kAtomic; }
  bool is_function() const { return kind() == TypeKind::kFunction; }
  bool is_record() const { return kind() == TypeKind::kRecord; }
  bool is_set() const { return kind() == TypeKind::kSet; }
  bool is_bag() const { return kind() == TypeKind::kBag; }
  bool is_collection() const { return is_set() || is_bag(); }

  const std::string& atom_name() const;
  const Type& domain() const;
  const Type& codomain() const;
  const Type& elem() const;

  size_t field_count() const;
  const std::string& label(size_t i) const;
  const Type& field_type(size_t i) const;
  /// nullptr when the label is absent.
  const Type* field(std::string_view label) const;

  /// Records compare as label-indexed maps (field order is irrelevant).
  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

  /// Surface syntax: Bool, (S -> T), <a:Int>, {T}, {|T|}.
  std::string to_string() const;

 private:
  explicit Type(std::shared_ptr<const TypeRep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const TypeRep> rep_;
};

struct TypeRep {
  TypeKind kind;
  std::string atom;
  std::vector<std::string> labels;
  std::vector<Type> children;
};

/// Collection of records whose fields are all atomic (sets and bags alike).
bool is_relation_type(const Type& ty);
/// True when `ty` mentions no function type.
bool is_first_order(const Type& ty);
/// Relation types plus collections of atomic values.
bool is_flat_collection(const Type& ty);

}  // namespace nrc

#endif  // NRC_TYPES_HPP_
