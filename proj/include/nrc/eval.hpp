#ifndef NRC_EVAL_HPP_
#define NRC_EVAL_HPP_

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nrc/term.hpp"
#include "nrc/typing.hpp"
#include "nrc/types.hpp"

namespace nrc {

enum class ValueKind { kBool, kInt, kString, kRecord, kSet, kBag, kClosure };

struct ValueRep;

/// Immutable runtime value. Records are label-sorted, sets are sorted and
/// duplicate-free, bags are sorted (value, count) lists with counts >= 1, so
/// structural comparison is canonical.
class Value {
 public:
  using Field = std::pair<std::string, Value>;
  using Count = std::pair<Value, std::size_t>;

  Value();  // false

  static Value boolean(bool b);
  static Value integer(long long n);
  static Value string(std::string s);
  static Value record(std::vector<Field> fields);
  static Value set(std::vector<Value> elems);
  static Value bag(std::vector<Count> counts);
  /// `env` holds the captured free variables of the lambda.
  static Value closure(std::string var, Term body, Term lambda, std::vector<Field> env);

  ValueKind kind() const;
  bool is_collection() const { return kind() == ValueKind::kSet || kind() == ValueKind::kBag; }

  bool as_bool() const;
  long long as_int() const;
  const std::string& as_string() const;
  const std::vector<Field>& fields() const;
  const Value* field(const std::string& label) const;
  const std::vector<Value>& elems() const;
  const std::vector<Count>& counts() const;
  const std::string& closure_var() const;
  const Term& closure_body() const;
  const std::vector<Field>& closure_env() const;
  /// Number of elements, counting bag multiplicity.
  std::size_t cardinality() const;

 private:
  friend int compare(const Value& a, const Value& b);
  explicit Value(std::shared_ptr<const ValueRep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const ValueRep> rep_;
};

/// Total order used for canonical sorting; closures compare intensionally
/// (alpha-equivalence class of the lambda plus captured values).
int compare(const Value& a, const Value& b);
bool value_eq(const Value& a, const Value& b);
inline bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

/// Canonical rendering in surface syntax: `{1, 2}`, `{|1, 1|}`, `<a = 1>`.
std::string value_to_string(const Value& v);
nlohmann::json value_to_json(const Value& v);
/// Decodes a first-order JSON value at type `type`; throws BadDatabase.
Value value_from_json(const nlohmann::json& j, const Type& type);
/// Literal term of an atomic value.
Term value_to_literal(const Value& v);

struct Table {
  Type type;   // collection type
  Value rows;  // set or bag value
};

/// Input tables; set tables deduplicate on load, bag tables keep repeats.
class Database {
 public:
  void add(const std::string& name, const Type& type, std::vector<Value> rows);
  const std::map<std::string, Table>& tables() const { return tables_; }
  TypeEnv type_env() const;
  std::map<std::string, Value> values() const;

  /// `{"tables": {"t": {"kind": "set"|"bag", "type": "...", "rows": [...]}}}`.
  /// `type` may be the collection type or the element type.
  static Database from_json(const nlohmann::json& j);
  static Database load(const std::string& path);
  nlohmann::json to_json() const;

 private:
  std::map<std::string, Table> tables_;
};

/// Denotation of a hole-free term. Throws UnboundVariable, NotAFunctionValue
/// or HoleInTerm on malformed input.
Value eval(const std::map<std::string, Value>& env, const Term& t,
           Calculus calculus = Calculus::kHeterogeneous);

}  // namespace nrc

#endif  // NRC_EVAL_HPP_
