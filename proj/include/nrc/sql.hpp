#ifndef NRC_SQL_HPP_
#define NRC_SQL_HPP_

#include <memory>
#include <string>
#include <vector>

#include "nrc/typing.hpp"
#include "nrc/types.hpp"

namespace nrc {

struct SqlQuery;

/// Scalar SQL expression over generator columns.
struct SqlExpr {
  enum class Kind { kColumn, kLiteral, kOp, kNotExists };
  Kind kind = Kind::kLiteral;
  std::string alias;   // column: generator alias
  std::string text;    // column name, rendered literal, or operator name
  std::vector<SqlExpr> args;
  std::shared_ptr<const SqlQuery> sub;  // NOT EXISTS subquery
};

struct SqlColumn {
  std::string label;
  SqlExpr expr;
};

struct SqlGenerator {
  std::string alias;
  std::shared_ptr<const SqlQuery> source;
  bool correlated = false;  // mentions an enclosing generator
};

/// Recognized normal form: unions of select-from-where blocks over stored
/// tables, with DEDUP (bag to set) and PROMOTE (set to bag) nodes.
struct SqlQuery {
  enum class Kind { kEmpty, kUnion, kSelect, kTable, kDedup, kPromote };
  Kind kind = Kind::kEmpty;
  bool bag = false;
  Type elem = Type::boolean();
  std::string table;  // kTable
  std::vector<std::shared_ptr<const SqlQuery>> kids;  // kUnion: 2, kDedup/kPromote: 1
  std::vector<SqlGenerator> gens;
  std::vector<SqlExpr> guards;
  std::vector<SqlColumn> head;
};

/// Column names of a relation with elements of type `elem`: sorted record
/// labels, `_1` for atomic elements, `_unit` for the empty record.
std::vector<std::string> sql_columns(const Type& elem);

/// Structural match of a (normalized) query of flat collection type; throws
/// NotTranslatable naming the offending position.
SqlQuery recognize(const TypedTerm& t);

/// Deterministic SQL text for a recognized query.
std::string to_sql(const SqlQuery& q);

/// True when emission needs a LATERAL derived table.
bool uses_lateral(const SqlQuery& q);

}  // namespace nrc

#endif  // NRC_SQL_HPP_
