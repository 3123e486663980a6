#ifndef NRC_TESTS_SQLITE_HARNESS_HPP_
#define NRC_TESTS_SQLITE_HARNESS_HPP_

#include <sqlite3.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "nrc/eval.hpp"
#include "nrc/sql.hpp"

namespace nrc::testing {

// Loads a Database into an in-memory SQLite instance and runs emitted SQL,
// reading rows back as Values of the query's element type.
class SqliteDb {
 public:
  explicit SqliteDb(const Database& db) {
    if (sqlite3_open(":memory:", &db_) != SQLITE_OK) throw std::runtime_error("sqlite open");
    for (const auto& [name, table] : db.tables()) load(name, table);
  }
  ~SqliteDb() { sqlite3_close(db_); }
  SqliteDb(const SqliteDb&) = delete;
  SqliteDb& operator=(const SqliteDb&) = delete;

  // Result as a set or bag Value, according to `bag`.
  Value query(const std::string& sql, const Type& elem, bool bag) {
    sqlite3_stmt* st = nullptr;
    if (sqlite3_prepare_v2(db_, sql.c_str(), -1, &st, nullptr) != SQLITE_OK)
      throw std::runtime_error(std::string("sqlite: ") + sqlite3_errmsg(db_) + " in " + sql);
    std::vector<Value> rows;
    while (sqlite3_step(st) == SQLITE_ROW) rows.push_back(row(st, elem));
    sqlite3_finalize(st);
    if (!bag) return Value::set(rows);
    std::vector<Value::Count> counts;
    for (auto& r : rows) counts.push_back({r, 1});
    return Value::bag(counts);
  }

 private:
  static void exec_or_throw(sqlite3* db, const std::string& sql) {
    char* msg = nullptr;
    if (sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &msg) != SQLITE_OK) {
      std::string m = msg ? msg : "?";
      sqlite3_free(msg);
      throw std::runtime_error("sqlite: " + m + " in " + sql);
    }
  }

  static std::string literal(const Value& v) {
    switch (v.kind()) {
      case ValueKind::kBool: return v.as_bool() ? "1" : "0";
      case ValueKind::kInt: return std::to_string(v.as_int());
      default: {
        std::string out = "'";
        for (char c : v.as_string()) out += c == '\'' ? std::string("''") : std::string(1, c);
        return out + "'";
      }
    }
  }

  void load(const std::string& name, const Table& table) {
    const Type& elem = table.type.elem();
    auto cols = sql_columns(elem);
    std::string ddl = "CREATE TABLE " + name + " (";
    for (size_t i = 0; i < cols.size(); ++i) ddl += (i ? ", " : "") + cols[i];
    exec_or_throw(db_, ddl + ")");
    auto insert = [&](const Value& r) {
      std::string sql = "INSERT INTO " + name + " VALUES (";
      for (size_t i = 0; i < cols.size(); ++i) {
        const Value* f = elem.is_record() ? r.field(cols[i]) : &r;
        sql += (i ? ", " : "") + literal(*f);
      }
      exec_or_throw(db_, sql + ")");
    };
    if (table.rows.kind() == ValueKind::kSet) {
      for (const auto& r : table.rows.elems()) insert(r);
    } else {
      for (const auto& [r, n] : table.rows.counts())
        for (size_t k = 0; k < n; ++k) insert(r);
    }
  }

  static Value cell(sqlite3_stmt* st, int i, const Type& ty) {
    if (ty.atom_name() == "Bool") return Value::boolean(sqlite3_column_int64(st, i) != 0);
    if (ty.atom_name() == "Int") return Value::integer(sqlite3_column_int64(st, i));
    auto* text = reinterpret_cast<const char*>(sqlite3_column_text(st, i));
    return Value::string(text ? text : "");
  }

  static Value row(sqlite3_stmt* st, const Type& elem) {
    if (!elem.is_record()) return cell(st, 0, elem);
    std::vector<Value::Field> fields;
    auto cols = sql_columns(elem);
    for (int i = 0; i < static_cast<int>(cols.size()); ++i) {
      const Type* ft = elem.field(cols[i]);
      if (ft == nullptr) continue;  // placeholder column of an empty record
      fields.push_back({cols[i], cell(st, i, *ft)});
    }
    return Value::record(fields);
  }

  sqlite3* db_ = nullptr;
};

}  // namespace nrc::testing

#endif  // NRC_TESTS_SQLITE_HARNESS_HPP_
