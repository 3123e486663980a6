#include "nrc/sql.hpp"

#include <algorithm>
#include <set>

#include "nrc/diagnostics.hpp"
#include "nrc/signature.hpp"

namespace nrc {

std::vector<std::string> sql_columns(const Type& elem) {
  if (!elem.is_record()) return {"_1"};
  if (elem.field_count() == 0) return {"_unit"};
  std::vector<std::string> cols;
  for (size_t i = 0; i < elem.field_count(); ++i) cols.push_back(elem.label(i));
  std::sort(cols.begin(), cols.end());
  return cols;
}

namespace {

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "all",   "and",    "as",     "by",    "case",  "cast",    "distinct", "exists", "from",
      "group", "in",     "is",     "join",  "not",   "null",    "on",       "or",     "order",
      "select","table",  "union",  "where", "with",  "lateral", "limit",    "values", "true",
      "false", "except", "having", "into",  "left",  "right",   "inner",    "outer",  "using"};
  return words;
}

struct VarInfo {
  std::string name;
  std::string alias;
  Type elem;
};
using Scope = std::vector<VarInfo>;

SqlExpr column(const std::string& alias, const std::string& col) {
  SqlExpr e;
  e.kind = SqlExpr::Kind::kColumn;
  e.alias = alias;
  e.text = col;
  return e;
}

SqlExpr literal(const std::string& text) {
  SqlExpr e;
  e.kind = SqlExpr::Kind::kLiteral;
  e.text = text;
  return e;
}

std::string render_literal(const Term& c) {
  const std::string& name = c.name();
  auto ty = signature::literal_type(name);
  if (ty->atom_name() == "Bool") return signature::literal_bool(name) ? "TRUE" : "FALSE";
  if (ty->atom_name() == "Int") return std::to_string(signature::literal_int(name));
  std::string out = "'";
  for (char ch : signature::literal_string(name)) {
    if (ch == '\'') out += '\'';
    out += ch;
  }
  return out + "'";
}

class Recognizer {
 public:
  explicit Recognizer(const TypedTerm& t) : base_(t.env), calc_(t.calculus) {}

  SqlQuery query(const Term& t, const Path& path, const Scope& scope) {
    Type ty = type_of(t, path, scope);
    if (!is_flat_collection(ty))
      fail(path, "type " + ty.to_string() + " is not a flat collection");
    SqlQuery q;
    q.bag = ty.is_bag();
    q.elem = ty.elem();
    switch (t.kind()) {
      case TermKind::kEmptySet:
      case TermKind::kEmptyBag:
        q.kind = SqlQuery::Kind::kEmpty;
        return q;
      case TermKind::kUnion:
      case TermKind::kDisjUnion:
        q.kind = SqlQuery::Kind::kUnion;
        q.kids.push_back(sub(t.kid(0), child(path, 0), scope));
        q.kids.push_back(sub(t.kid(1), child(path, 1), scope));
        return q;
      case TermKind::kVar:
        if (find(scope, t.name()) != nullptr)
          fail(path, "collection-valued variable " + t.name());
        q.kind = SqlQuery::Kind::kTable;
        q.table = t.name();
        return q;
      case TermKind::kDedup:
      case TermKind::kPromote:
        q.kind = t.kind() == TermKind::kDedup ? SqlQuery::Kind::kDedup : SqlQuery::Kind::kPromote;
        q.kids.push_back(sub(t.kid(0), child(path, 0), scope));
        return q;
      case TermKind::kCompSet:
      case TermKind::kCompBag:
      case TermKind::kWhereSet:
      case TermKind::kWhereBag:
      case TermKind::kSingletonSet:
      case TermKind::kSingletonBag:
        q.kind = SqlQuery::Kind::kSelect;
        select(q, t, path, scope);
        return q;
      default:
        fail(path, std::string("unexpected ") + kind_name(t.kind()) + " in a query");
    }
  }

 private:
  [[noreturn]] static void fail(const Path& path, const std::string& reason) {
    throw Error("NotTranslatable", "at " + path_to_string(path) + ": " + reason);
  }

  static Path child(Path p, int k) {
    p.push_back(k);
    return p;
  }

  static const VarInfo* find(const Scope& scope, const std::string& name) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  TypeEnv env_of(const Scope& scope) const {
    TypeEnv env = base_;
    for (const auto& v : scope) env.bind(v.name, v.elem);
    return env;
  }

  Type type_of(const Term& t, const Path& path, const Scope& scope) const {
    try {
      return infer(env_of(scope), t, calc_);
    } catch (const Error& e) {
      fail(path, "ill-typed subterm: " + e.message());
    }
  }

  std::shared_ptr<const SqlQuery> sub(const Term& t, const Path& path, const Scope& scope) {
    return std::make_shared<const SqlQuery>(query(t, path, scope));
  }

  std::string fresh_alias(const std::string& base) {
    std::string clean;
    for (char ch : base) clean += (ch == '\'') ? '_' : ch;
    if (clean.empty()) clean = "g";
    std::string name = clean;
    for (int k = 1; used_.count(name) || reserved_words().count(name); ++k)
      name = clean + std::to_string(k);
    used_.insert(name);
    return name;
  }

  static bool correlated(const Term& src, const Scope& scope) {
    for (const auto& x : src.free_vars())
      if (find(scope, x) != nullptr) return true;
    return false;
  }

  void generator(SqlQuery& q, const std::string& var, const Term& src, const Path& path,
                 Scope& scope) {
    auto source = sub(src, path, scope);
    // Duplicates in a set generator's source never change a set result.
    if (!q.bag && source->kind == SqlQuery::Kind::kDedup) source = source->kids[0];
    SqlGenerator g;
    g.alias = fresh_alias(var);
    g.correlated = correlated(src, scope);
    g.source = source;
    q.gens.push_back(g);
    scope.push_back({var, g.alias, source->elem});
  }

  void select(SqlQuery& q, const Term& t, const Path& path, const Scope& outer) {
    Scope scope = outer;
    Term cur = t;
    Path at = path;
    for (;;) {
      switch (cur.kind()) {
        case TermKind::kCompSet:
        case TermKind::kCompBag: {
          generator(q, cur.name(), cur.kid(1), child(at, 1), scope);
          Term head = cur.kid(0);
          cur = head;
          at = child(at, 0);
          continue;
        }
        case TermKind::kWhereSet:
        case TermKind::kWhereBag: {
          q.guards.push_back(scalar(cur.kid(0), child(at, 0), scope));
          Term body = cur.kid(1);
          cur = body;
          at = child(at, 1);
          continue;
        }
        case TermKind::kSingletonSet:
        case TermKind::kSingletonBag:
          q.head = columns(cur.kid(0), child(at, 0), scope, q.elem);
          return;
        default: {
          // A collection-valued head becomes one more generator.
          std::string var = fresh_name("h", all_names(t));
          generator(q, var, cur, at, scope);
          const VarInfo& h = scope.back();
          for (const auto& c : sql_columns(q.elem))
            q.head.push_back({c, q.elem.is_record() && q.elem.field_count() == 0
                                     ? literal("1")
                                     : column(h.alias, c)});
          return;
        }
      }
    }
  }

  std::vector<SqlColumn> columns(const Term& r, const Path& path, const Scope& scope,
                                 const Type& elem) {
    if (!elem.is_record()) return {{"_1", scalar(r, path, scope)}};
    if (elem.field_count() == 0) return {{"_unit", literal("1")}};
    std::vector<SqlColumn> out;
    if (r.kind() == TermKind::kRecord) {
      for (size_t i = 0; i < r.arity(); ++i)
        out.push_back({r.labels()[i], scalar(r.kid(i), child(path, static_cast<int>(i)), scope)});
    } else if (r.kind() == TermKind::kVar && find(scope, r.name()) != nullptr) {
      const VarInfo* v = find(scope, r.name());
      for (const auto& c : sql_columns(v->elem)) out.push_back({c, column(v->alias, c)});
    } else {
      fail(path, std::string("row expression ") + kind_name(r.kind()) + " is not a record");
    }
    std::sort(out.begin(), out.end(),
              [](const SqlColumn& a, const SqlColumn& b) { return a.label < b.label; });
    return out;
  }

  SqlExpr scalar(const Term& e, const Path& path, const Scope& scope) {
    switch (e.kind()) {
      case TermKind::kVar: {
        const VarInfo* v = find(scope, e.name());
        if (v == nullptr || v->elem.is_record() || !v->elem.is_atomic())
          fail(path, "variable " + e.name() + " is not an atomic column");
        return column(v->alias, "_1");
      }
      case TermKind::kProject: {
        const Term& r = e.kid(0);
        const VarInfo* v = r.kind() == TermKind::kVar ? find(scope, r.name()) : nullptr;
        if (v == nullptr || !v->elem.is_record())
          fail(path, "projection ." + e.name() + " is not a column reference");
        const Type* f = v->elem.field(e.name());
        if (f == nullptr || !f->is_atomic()) fail(path, "field " + e.name() + " is not atomic");
        return column(v->alias, e.name());
      }
      case TermKind::kConst: {
        if (e.is_literal()) return literal(render_literal(e));
        SqlExpr op;
        op.kind = SqlExpr::Kind::kOp;
        op.text = e.name();
        for (size_t i = 0; i < e.arity(); ++i)
          op.args.push_back(scalar(e.kid(i), child(path, static_cast<int>(i)), scope));
        return op;
      }
      case TermKind::kEmptyTest: {
        SqlExpr ne;
        ne.kind = SqlExpr::Kind::kNotExists;
        ne.sub = sub(e.kid(0), child(path, 0), scope);
        return ne;
      }
      default:
        fail(path, std::string(kind_name(e.kind())) + " is not a scalar SQL expression");
    }
  }

  TypeEnv base_;
  Calculus calc_;
  std::set<std::string> used_;
};

// ---- emission ----

int level(const SqlExpr& e) {
  switch (e.kind) {
    case SqlExpr::Kind::kColumn:
    case SqlExpr::Kind::kLiteral:
      return 6;
    case SqlExpr::Kind::kNotExists:
      return 3;
    case SqlExpr::Kind::kOp:
      if (e.text == "or") return 1;
      if (e.text == "and") return 2;
      if (e.text == "not") return 3;
      if (e.text == "eq" || e.text == "leq") return 4;
      return 5;
  }
  return 6;
}

class Emitter {
 public:
  explicit Emitter(std::set<std::string> taken) : taken_(std::move(taken)) {}

  struct Out {
    std::string text;
    std::string op;  // compound operator, empty for a single SELECT
  };

  Out emit(const SqlQuery& q) {
    switch (q.kind) {
      case SqlQuery::Kind::kEmpty: {
        std::string cols;
        for (const auto& c : sql_columns(q.elem)) {
          if (!cols.empty()) cols += ", ";
          cols += "CAST(NULL AS " + sql_type(q.elem, c) + ") AS " + c;
        }
        return {"SELECT " + cols + " WHERE 1=0", ""};
      }
      case SqlQuery::Kind::kTable:
        return {table_select(q, false), ""};
      case SqlQuery::Kind::kSelect:
        return {select(q, false), ""};
      case SqlQuery::Kind::kUnion: {
        std::string op = q.bag ? "UNION ALL" : "UNION";
        return {operand(*q.kids[0], op) + " " + op + " " + operand(*q.kids[1], op), op};
      }
      case SqlQuery::Kind::kDedup:
      case SqlQuery::Kind::kPromote: {
        const SqlQuery& c = *q.kids[0];
        bool dedup = q.kind == SqlQuery::Kind::kDedup;
        switch (c.kind) {
          case SqlQuery::Kind::kEmpty:
            return emit(c);
          case SqlQuery::Kind::kSelect:
            return {select(c, true), ""};
          case SqlQuery::Kind::kTable:
            // Stored sets are duplicate-free.
            return {table_select(c, dedup), ""};
          case SqlQuery::Kind::kDedup:
          case SqlQuery::Kind::kPromote:
            if (!dedup || c.kind == SqlQuery::Kind::kPromote) return emit(c);
            break;
          case SqlQuery::Kind::kUnion:
            if (!dedup && !c.bag) return emit(c);
            break;
        }
        return {"SELECT DISTINCT * FROM (" + emit(c).text + ") AS " + wrapper_alias(), ""};
      }
    }
    return {"", ""};
  }

  std::string expr(const SqlExpr& e, int ctx) {
    std::string s;
    switch (e.kind) {
      case SqlExpr::Kind::kColumn:
        s = e.alias + "." + e.text;
        break;
      case SqlExpr::Kind::kLiteral:
        s = e.text;
        break;
      case SqlExpr::Kind::kNotExists:
        s = "NOT EXISTS (" + emit(*e.sub).text + ")";
        break;
      case SqlExpr::Kind::kOp: {
        const auto& a = e.args;
        if (e.text == "or") s = expr(a[0], 1) + " OR " + expr(a[1], 2);
        else if (e.text == "and") s = expr(a[0], 2) + " AND " + expr(a[1], 3);
        else if (e.text == "not") s = "NOT " + expr(a[0], 3);
        else if (e.text == "eq") s = expr(a[0], 5) + " = " + expr(a[1], 5);
        else if (e.text == "leq") s = expr(a[0], 5) + " <= " + expr(a[1], 5);
        else s = expr(a[0], 5) + " + " + expr(a[1], 6);
        break;
      }
    }
    return level(e) < ctx ? "(" + s + ")" : s;
  }

 private:
  static std::string sql_type(const Type& elem, const std::string& col) {
    const Type* t = elem.is_record() ? elem.field(col) : &elem;
    if (t == nullptr || (t->is_atomic() && t->atom_name() == "Int")) return "INT";
    if (t->is_atomic() && t->atom_name() == "String") return "TEXT";
    if (t->is_atomic() && t->atom_name() == "Bool") return "BOOLEAN";
    return "INT";
  }

  std::string wrapper_alias() {
    std::string name = "d";
    for (int k = 1; taken_.count(name); ++k) name = "d" + std::to_string(k);
    taken_.insert(name);
    return name;
  }

  std::string operand(const SqlQuery& q, const std::string& op) {
    Out o = emit(q);
    if (o.op.empty() || o.op == op) return o.text;
    return "SELECT * FROM (" + o.text + ") AS " + wrapper_alias();
  }

  std::string table_select(const SqlQuery& q, bool distinct) {
    std::string cols;
    for (const auto& c : sql_columns(q.elem)) {
      if (!cols.empty()) cols += ", ";
      cols += q.table + "." + c + " AS " + c;
    }
    return std::string("SELECT ") + (distinct ? "DISTINCT " : "") + cols + " FROM " + q.table;
  }

  std::string select(const SqlQuery& q, bool distinct) {
    std::string s = distinct ? "SELECT DISTINCT " : "SELECT ";
    for (size_t i = 0; i < q.head.size(); ++i) {
      if (i > 0) s += ", ";
      s += expr(q.head[i].expr, 0) + " AS " + q.head[i].label;
    }
    for (size_t i = 0; i < q.gens.size(); ++i) {
      const SqlGenerator& g = q.gens[i];
      s += i == 0 ? " FROM " : ", ";
      if (g.source->kind == SqlQuery::Kind::kTable) {
        s += g.source->table + " AS " + g.alias;
      } else {
        s += std::string(g.correlated ? "LATERAL " : "") + "(" + emit(*g.source).text + ") AS " +
             g.alias;
      }
    }
    for (size_t i = 0; i < q.guards.size(); ++i)
      s += (i == 0 ? " WHERE " : " AND ") + expr(q.guards[i], 2);
    return s;
  }

  std::set<std::string> taken_;
};

void collect_aliases(const SqlQuery& q, std::set<std::string>& out);

void collect_aliases(const SqlExpr& e, std::set<std::string>& out) {
  if (e.sub) collect_aliases(*e.sub, out);
  for (const auto& a : e.args) collect_aliases(a, out);
}

void collect_aliases(const SqlQuery& q, std::set<std::string>& out) {
  if (!q.table.empty()) out.insert(q.table);
  for (const auto& k : q.kids) collect_aliases(*k, out);
  for (const auto& g : q.gens) {
    out.insert(g.alias);
    collect_aliases(*g.source, out);
  }
  for (const auto& e : q.guards) collect_aliases(e, out);
  for (const auto& c : q.head) collect_aliases(c.expr, out);
}

bool lateral_expr(const SqlExpr& e) {
  if (e.sub && uses_lateral(*e.sub)) return true;
  for (const auto& a : e.args)
    if (lateral_expr(a)) return true;
  return false;
}

}  // namespace

SqlQuery recognize(const TypedTerm& t) {
  if (!is_flat_collection(t.type))
    throw Error("NotTranslatable",
                "at root: query type " + t.type.to_string() + " is not a flat collection");
  return Recognizer(t).query(t.term, {}, {});
}

std::string to_sql(const SqlQuery& q) {
  std::set<std::string> taken;
  collect_aliases(q, taken);
  return Emitter(std::move(taken)).emit(q).text;
}

bool uses_lateral(const SqlQuery& q) {
  for (const auto& k : q.kids)
    if (uses_lateral(*k)) return true;
  for (const auto& g : q.gens)
    if (g.correlated || uses_lateral(*g.source)) return true;
  for (const auto& e : q.guards)
    if (lateral_expr(e)) return true;
  for (const auto& c : q.head)
    if (lateral_expr(c.expr)) return true;
  return false;
}

}  // namespace nrc
