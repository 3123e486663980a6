#include "nrc/eval.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "nrc/diagnostics.hpp"
#include "nrc/signature.hpp"
#include "nrc/syntax.hpp"

namespace nrc {

struct ValueRep {
  ValueKind kind = ValueKind::kBool;
  bool b = false;
  long long n = 0;
  std::string s;  // string payload, or closure variable
  std::vector<Value::Field> fields;  // record fields, or closure environment
  std::vector<Value> elems;
  std::vector<Value::Count> counts;
  Term body;
  std::string key;  // alpha key of the closure's lambda
};

namespace {

std::shared_ptr<ValueRep> rep(ValueKind kind) {
  auto r = std::make_shared<ValueRep>();
  r->kind = kind;
  return r;
}

[[noreturn]] void wrong_kind(const char* what) {
  throw Error("ValueKindMismatch", std::string("value is not ") + what);
}

}  // namespace

Value::Value() : rep_(rep(ValueKind::kBool)) {}

Value Value::boolean(bool b) {
  auto r = rep(ValueKind::kBool);
  r->b = b;
  return Value(r);
}

Value Value::integer(long long n) {
  auto r = rep(ValueKind::kInt);
  r->n = n;
  return Value(r);
}

Value Value::string(std::string s) {
  auto r = rep(ValueKind::kString);
  r->s = std::move(s);
  return Value(r);
}

Value Value::record(std::vector<Field> fields) {
  std::sort(fields.begin(), fields.end(),
            [](const Field& a, const Field& b) { return a.first < b.first; });
  auto r = rep(ValueKind::kRecord);
  r->fields = std::move(fields);
  return Value(r);
}

Value Value::set(std::vector<Value> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end(),
                          [](const Value& a, const Value& b) { return compare(a, b) == 0; }),
              elems.end());
  auto r = rep(ValueKind::kSet);
  r->elems = std::move(elems);
  return Value(r);
}

Value Value::bag(std::vector<Count> counts) {
  std::sort(counts.begin(), counts.end(),
            [](const Count& a, const Count& b) { return a.first < b.first; });
  std::vector<Count> merged;
  for (auto& c : counts) {
    if (c.second == 0) continue;
    if (!merged.empty() && compare(merged.back().first, c.first) == 0)
      merged.back().second += c.second;
    else
      merged.push_back(std::move(c));
  }
  auto r = rep(ValueKind::kBag);
  r->counts = std::move(merged);
  return Value(r);
}

Value Value::closure(std::string var, Term body, Term lambda, std::vector<Field> env) {
  std::sort(env.begin(), env.end(),
            [](const Field& a, const Field& b) { return a.first < b.first; });
  auto r = rep(ValueKind::kClosure);
  r->s = std::move(var);
  r->body = std::move(body);
  r->key = alpha_key(lambda);
  r->fields = std::move(env);
  return Value(r);
}

ValueKind Value::kind() const { return rep_->kind; }

bool Value::as_bool() const {
  if (kind() != ValueKind::kBool) wrong_kind("a boolean");
  return rep_->b;
}
long long Value::as_int() const {
  if (kind() != ValueKind::kInt) wrong_kind("an integer");
  return rep_->n;
}
const std::string& Value::as_string() const {
  if (kind() != ValueKind::kString) wrong_kind("a string");
  return rep_->s;
}
const std::vector<Value::Field>& Value::fields() const {
  if (kind() != ValueKind::kRecord) wrong_kind("a record");
  return rep_->fields;
}
const Value* Value::field(const std::string& label) const {
  for (const auto& f : fields())
    if (f.first == label) return &f.second;
  return nullptr;
}
const std::vector<Value>& Value::elems() const {
  if (kind() != ValueKind::kSet) wrong_kind("a set");
  return rep_->elems;
}
const std::vector<Value::Count>& Value::counts() const {
  if (kind() != ValueKind::kBag) wrong_kind("a bag");
  return rep_->counts;
}
const std::string& Value::closure_var() const {
  if (kind() != ValueKind::kClosure) wrong_kind("a closure");
  return rep_->s;
}
const Term& Value::closure_body() const {
  if (kind() != ValueKind::kClosure) wrong_kind("a closure");
  return rep_->body;
}
const std::vector<Value::Field>& Value::closure_env() const {
  if (kind() != ValueKind::kClosure) wrong_kind("a closure");
  return rep_->fields;
}

std::size_t Value::cardinality() const {
  if (kind() == ValueKind::kSet) return rep_->elems.size();
  std::size_t n = 0;
  for (const auto& c : counts()) n += c.second;
  return n;
}

namespace {

int compare_fields(const std::vector<Value::Field>& a, const std::vector<Value::Field>& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (int c = a[i].first.compare(b[i].first)) return c < 0 ? -1 : 1;
    if (int c = compare(a[i].second, b[i].second)) return c;
  }
  return a.size() < b.size() ? -1 : a.size() > b.size() ? 1 : 0;
}

template <typename T>
int three_way(const T& a, const T& b) {
  return a < b ? -1 : b < a ? 1 : 0;
}

}  // namespace

int compare(const Value& a, const Value& b) {
  if (a.rep_ == b.rep_) return 0;
  if (a.kind() != b.kind()) return three_way(static_cast<int>(a.kind()), static_cast<int>(b.kind()));
  const ValueRep& x = *a.rep_;
  const ValueRep& y = *b.rep_;
  switch (x.kind) {
    case ValueKind::kBool:
      return three_way(x.b, y.b);
    case ValueKind::kInt:
      return three_way(x.n, y.n);
    case ValueKind::kString:
      return three_way(x.s, y.s);
    case ValueKind::kRecord:
      return compare_fields(x.fields, y.fields);
    case ValueKind::kSet:
      for (size_t i = 0; i < x.elems.size() && i < y.elems.size(); ++i)
        if (int c = compare(x.elems[i], y.elems[i])) return c;
      return three_way(x.elems.size(), y.elems.size());
    case ValueKind::kBag:
      for (size_t i = 0; i < x.counts.size() && i < y.counts.size(); ++i) {
        if (int c = compare(x.counts[i].first, y.counts[i].first)) return c;
        if (int c = three_way(x.counts[i].second, y.counts[i].second)) return c;
      }
      return three_way(x.counts.size(), y.counts.size());
    case ValueKind::kClosure:
      if (int c = three_way(x.key, y.key)) return c;
      return compare_fields(x.fields, y.fields);
  }
  return 0;
}

bool value_eq(const Value& a, const Value& b) { return compare(a, b) == 0; }

std::string value_to_string(const Value& v) {
  std::ostringstream out;
  switch (v.kind()) {
    case ValueKind::kBool:
    case ValueKind::kInt:
    case ValueKind::kString:
      return value_to_literal(v).name();
    case ValueKind::kRecord: {
      out << "<";
      const char* sep = "";
      for (const auto& [l, f] : v.fields()) {
        out << sep << l << " = " << value_to_string(f);
        sep = ", ";
      }
      out << ">";
      break;
    }
    case ValueKind::kSet: {
      out << "{";
      const char* sep = "";
      for (const auto& e : v.elems()) {
        out << sep << value_to_string(e);
        sep = ", ";
      }
      out << "}";
      break;
    }
    case ValueKind::kBag: {
      out << "{|";
      const char* sep = "";
      for (const auto& [e, n] : v.counts())
        for (size_t i = 0; i < n; ++i) {
          out << sep << value_to_string(e);
          sep = ", ";
        }
      out << "|}";
      break;
    }
    case ValueKind::kClosure:
      out << "<closure \\" << v.closure_var() << ". " << print_term(v.closure_body()) << ">";
      break;
  }
  return out.str();
}

nlohmann::json value_to_json(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kBool:
      return v.as_bool();
    case ValueKind::kInt:
      return v.as_int();
    case ValueKind::kString:
      return v.as_string();
    case ValueKind::kRecord: {
      nlohmann::json j = nlohmann::json::object();
      for (const auto& [l, f] : v.fields()) j[l] = value_to_json(f);
      return j;
    }
    case ValueKind::kSet: {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& e : v.elems()) j.push_back(value_to_json(e));
      return j;
    }
    case ValueKind::kBag: {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& [e, n] : v.counts())
        for (size_t i = 0; i < n; ++i) j.push_back(value_to_json(e));
      return j;
    }
    case ValueKind::kClosure:
      return value_to_string(v);
  }
  return nullptr;
}

namespace {

[[noreturn]] void bad_db(const std::string& msg) { throw Error("BadDatabase", msg); }

}  // namespace

Value value_from_json(const nlohmann::json& j, const Type& type) {
  switch (type.kind()) {
    case TypeKind::kAtomic: {
      const std::string& a = type.atom_name();
      if (a == "Bool" && j.is_boolean()) return Value::boolean(j.get<bool>());
      if (a == "Int" && j.is_number_integer()) return Value::integer(j.get<long long>());
      if (a == "String" && j.is_string()) return Value::string(j.get<std::string>());
      bad_db("expected a value of type " + a + ", found " + j.dump());
    }
    case TypeKind::kRecord: {
      if (!j.is_object()) bad_db("expected a record " + type.to_string() + ", found " + j.dump());
      if (j.size() != type.field_count())
        bad_db("row " + j.dump() + " does not match " + type.to_string());
      std::vector<Value::Field> fields;
      for (size_t i = 0; i < type.field_count(); ++i) {
        auto it = j.find(type.label(i));
        if (it == j.end()) bad_db("row " + j.dump() + " lacks field " + type.label(i));
        fields.emplace_back(type.label(i), value_from_json(*it, type.field_type(i)));
      }
      return Value::record(std::move(fields));
    }
    case TypeKind::kSet:
    case TypeKind::kBag: {
      if (!j.is_array()) bad_db("expected an array for " + type.to_string());
      std::vector<Value> elems;
      for (const auto& e : j) elems.push_back(value_from_json(e, type.elem()));
      if (type.is_set()) return Value::set(std::move(elems));
      std::vector<Value::Count> counts;
      for (auto& e : elems) counts.emplace_back(std::move(e), 1);
      return Value::bag(std::move(counts));
    }
    case TypeKind::kFunction:
      break;
  }
  bad_db("function values cannot be stored");
}

Term value_to_literal(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kBool:
      return Term::boolean(v.as_bool());
    case ValueKind::kInt:
      return Term::integer(v.as_int());
    case ValueKind::kString:
      return Term::string_lit(v.as_string());
    default:
      wrong_kind("atomic");
  }
}

void Database::add(const std::string& name, const Type& type, std::vector<Value> rows) {
  if (!type.is_collection()) bad_db("table " + name + " must have a collection type");
  Value value;
  if (type.is_set()) {
    value = Value::set(std::move(rows));
  } else {
    std::vector<Value::Count> counts;
    for (auto& r : rows) counts.emplace_back(std::move(r), 1);
    value = Value::bag(std::move(counts));
  }
  tables_.insert_or_assign(name, Table{type, value});
}

TypeEnv Database::type_env() const {
  TypeEnv env;
  for (const auto& [name, table] : tables_) env.bind(name, table.type);
  return env;
}

std::map<std::string, Value> Database::values() const {
  std::map<std::string, Value> out;
  for (const auto& [name, table] : tables_) out.emplace(name, table.rows);
  return out;
}

Database Database::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("tables") || !j["tables"].is_object())
    bad_db("expected an object with a \"tables\" member");
  Database db;
  for (const auto& [name, spec] : j["tables"].items()) {
    if (!spec.is_object()) bad_db("table " + name + " must be an object");
    std::string kind = spec.value("kind", "set");
    if (kind != "set" && kind != "bag") bad_db("table " + name + ": kind must be set or bag");
    if (!spec.contains("type") || !spec["type"].is_string())
      bad_db("table " + name + " lacks a type");
    Type ty = parse_type(spec["type"].get<std::string>());
    if (ty.is_collection()) {
      if (ty.is_bag() != (kind == "bag"))
        bad_db("table " + name + ": type " + ty.to_string() + " disagrees with kind " + kind);
    } else {
      ty = kind == "bag" ? Type::bag(ty) : Type::set(ty);
    }
    if (!is_first_order(ty)) bad_db("table " + name + " has a higher-order type");
    std::vector<Value> rows;
    if (spec.contains("rows")) {
      if (!spec["rows"].is_array()) bad_db("table " + name + ": rows must be an array");
      for (const auto& r : spec["rows"]) rows.push_back(value_from_json(r, ty.elem()));
    }
    db.add(name, ty, std::move(rows));
  }
  return db;
}

Database Database::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot read " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad_db(path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json Database::to_json() const {
  nlohmann::json tables = nlohmann::json::object();
  for (const auto& [name, table] : tables_) {
    tables[name] = {{"kind", table.type.is_bag() ? "bag" : "set"},
                    {"type", table.type.to_string()},
                    {"rows", value_to_json(table.rows)}};
  }
  return {{"tables", tables}};
}

namespace {

struct EnvNode {
  std::string name;
  Value value;
  std::shared_ptr<const EnvNode> next;
};
using Env = std::shared_ptr<const EnvNode>;

Env extend(Env env, const std::string& name, Value v) {
  return std::make_shared<const EnvNode>(EnvNode{name, std::move(v), std::move(env)});
}

class Evaluator {
 public:
  explicit Evaluator(Calculus calc) : calc_(calc) {}

  Value run(const Env& env, const Term& t) {
    switch (t.kind()) {
      case TermKind::kVar:
        return lookup(env, t);
      case TermKind::kHole:
        throw Error("HoleInTerm", "cannot evaluate hole [" + t.name() + "]", t.span());
      case TermKind::kConst:
        return constant(env, t);
      case TermKind::kRecord: {
        std::vector<Value::Field> fields;
        for (size_t i = 0; i < t.arity(); ++i) fields.emplace_back(t.labels()[i], run(env, t.kid(i)));
        return Value::record(std::move(fields));
      }
      case TermKind::kProject: {
        Value r = run(env, t.kid(0));
        const Value* f = r.field(t.name());
        if (f == nullptr) throw Error("FieldMissing", "no field " + t.name(), t.span());
        return *f;
      }
      case TermKind::kLambda: {
        std::vector<Value::Field> captured;
        for (const auto& x : t.free_vars()) captured.emplace_back(x, lookup_name(env, x, t.span()));
        return Value::closure(t.name(), t.kid(0), t, std::move(captured));
      }
      case TermKind::kApply: {
        Value f = run(env, t.kid(0));
        if (f.kind() != ValueKind::kClosure)
          throw Error("NotAFunctionValue", "applying a non-function", t.span());
        Value arg = run(env, t.kid(1));
        Env inner;
        for (const auto& [x, v] : f.closure_env()) inner = extend(inner, x, v);
        return run(extend(inner, f.closure_var(), arg), f.closure_body());
      }
      case TermKind::kEmptySet:
        return Value::set({});
      case TermKind::kEmptyBag:
        return Value::bag({});
      case TermKind::kSingletonSet:
        return Value::set({run(env, t.kid(0))});
      case TermKind::kSingletonBag:
        return Value::bag({{run(env, t.kid(0)), 1}});
      case TermKind::kUnion: {
        Value a = run(env, t.kid(0));
        Value b = run(env, t.kid(1));
        std::vector<Value> elems = a.elems();
        elems.insert(elems.end(), b.elems().begin(), b.elems().end());
        return Value::set(std::move(elems));
      }
      case TermKind::kDisjUnion: {
        Value a = run(env, t.kid(0));
        Value b = run(env, t.kid(1));
        std::vector<Value::Count> counts = a.counts();
        counts.insert(counts.end(), b.counts().begin(), b.counts().end());
        return Value::bag(std::move(counts));
      }
      case TermKind::kCompSet: {
        Value src = run(env, t.kid(1));
        std::vector<Value> out;
        for (const auto& v : src.elems()) {
          Value h = run(extend(env, t.name(), v), t.kid(0));
          out.insert(out.end(), h.elems().begin(), h.elems().end());
        }
        return Value::set(std::move(out));
      }
      case TermKind::kCompBag: {
        Value src = run(env, t.kid(1));
        std::vector<Value::Count> out;
        for (const auto& [v, n] : src.counts()) {
          Value h = run(extend(env, t.name(), v), t.kid(0));
          for (const auto& [w, m] : h.counts()) out.emplace_back(w, n * m);
        }
        return Value::bag(std::move(out));
      }
      case TermKind::kWhereSet:
        return run(env, t.kid(0)).as_bool() ? run(env, t.kid(1)) : Value::set({});
      case TermKind::kWhereBag:
        return run(env, t.kid(0)).as_bool() ? run(env, t.kid(1)) : Value::bag({});
      case TermKind::kEmptyTest: {
        Value c = run(env, t.kid(0));
        return Value::boolean(c.cardinality() == 0);
      }
      case TermKind::kDedup: {
        Value c = run(env, t.kid(0));
        if (c.kind() == ValueKind::kSet) return c;
        std::vector<Value> elems;
        for (const auto& [v, n] : c.counts()) elems.push_back(v);
        return Value::set(std::move(elems));
      }
      case TermKind::kPromote: {
        Value c = run(env, t.kid(0));
        if (calc_ == Calculus::kDeltaIota) return c;
        std::vector<Value::Count> counts;
        for (const auto& v : c.elems()) counts.emplace_back(v, 1);
        return Value::bag(std::move(counts));
      }
    }
    throw Error("InternalError", "unknown term kind");
  }

 private:
  static Value lookup_name(const Env& env, const std::string& x, const Span& span) {
    for (const EnvNode* n = env.get(); n != nullptr; n = n->next.get())
      if (n->name == x) return n->value;
    throw Error("UnboundVariable", "no value for " + x, span);
  }

  static Value lookup(const Env& env, const Term& t) { return lookup_name(env, t.name(), t.span()); }

  Value constant(const Env& env, const Term& t) {
    if (t.arity() == 0) {
      auto ty = signature::literal_type(t.name());
      if (!ty) throw Error("UnknownConstant", "unknown constant " + t.name(), t.span());
      if (ty->atom_name() == "Bool") return Value::boolean(signature::literal_bool(t.name()));
      if (ty->atom_name() == "Int") return Value::integer(signature::literal_int(t.name()));
      return Value::string(signature::literal_string(t.name()));
    }
    // Short-circuit the boolean connectives.
    if ((t.name() == "and" || t.name() == "or") && t.arity() == 2) {
      bool left = run(env, t.kid(0)).as_bool();
      if (left == (t.name() == "or")) return Value::boolean(left);
      return Value::boolean(run(env, t.kid(1)).as_bool());
    }
    std::vector<Term> args;
    for (const auto& a : t.kids()) args.push_back(value_to_literal(run(env, a)));
    return constant(Env{}, signature::apply(t.name(), args));
  }

  Calculus calc_;
};

}  // namespace

Value eval(const std::map<std::string, Value>& env, const Term& t, Calculus calculus) {
  Env chain;
  for (const auto& [x, v] : env) chain = extend(chain, x, v);
  return Evaluator(calculus).run(chain, t);
}

}  // namespace nrc
