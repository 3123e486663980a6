#include "nrc/generator.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "nrc/syntax.hpp"

namespace nrc {
namespace {

enum class Coll { kSet, kBag };

Type coll_type(Coll k, const Type& elem) { return k == Coll::kSet ? Type::set(elem) : Type::bag(elem); }
Coll coll_of(const Type& t) { return t.is_set() ? Coll::kSet : Coll::kBag; }

Term mk_empty(Coll k, const Type& elem) {
  return k == Coll::kSet ? Term::empty_set(Type::set(elem)) : Term::empty_bag(Type::bag(elem));
}
Term mk_single(Coll k, Term m) {
  return k == Coll::kSet ? Term::singleton_set(std::move(m)) : Term::singleton_bag(std::move(m));
}
Term mk_union(Coll k, Term a, Term b) {
  return k == Coll::kSet ? Term::set_union(std::move(a), std::move(b))
                         : Term::bag_union(std::move(a), std::move(b));
}
Term mk_comp(Coll k, Term head, const std::string& x, Term src) {
  return k == Coll::kSet ? Term::comp_set(std::move(head), x, std::move(src))
                         : Term::comp_bag(std::move(head), x, std::move(src));
}
Term mk_where(Coll k, Term cond, Term body) {
  return k == Coll::kSet ? Term::where_set(std::move(cond), std::move(body))
                         : Term::where_bag(std::move(cond), std::move(body));
}

Error generation_failed(const std::string& why) { return Error("GenerationFailed", why); }

class Gen {
 public:
  Gen(std::uint64_t seed, Fragment fragment, TypeEnv tables, double bias)
      : rng_(seed), fragment_(fragment), tables_(std::move(tables)), bias_(bias) {}

  std::mt19937_64& rng() { return rng_; }
  const TypeEnv& tables() const { return tables_; }

  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  bool bags() const { return fragment_ == Fragment::kHeterogeneous; }
  bool dedup_promote() const { return fragment_ != Fragment::kSetOnly; }
  bool delta_iota() const { return fragment_ == Fragment::kDeltaIota; }

  std::string var_name() {
    static const char* const kNames[] = {"x", "y", "z", "w"};
    return kNames[pick(4)];
  }

  Type atom() {
    int r = pick(10);
    return r < 6 ? Type::integer() : r < 9 ? Type::boolean() : Type::string();
  }

  Type small_record() {
    static const char* const kLabels[] = {"a", "b", "c"};
    int n = between(1, 2);
    int first = pick(3);
    std::vector<Type::Field> fields;
    for (int i = 0; i < n; ++i) fields.emplace_back(kLabels[(first + i) % 3], atom());
    return Type::record(std::move(fields));
  }

  Coll random_coll() { return bags() && coin(0.5) ? Coll::kBag : Coll::kSet; }

  Type random_type(int depth) {
    int r = pick(20);
    if (depth <= 0) return r < 12 ? atom() : small_record();
    if (r < 6) return atom();
    if (r < 9) return small_record();
    if (r < 17) return coll_type(random_coll(), elem_type(depth - 1));
    return Type::function(coin(0.7) ? Type::integer() : small_record(), random_type(depth - 1));
  }

  /// Element types for comprehension sources: mostly table rows.
  Type elem_type(int depth) {
    std::vector<Type> rows;
    for (const auto& [n, t] : tables_.bindings()) rows.push_back(t.elem());
    if (!rows.empty() && coin(0.5)) return rows[pick(static_cast<int>(rows.size()))];
    return random_type(depth);
  }

  Type relation_type() {
    Coll k = random_coll();
    return coll_type(k, small_record_atomic());
  }

  Type small_record_atomic() {
    static const char* const kLabels[] = {"a", "b", "c"};
    int n = between(1, 2);
    std::vector<Type::Field> fields;
    for (int i = 0; i < n; ++i) fields.emplace_back(kLabels[i], i == 0 ? Type::integer() : atom());
    return Type::record(std::move(fields));
  }

  // Effective (last-binding) variables of the scope with the predicate.
  std::vector<std::pair<std::string, Type>> vars(const TypeEnv& scope,
                                                 const std::function<bool(const Type&)>& pred) {
    std::map<std::string, Type> eff;
    for (const auto& [n, t] : scope.bindings()) eff.insert_or_assign(n, t);
    std::vector<std::pair<std::string, Type>> out;
    for (const auto& [n, t] : eff)
      if (pred(t)) out.emplace_back(n, t);
    return out;
  }

  // The emptiness test is on sets; bags are tested through dedup.
  static Term emptiness(Term m, const Type& c) {
    return Term::empty_test(c.is_bag() ? Term::dedup(std::move(m)) : std::move(m));
  }

  Term literal(const Type& t) {
    if (t == Type::boolean()) return Term::boolean(coin(0.5));
    if (t == Type::string()) return Term::string_lit(coin(0.5) ? "a" : "b");
    return Term::integer(between(0, 3));
  }

  Term leaf(const Type& t, const TypeEnv& scope) {
    auto exact = vars(scope, [&](const Type& v) { return v == t; });
    if (!exact.empty() && coin(0.7)) return Term::var(exact[pick(static_cast<int>(exact.size()))].first);
    if (auto p = projection(t, scope); p && coin(0.7)) return *p;
    switch (t.kind()) {
      case TypeKind::kAtomic:
        return literal(t);
      case TypeKind::kRecord: {
        std::vector<std::string> labels;
        std::vector<Term> fields;
        for (std::size_t i = 0; i < t.field_count(); ++i) {
          labels.push_back(t.label(i));
          fields.push_back(leaf(t.field_type(i), scope));
        }
        return Term::record(std::move(labels), std::move(fields));
      }
      case TypeKind::kFunction: {
        std::string x = var_name();
        return Term::lambda(x, t.domain(), leaf(t.codomain(), scope.extended(x, t.domain())));
      }
      default: {
        Coll k = coll_of(t);
        if (coin(0.5)) return mk_empty(k, t.elem());
        return mk_single(k, leaf(t.elem(), scope));
      }
    }
  }

  // A projection x.l from a record variable in scope with a field of type t.
  std::optional<Term> projection(const Type& t, const TypeEnv& scope) {
    std::vector<std::pair<std::string, std::string>> cands;
    for (const auto& [n, ty] : vars(scope, [](const Type& v) { return v.is_record(); }))
      for (std::size_t i = 0; i < ty.field_count(); ++i)
        if (ty.field_type(i) == t) cands.emplace_back(n, ty.label(i));
    if (cands.empty()) return std::nullopt;
    const auto& [n, l] = cands[pick(static_cast<int>(cands.size()))];
    return Term::project(Term::var(n), l);
  }

  std::optional<Term> table(const Type& t) {
    std::vector<std::string> names;
    for (const auto& [n, ty] : tables_.bindings())
      if (ty == t) names.push_back(n);
    if (names.empty()) return std::nullopt;
    return Term::var(names[pick(static_cast<int>(names.size()))]);
  }

  Term term(const Type& t, const TypeEnv& scope, int budget) {
    if (budget <= 1) return leaf(t, scope);
    if (coin(bias_))
      if (auto r = redex(t, scope, budget)) return *r;
    if (coin(0.15))
      if (auto e = elim(t, scope, budget)) return *e;
    int b = budget - 1;
    switch (t.kind()) {
      case TypeKind::kAtomic:
        return atomic(t, scope, b);
      case TypeKind::kRecord: {
        std::vector<std::string> labels;
        std::vector<Term> fields;
        int share = std::max(1, b / static_cast<int>(t.field_count()));
        for (std::size_t i = 0; i < t.field_count(); ++i) {
          labels.push_back(t.label(i));
          fields.push_back(term(t.field_type(i), scope, share));
        }
        return Term::record(std::move(labels), std::move(fields));
      }
      case TypeKind::kFunction: {
        std::string x = var_name();
        return Term::lambda(x, t.domain(), term(t.codomain(), scope.extended(x, t.domain()), b));
      }
      default:
        return collection(t, scope, b);
    }
  }

  Term atomic(const Type& t, const TypeEnv& scope, int b) {
    int half = std::max(1, b / 2);
    if (t == Type::integer()) {
      if (coin(0.4)) return Term::constant("plus", {term(t, scope, half), term(t, scope, half)});
      return leaf(t, scope);
    }
    if (t == Type::boolean()) {
      switch (pick(7)) {
        case 0:
          return Term::constant(coin(0.5) ? "eq" : "leq", {term(Type::integer(), scope, half),
                                                           term(Type::integer(), scope, half)});
        case 1:
          return Term::constant(coin(0.5) ? "and" : "or", {term(t, scope, half), term(t, scope, half)});
        case 2:
          return Term::constant("not", {term(t, scope, b)});
        case 3: {
          Type c = coll_type(random_coll(), elem_type(1));
          return emptiness(term(c, scope, b), c);
        }
        case 4:
          return Term::constant("eq", {term(Type::string(), scope, half), term(Type::string(), scope, half)});
        default:
          return leaf(t, scope);
      }
    }
    return leaf(t, scope);
  }

  Term comprehension(Coll k, const Type& t, const TypeEnv& scope, int b) {
    Type s = elem_type(1);
    std::string x = var_name();
    int half = std::max(1, b / 2);
    Term src;
    if (auto tb = table(coll_type(k, s)); tb && coin(0.6))
      src = *tb;
    else
      src = term(coll_type(k, s), scope, half);
    return mk_comp(k, term(t, scope.extended(x, s), half), x, src);
  }

  Term collection(const Type& t, const TypeEnv& scope, int b) {
    Coll k = coll_of(t);
    const Type& e = t.elem();
    int half = std::max(1, b / 2);
    for (;;) {
      switch (pick(9)) {
        case 0:
          return mk_single(k, term(e, scope, b));
        case 1:
          return mk_union(k, term(t, scope, half), term(t, scope, half));
        case 2:
        case 3:
          return comprehension(k, t, scope, b);
        case 4:
          return mk_where(k, term(Type::boolean(), scope, half), term(t, scope, half));
        case 5:
          if (auto tb = table(t)) return *tb;
          return leaf(t, scope);
        case 6:
          if (!dedup_promote()) break;
          if (delta_iota()) return Term::dedup(term(t, scope, b));
          if (k == Coll::kSet) return Term::dedup(term(Type::bag(e), scope, b));
          return Term::promote(term(Type::set(e), scope, b));
        case 7:
          if (!dedup_promote()) break;
          if (delta_iota()) return Term::promote(term(t, scope, b));
          if (k == Coll::kBag) return Term::promote(term(Type::set(e), scope, b));
          return Term::dedup(term(Type::bag(e), scope, b));
        default:
          return leaf(t, scope);
      }
    }
  }

  std::optional<Term> elim(const Type& t, const TypeEnv& scope, int budget) {
    int b = budget - 1;
    if (auto p = projection(t, scope); p && coin(0.5)) return *p;
    if (coin(0.5)) {
      Type d = coin(0.6) ? Type::integer() : small_record();
      int half = std::max(1, b / 2);
      return Term::apply(term(Type::function(d, t), scope, half), term(d, scope, half));
    }
    static const char* const kLabels[] = {"a", "b", "c"};
    int l = pick(3);
    std::vector<Type::Field> fields{{kLabels[l], t}, {kLabels[(l + 1) % 3], atom()}};
    return Term::project(term(Type::record(std::move(fields)), scope, b), kLabels[l]);
  }

  // One redex template per contraction rule that can produce type t.
  std::optional<Term> redex(const Type& t, const TypeEnv& scope, int budget) {
    int b = std::max(1, budget - 2);
    int half = std::max(1, b / 2);
    std::vector<std::function<Term()>> options;
    options.push_back([&] {
      std::string x = var_name();
      Type d = coin(0.6) ? Type::integer() : random_type(1);
      return Term::apply(Term::lambda(x, d, term(t, scope.extended(x, d), half)), term(d, scope, half));
    });
    options.push_back([&] {
      return Term::project(Term::record({"a", "b"}, {term(t, scope, half), term(Type::integer(), scope, 1)}), "a");
    });
    if (t == Type::integer())
      options.push_back([&] { return Term::constant("plus", {literal(t), literal(t)}); });
    if (t == Type::boolean()) {
      options.push_back([&] {
        return Term::constant(coin(0.5) ? "leq" : "eq", {literal(Type::integer()), literal(Type::integer())});
      });
      options.push_back([&] {
        // Emptiness of a non-relational collection.
        Type c = coll_type(random_coll(), coin(0.5) ? Type::integer() : Type::set(Type::integer()));
        return emptiness(term(c, scope, b), c);
      });
    }
    if (t.is_collection() && coin(0.85)) return collection_redex(t, scope, b);
    return options[pick(static_cast<int>(options.size()))]();
  }

  Term collection_redex(const Type& t, const TypeEnv& scope, int b) {
    int half = std::max(1, b / 2);
    int third = std::max(1, b / 3);
    std::vector<std::function<Term()>> options;
    Coll k = coll_of(t);
    const Type e = t.elem();
    auto src_type = [&] { return coll_type(k, elem_type(1)); };
    auto with_head = [&](Term src, const Type& s, int hb) {
      std::string x = var_name();
      return mk_comp(k, term(t, scope.extended(x, s.elem()), hb), x, std::move(src));
    };
    auto cond = [&] { return term(Type::boolean(), scope, third); };
    options.push_back([&] {
      Type s = src_type();
      return mk_comp(k, mk_empty(k, e), var_name(), term(s, scope, b));
    });
    options.push_back([&] {
      Type s = src_type();
      return with_head(mk_empty(k, s.elem()), s, b);
    });
    options.push_back([&] {
      Type s = src_type();
      return with_head(mk_single(k, term(s.elem(), scope, half)), s, half);
    });
    options.push_back([&] {
      Type s = src_type();
      std::string x = var_name();
      TypeEnv in = scope.extended(x, s.elem());
      return mk_comp(k, mk_union(k, term(t, in, third), term(t, in, third)), x, term(s, scope, third));
    });
    options.push_back([&] {
      Type s = src_type();
      return with_head(mk_union(k, term(s, scope, third), term(s, scope, third)), s, third);
    });
    options.push_back([&] {
      Type s = src_type();
      Type r = src_type();
      std::string y = var_name();
      Term inner = mk_comp(k, term(s, scope.extended(y, r.elem()), third), y, term(r, scope, third));
      return with_head(std::move(inner), s, third);
    });
    options.push_back([&] {
      Type s = src_type();
      return with_head(mk_where(k, cond(), term(s, scope, third)), s, third);
    });
    options.push_back([&] { return mk_where(k, Term::boolean(coin(0.5)), term(t, scope, b)); });
    options.push_back([&] { return mk_where(k, cond(), mk_empty(k, e)); });
    options.push_back([&] { return mk_where(k, cond(), mk_union(k, term(t, scope, third), term(t, scope, third))); });
    options.push_back([&] {
      Type s = src_type();
      return mk_where(k, cond(), with_head(term(s, scope, third), s, third));
    });
    options.push_back([&] { return mk_where(k, cond(), mk_where(k, cond(), term(t, scope, third))); });
    if (dedup_promote()) dedup_promote_redexes(k, t, scope, b, half, cond, options);
    return options[pick(static_cast<int>(options.size()))]();
  }

  void dedup_promote_redexes(Coll k, const Type& t, const TypeEnv& scope, int b, int half,
                             const std::function<Term()>& cond, std::vector<std::function<Term()>>& options) {
    const Type e = t.elem();
    // dedup over each shape it distributes over; the argument kind is a bag
    // except in the delta-iota calculus.
    if (k == Coll::kSet) {
      Coll a = delta_iota() ? Coll::kSet : Coll::kBag;
      Type at = coll_type(a, e);
      options.push_back([=, this, &scope] { return Term::dedup(mk_empty(a, e)); });
      options.push_back([=, this, &scope] { return Term::dedup(mk_single(a, term(e, scope, b))); });
      options.push_back([=, this, &scope] { return Term::dedup(mk_union(a, term(at, scope, half), term(at, scope, half))); });
      options.push_back([=, this, &scope] { return Term::dedup(Term::promote(term(Type::set(e), scope, b))); });
      options.push_back([=, this, &scope] {
        Type s = coll_type(a, elem_type(1));
        std::string x = var_name();
        return Term::dedup(mk_comp(a, term(coll_type(a, e), scope.extended(x, s.elem()), half), x,
                                   term(s, scope, half)));
      });
      options.push_back([=, this, &scope] { return Term::dedup(mk_where(a, cond(), term(at, scope, half))); });
    }
    if (k == Coll::kBag || delta_iota()) {
      options.push_back([=, this, &scope] { return Term::promote(mk_empty(Coll::kSet, e)); });
      options.push_back([=, this, &scope] { return Term::promote(mk_single(Coll::kSet, term(e, scope, b))); });
      options.push_back([=, this, &scope] { return Term::promote(mk_where(Coll::kSet, cond(), term(Type::set(e), scope, half))); });
    }
  }

  // Continuation over the delta-iota set constructs.
  Term cont(const Type& t, const TypeEnv& scope, int budget, bool aux, const std::string& prefix,
            TypeEnv& holes, int& next) {
    auto hole = [&] {
      std::string id = prefix + std::to_string(next++);
      holes.bind_hole(id, t);
      return Term::hole(id);
    };
    if (budget <= 1) return coin(0.8) ? hole() : leaf(t, scope);
    int b = budget - 1;
    int half = std::max(1, b / 2);
    switch (pick(10)) {
      case 0:
        return hole();
      case 1:
        return Term::set_union(cont(t, scope, half, aux, prefix, holes, next),
                               coin(0.5) ? cont(t, scope, half, aux, prefix, holes, next)
                                         : term(t, scope, half));
      case 2:
      case 3:
      case 4: {
        Type s = elem_type(1);
        std::string x = var_name();
        TypeEnv in = scope.extended(x, s);
        Term head = aux && coin(0.5) ? cont(t, in, half, aux, prefix, holes, next) : term(t, in, half);
        return Term::comp_set(head, x, cont(Type::set(s), scope, half, aux, prefix, holes, next));
      }
      case 5:
      case 6:
        return Term::where_set(term(Type::boolean(), scope, std::max(1, b / 3)),
                               cont(t, scope, b - b / 3, aux, prefix, holes, next));
      case 7:
        return Term::dedup(cont(t, scope, b, aux, prefix, holes, next));
      case 8:
        return Term::promote(cont(t, scope, b, aux, prefix, holes, next));
      default:
        return term(t, scope, b);
    }
  }

 private:
  std::mt19937_64 rng_;
  Fragment fragment_;
  TypeEnv tables_;
  double bias_;
};

TypeEnv tables_for(const GenConfig& cfg) {
  return cfg.table_env.bindings().empty() ? default_tables(cfg.fragment) : cfg.table_env;
}

template <typename Draw>
TypedTerm draw_typed(const GenConfig& cfg, Draw draw) {
  Gen g(cfg.seed, cfg.fragment, tables_for(cfg), cfg.redex_bias);
  Calculus calc = calculus_of(cfg.fragment);
  const int max = static_cast<int>(cfg.max_size);
  for (int attempt = 0; attempt < 200; ++attempt) {
    int budget = g.between(std::max(1, max / 2), max * 2);
    Type target = draw(g);
    Term t = g.term(target, g.tables(), budget);
    if (term_size(t) > cfg.max_size) continue;
    try {
      return check(g.tables(), t, target, calc);
    } catch (const Error& e) {
      throw generation_failed("generated ill-typed term (" + e.diagnostic() + "): " + print_term(t));
    }
  }
  throw generation_failed("no term within size " + std::to_string(cfg.max_size));
}

}  // namespace

Calculus calculus_of(Fragment fragment) {
  return fragment == Fragment::kDeltaIota ? Calculus::kDeltaIota : Calculus::kHeterogeneous;
}

TypeEnv default_tables(Fragment fragment) {
  Type row = Type::record({{"id", Type::integer()}, {"v", Type::integer()}});
  TypeEnv env;
  env.bind("t", Type::set(row));
  env.bind("u", Type::set(Type::record({{"id", Type::integer()}, {"name", Type::string()}})));
  env.bind("s", fragment == Fragment::kHeterogeneous ? Type::bag(row) : Type::set(row));
  return env;
}

TypedTerm gen_well_typed(const GenConfig& cfg) {
  return draw_typed(cfg, [&](Gen& g) {
    if (cfg.type_target) return *cfg.type_target;
    return g.coin(0.6) ? coll_type(g.random_coll(), g.elem_type(1)) : g.random_type(2);
  });
}

TypedTerm gen_relation_query(const GenConfig& cfg) {
  if (cfg.type_target && !is_relation_type(*cfg.type_target))
    throw generation_failed("target " + cfg.type_target->to_string() + " is not a relation type");
  return draw_typed(cfg, [&](Gen& g) { return cfg.type_target ? *cfg.type_target : g.relation_type(); });
}

Database gen_database(const TypeEnv& tables, std::uint64_t seed, std::size_t max_rows) {
  std::mt19937_64 rng(seed);
  auto below = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  std::function<Value(const Type&)> value = [&](const Type& t) -> Value {
    if (t == Type::boolean()) return Value::boolean(below(2) == 1);
    if (t == Type::string()) return Value::string(below(2) ? "a" : "b");
    if (t.is_atomic()) return Value::integer(below(4));
    if (t.is_record()) {
      std::vector<Value::Field> fields;
      for (std::size_t i = 0; i < t.field_count(); ++i) fields.emplace_back(t.label(i), value(t.field_type(i)));
      return Value::record(std::move(fields));
    }
    throw Error("BadDatabase", "table cells must be first-order records: " + t.to_string());
  };
  Database db;
  for (const auto& [name, type] : tables.bindings()) {
    std::vector<Value> rows;
    int n = below(static_cast<int>(max_rows) + 1);
    for (int i = 0; i < n; ++i) rows.push_back(value(type.elem()));
    db.add(name, type, std::move(rows));
  }
  return db;
}

GeneratedContext gen_continuation(const ContextConfig& cfg) {
  Gen g(cfg.seed, Fragment::kDeltaIota, default_tables(Fragment::kDeltaIota), 0.2);
  const int max = static_cast<int>(cfg.max_size);
  for (int attempt = 0; attempt < 200; ++attempt) {
    TypeEnv env = g.tables();
    int next = 1;
    Type t = Type::set(g.elem_type(1));
    Term q = g.cont(t, env, g.between(std::max(2, max / 3), std::max(2, max - 2)), cfg.aux, cfg.hole_prefix,
                    env, next);
    if (q.is_pure() || term_size(q) > cfg.max_size) continue;
    if (!(cfg.aux ? is_aux_continuation(q) : is_continuation(q)))
      throw generation_failed("generated context is not a continuation: " + print_term(q));
    try {
      check(env, q, t, Calculus::kDeltaIota);
    } catch (const Error& e) {
      throw generation_failed("generated ill-typed context (" + e.diagnostic() + "): " + print_term(q));
    }
    return {q, env, t};
  }
  throw generation_failed("no continuation within size " + std::to_string(cfg.max_size));
}

Frame gen_frame(const GeneratedContext& ctx, const std::string& p, std::uint64_t seed,
                const std::string& hole_prefix) {
  const Type* t = ctx.env.lookup_hole(p);
  if (t == nullptr) throw Error("PreconditionViolated", "unknown hole [" + p + "]");
  Path pos;
  for (const auto& [id, hp] : hole_positions(ctx.term))
    if (id == p) pos = hp;
  TypeEnv scope = env_at(ctx.env, ctx.term, pos, Calculus::kDeltaIota);
  Gen g(seed, Fragment::kDeltaIota, default_tables(Fragment::kDeltaIota), 0.2);
  TypeEnv holes = scope;
  int next = 1;
  switch (g.pick(5)) {
    case 0: {
      std::string x = g.var_name();
      return Frame::comp_src(g.cont(*t, scope.extended(x, t->elem()), g.between(1, 6), true, hole_prefix, holes, next), x);
    }
    case 1: {
      Type s = Type::set(g.elem_type(1));
      return Frame::comp_head(g.var_name(), g.cont(s, scope, g.between(1, 6), true, hole_prefix, holes, next));
    }
    case 2:
      return Frame::where(g.term(Type::boolean(), scope, g.between(1, 4)));
    case 3:
      return Frame::dedup();
    default:
      return Frame::promote();
  }
}

Instantiation gen_instantiation(const GeneratedContext& ctx, std::uint64_t seed, bool capture,
                                std::size_t max_size) {
  Gen g(seed, Fragment::kDeltaIota, default_tables(Fragment::kDeltaIota), 0.4);
  auto holes = hole_positions(ctx.term);
  int forced = g.pick(static_cast<int>(holes.size()));
  Instantiation eta;
  for (int i = 0; i < static_cast<int>(holes.size()); ++i) {
    if (i != forced && !g.coin(0.7)) continue;
    const auto& [id, pos] = holes[i];
    const Type& type = *ctx.env.lookup_hole(id);
    TypeEnv scope = capture ? env_at(ctx.env, ctx.term, pos, Calculus::kDeltaIota) : g.tables();
    Term m;
    for (int attempt = 0; attempt < 50; ++attempt) {
      m = g.term(type, scope, g.between(1, static_cast<int>(max_size)));
      if (term_size(m) <= max_size) break;
    }
    eta[id] = m;
  }
  return eta;
}

}  // namespace nrc
