#include "nrc/rewrite.hpp"

#include <deque>
#include <map>
#include <random>
#include <unordered_map>

#include "nrc/diagnostics.hpp"
#include "nrc/signature.hpp"
#include "nrc/syntax.hpp"

namespace nrc {

namespace {

struct RuleInfo {
  RuleTag tag;
  const char* name;
};

const std::vector<RuleInfo>& rule_table() {
  static const std::vector<RuleInfo> table = {
      {RuleTag::kBeta, "beta"},
      {RuleTag::kProj, "proj"},
      {RuleTag::kDeltaConst, "delta-const"},
      {RuleTag::kCompEmptyHead, "comp-empty-head"},
      {RuleTag::kCompEmptySrc, "comp-empty-src"},
      {RuleTag::kCompSingleton, "comp-singleton"},
      {RuleTag::kCompUnionHead, "comp-union-head"},
      {RuleTag::kCompUnionSrc, "comp-union-src"},
      {RuleTag::kCompAssoc, "comp-assoc"},
      {RuleTag::kCompWhereSrc, "comp-where-src"},
      {RuleTag::kWhereTrue, "where-true"},
      {RuleTag::kWhereFalse, "where-false"},
      {RuleTag::kWhereEmpty, "where-empty"},
      {RuleTag::kWhereUnion, "where-union"},
      {RuleTag::kWhereComp, "where-comp"},
      {RuleTag::kWhereWhere, "where-where"},
      {RuleTag::kEmptyFlatten, "empty-flatten"},
      {RuleTag::kBagCompEmptyHead, "bagcomp-empty-head"},
      {RuleTag::kBagCompEmptySrc, "bagcomp-empty-src"},
      {RuleTag::kBagCompSingleton, "bagcomp-singleton"},
      {RuleTag::kBagCompUnionHead, "bagcomp-union-head"},
      {RuleTag::kBagCompUnionSrc, "bagcomp-union-src"},
      {RuleTag::kBagCompAssoc, "bagcomp-assoc"},
      {RuleTag::kBagCompWhereSrc, "bagcomp-where-src"},
      {RuleTag::kBagWhereTrue, "bagwhere-true"},
      {RuleTag::kBagWhereFalse, "bagwhere-false"},
      {RuleTag::kBagWhereEmpty, "bagwhere-empty"},
      {RuleTag::kBagWhereUnion, "bagwhere-union"},
      {RuleTag::kBagWhereComp, "bagwhere-comp"},
      {RuleTag::kBagWhereWhere, "bagwhere-where"},
      {RuleTag::kDedupEmpty, "dedup-empty"},
      {RuleTag::kDedupSingleton, "dedup-singleton"},
      {RuleTag::kDedupUnion, "dedup-union"},
      {RuleTag::kDedupPromote, "dedup-promote"},
      {RuleTag::kDedupComp, "dedup-comp"},
      {RuleTag::kDedupWhere, "dedup-where"},
      {RuleTag::kPromoteEmpty, "promote-empty"},
      {RuleTag::kPromoteSingleton, "promote-singleton"},
      {RuleTag::kPromoteWhere, "promote-where"},
  };
  return table;
}

// Set and bag constructors, so one matcher serves both collection kinds.
struct Kinds {
  TermKind empty, single, uni, comp, where;
  RuleTag empty_head, empty_src, singleton, union_head, union_src, assoc, where_src;
  RuleTag w_true, w_false, w_empty, w_union, w_comp, w_where;
};

const Kinds kSetKinds{TermKind::kEmptySet,        TermKind::kSingletonSet,    TermKind::kUnion,
                      TermKind::kCompSet,         TermKind::kWhereSet,        RuleTag::kCompEmptyHead,
                      RuleTag::kCompEmptySrc,     RuleTag::kCompSingleton,    RuleTag::kCompUnionHead,
                      RuleTag::kCompUnionSrc,     RuleTag::kCompAssoc,        RuleTag::kCompWhereSrc,
                      RuleTag::kWhereTrue,        RuleTag::kWhereFalse,       RuleTag::kWhereEmpty,
                      RuleTag::kWhereUnion,       RuleTag::kWhereComp,        RuleTag::kWhereWhere};
const Kinds kBagKinds{TermKind::kEmptyBag,        TermKind::kSingletonBag,    TermKind::kDisjUnion,
                      TermKind::kCompBag,         TermKind::kWhereBag,        RuleTag::kBagCompEmptyHead,
                      RuleTag::kBagCompEmptySrc,  RuleTag::kBagCompSingleton, RuleTag::kBagCompUnionHead,
                      RuleTag::kBagCompUnionSrc,  RuleTag::kBagCompAssoc,     RuleTag::kBagCompWhereSrc,
                      RuleTag::kBagWhereTrue,     RuleTag::kBagWhereFalse,    RuleTag::kBagWhereEmpty,
                      RuleTag::kBagWhereUnion,    RuleTag::kBagWhereComp,     RuleTag::kBagWhereWhere};

Term make_empty(const Kinds& k, std::optional<Type> annot) {
  return k.empty == TermKind::kEmptySet ? Term::empty_set(std::move(annot))
                                        : Term::empty_bag(std::move(annot));
}
Term make_union(const Kinds& k, Term a, Term b) {
  return k.uni == TermKind::kUnion ? Term::set_union(std::move(a), std::move(b))
                                   : Term::bag_union(std::move(a), std::move(b));
}
Term make_comp(const Kinds& k, Term head, const std::string& x, Term src) {
  return k.comp == TermKind::kCompSet ? Term::comp_set(std::move(head), x, std::move(src))
                                      : Term::comp_bag(std::move(head), x, std::move(src));
}
Term make_where(const Kinds& k, Term cond, Term body) {
  return k.where == TermKind::kWhereSet ? Term::where_set(std::move(cond), std::move(body))
                                        : Term::where_bag(std::move(cond), std::move(body));
}

std::set<std::string> names_of(std::initializer_list<const Term*> terms) {
  std::set<std::string> out;
  for (const Term* t : terms) out.insert(t->free_vars().begin(), t->free_vars().end());
  return out;
}

class Matcher {
 public:
  Matcher(const EnvThunk& env, Calculus calc, bool first_only)
      : env_(env), calc_(calc), first_only_(first_only) {}

  std::vector<Contraction> run(const Term& t) {
    switch (t.kind()) {
      case TermKind::kApply:
        if (t.kid(0).kind() == TermKind::kLambda)
          add(RuleTag::kBeta, subst(t.kid(0).kid(0), t.kid(0).name(), t.kid(1)));
        break;
      case TermKind::kProject:
        if (t.kid(0).kind() == TermKind::kRecord) {
          const Term& rec = t.kid(0);
          for (size_t k = 0; k < rec.arity(); ++k)
            if (rec.labels()[k] == t.name()) {
              add(RuleTag::kProj, rec.kid(k));
              break;
            }
        }
        break;
      case TermKind::kConst:
        delta(t);
        break;
      case TermKind::kCompSet:
        comp(t, kSetKinds);
        break;
      case TermKind::kCompBag:
        comp(t, kBagKinds);
        break;
      case TermKind::kWhereSet:
        where(t, kSetKinds);
        break;
      case TermKind::kWhereBag:
        where(t, kBagKinds);
        break;
      case TermKind::kEmptyTest:
        empty_flatten(t);
        break;
      case TermKind::kDedup:
        dedup(t);
        break;
      case TermKind::kPromote:
        promote(t);
        break;
      default:
        break;
    }
    return std::move(out_);
  }

 private:
  bool done() const { return first_only_ && !out_.empty(); }

  void add(RuleTag rule, Term result) {
    if (!done()) out_.push_back({rule, std::move(result)});
  }

  const TypeEnv& env() {
    if (!env_cache_) env_cache_ = env_();
    return *env_cache_;
  }

  // Type of a collection term, for annotating a freshly created empty.
  std::optional<Type> type_of(const Term& t, const TypeEnv& env) {
    if ((t.kind() == TermKind::kEmptySet || t.kind() == TermKind::kEmptyBag) && t.annot())
      return t.annot();
    try {
      return infer(env, t, calc_);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  void delta(const Term& t) {
    if (t.arity() == 0 || !signature::is_primitive(t.name())) return;
    for (const auto& a : t.kids())
      if (!a.is_literal()) return;
    try {
      add(RuleTag::kDeltaConst, signature::apply(t.name(), t.kids()));
    } catch (const Error&) {
      // Ill-typed literal arguments: no contraction.
    }
  }

  void comp(const Term& t, const Kinds& k) {
    const Term& head = t.kid(0);
    const Term& src = t.kid(1);
    const std::string& x = t.name();
    if (head.kind() == k.empty) add(k.empty_head, make_empty(k, head.annot()));
    if (done()) return;
    if (src.kind() == k.empty) {
      std::optional<Type> ty;
      try {
        std::optional<Type> elem;
        if (src.annot() && src.annot()->is_collection()) elem = src.annot()->elem();
        if (!elem) elem = infer(env(), src, calc_).elem();
        ty = type_of(head, env().extended(x, *elem));
      } catch (const Error&) {
      }
      add(k.empty_src, make_empty(k, ty));
    }
    if (done()) return;
    if (src.kind() == k.single) add(k.singleton, subst(head, x, src.kid(0)));
    if (done()) return;
    if (head.kind() == k.uni)
      add(k.union_head,
          make_union(k, make_comp(k, head.kid(0), x, src), make_comp(k, head.kid(1), x, src)));
    if (done()) return;
    if (src.kind() == k.uni)
      add(k.union_src,
          make_union(k, make_comp(k, head, x, src.kid(0)), make_comp(k, head, x, src.kid(1))));
    if (done()) return;
    if (src.kind() == k.comp) {
      // {M | y <- {R | x <- N}}  ~>  {{M | y <- R} | x <- N}, x fresh for M.
      const Term& r = src.kid(0);
      const Term& n = src.kid(1);
      std::string inner = src.name();
      Term r2 = r;
      if (head.has_free(inner)) {
        std::set<std::string> avoid = names_of({&head, &r});
        avoid.insert(x);
        std::string fresh = fresh_name(inner, avoid);
        r2 = subst(r, inner, Term::var(fresh));
        inner = fresh;
      }
      add(k.assoc, make_comp(k, make_comp(k, head, x, r2), inner, n));
    }
    if (done()) return;
    if (src.kind() == k.where)
      add(k.where_src, make_where(k, src.kid(0), make_comp(k, head, x, src.kid(1))));
  }

  void where(const Term& t, const Kinds& k) {
    const Term& cond = t.kid(0);
    const Term& body = t.kid(1);
    if (cond.is_true()) add(k.w_true, body);
    if (done()) return;
    if (cond.is_false()) add(k.w_false, make_empty(k, type_of(body, env())));
    if (done()) return;
    if (body.kind() == k.empty) add(k.w_empty, make_empty(k, body.annot()));
    if (done()) return;
    if (body.kind() == k.uni)
      add(k.w_union,
          make_union(k, make_where(k, cond, body.kid(0)), make_where(k, cond, body.kid(1))));
    if (done()) return;
    if (body.kind() == k.comp) {
      // where M do {N | x <- R}  ~>  {where M do N | x <- R}, x fresh for M.
      std::string x = body.name();
      Term n = body.kid(0);
      if (cond.has_free(x)) {
        std::string fresh = fresh_name(x, names_of({&cond, &n}));
        n = subst(n, x, Term::var(fresh));
        x = fresh;
      }
      add(k.w_comp, make_comp(k, make_where(k, cond, n), x, body.kid(1)));
    }
    if (done()) return;
    if (body.kind() == k.where)
      add(k.w_where, make_where(k, Term::constant("and", {cond, body.kid(0)}), body.kid(1)));
  }

  void empty_flatten(const Term& t) {
    const Term& m = t.kid(0);
    std::optional<Type> ty = type_of(m, env());
    if (!ty || is_relation_type(*ty) || !ty->is_collection()) return;
    std::set<std::string> avoid(m.free_vars().begin(), m.free_vars().end());
    std::string z = fresh_name("z", avoid);
    Term unit = Term::singleton_set(Term::record({}, {}));
    add(RuleTag::kEmptyFlatten, Term::empty_test(Term::comp_set(unit, z, m)));
  }

  // Source-side constructors of dedup's argument and target-side results.
  void dedup(const Term& t) {
    const Term& m = t.kid(0);
    bool het = calc_ == Calculus::kHeterogeneous;
    const Kinds& src = het ? kBagKinds : kSetKinds;
    if (m.kind() == src.empty) {
      std::optional<Type> ty;
      if (m.annot() && m.annot()->is_collection()) ty = Type::set(m.annot()->elem());
      add(RuleTag::kDedupEmpty, Term::empty_set(ty));
    } else if (m.kind() == src.single) {
      add(RuleTag::kDedupSingleton, Term::singleton_set(m.kid(0)));
    } else if (m.kind() == src.uni) {
      add(RuleTag::kDedupUnion, Term::set_union(Term::dedup(m.kid(0)), Term::dedup(m.kid(1))));
    } else if (m.kind() == TermKind::kPromote) {
      add(RuleTag::kDedupPromote, m.kid(0));
    } else if (m.kind() == src.comp) {
      add(RuleTag::kDedupComp,
          Term::comp_set(Term::dedup(m.kid(0)), m.name(), Term::dedup(m.kid(1))));
    } else if (m.kind() == src.where) {
      add(RuleTag::kDedupWhere, Term::where_set(m.kid(0), Term::dedup(m.kid(1))));
    }
  }

  // Promotion does not distribute over union or comprehension.
  void promote(const Term& t) {
    const Term& m = t.kid(0);
    bool het = calc_ == Calculus::kHeterogeneous;
    const Kinds& dst = het ? kBagKinds : kSetKinds;
    if (m.kind() == TermKind::kEmptySet) {
      std::optional<Type> ty;
      if (m.annot() && m.annot()->is_collection())
        ty = het ? Type::bag(m.annot()->elem()) : *m.annot();
      add(RuleTag::kPromoteEmpty, make_empty(dst, ty));
    } else if (m.kind() == TermKind::kSingletonSet) {
      add(RuleTag::kPromoteSingleton,
          het ? Term::singleton_bag(m.kid(0)) : Term::singleton_set(m.kid(0)));
    } else if (m.kind() == TermKind::kWhereSet) {
      add(RuleTag::kPromoteWhere, make_where(dst, m.kid(0), Term::promote(m.kid(1))));
    }
  }

  const EnvThunk& env_;
  Calculus calc_;
  bool first_only_;
  std::optional<TypeEnv> env_cache_;
  std::vector<Contraction> out_;
};

// Lazily materialized chain of binders above the current position.
struct Scope {
  const Scope* parent;
  const TypeEnv* base;
  const Term* binder;  // Lambda or comprehension whose scoped child we are in
  Calculus calc;
  mutable std::optional<TypeEnv> cache;

  const TypeEnv& env() const {
    if (!cache) {
      if (binder == nullptr) {
        cache = *base;
      } else {
        TypeEnv e = parent->env();
        if (binder->kind() == TermKind::kLambda) {
          e.bind(binder->name(), *binder->annot());
        } else {
          Type src = infer(e, binder->kid(1), calc);
          if (!src.is_collection())
            throw Error("NotACollection", "generator over " + src.to_string());
          e.bind(binder->name(), src.elem());
        }
        cache = std::move(e);
      }
    }
    return *cache;
  }
};

class Walker {
 public:
  Walker(const TypeEnv& env, const Term& root, Calculus calc, bool first_only)
      : base_(env), root_(root), calc_(calc), first_only_(first_only) {}

  std::vector<ReductStep> run() {
    Scope top{nullptr, &base_, nullptr, calc_, std::nullopt};
    Path path;
    visit(root_, path, top);
    return std::move(out_);
  }

 private:
  bool visit(const Term& u, Path& path, const Scope& scope) {
    EnvThunk thunk = [&scope]() { return scope.env(); };
    for (auto& c : Matcher(thunk, calc_, first_only_).run(u)) {
      out_.push_back({c.rule, path, root_, replace_at(root_, path, c.result)});
      if (first_only_) return true;
    }
    for (size_t k = 0; k < u.arity(); ++k) {
      path.push_back(static_cast<int>(k));
      bool stop;
      if (u.binds() && static_cast<int>(k) == u.scoped_child()) {
        Scope inner{&scope, &base_, &u, calc_, std::nullopt};
        stop = visit(u.kid(k), path, inner);
      } else {
        stop = visit(u.kid(k), path, scope);
      }
      path.pop_back();
      if (stop) return true;
    }
    return false;
  }

  const TypeEnv& base_;
  const Term& root_;
  Calculus calc_;
  bool first_only_;
  std::vector<ReductStep> out_;
};

}  // namespace

const std::vector<RuleTag>& all_rules() {
  static const std::vector<RuleTag> rules = [] {
    std::vector<RuleTag> out;
    for (const auto& r : rule_table()) out.push_back(r.tag);
    return out;
  }();
  return rules;
}

const char* rule_name(RuleTag rule) {
  for (const auto& r : rule_table())
    if (r.tag == rule) return r.name;
  return "?";
}

std::optional<RuleTag> rule_from_name(const std::string& name) {
  for (const auto& r : rule_table())
    if (name == r.name) return r.tag;
  return std::nullopt;
}

std::vector<Contraction> contract_root(const EnvThunk& env, const Term& t, Calculus calculus) {
  return Matcher(env, calculus, false).run(t);
}

std::vector<Contraction> contract_root(const TypedTerm& t) {
  const TypeEnv& env = t.env;
  return contract_root([&env]() { return env; }, t.term, t.calculus);
}

std::vector<ReductStep> step_all(const TypeEnv& env, const Term& t, Calculus calculus) {
  return Walker(env, t, calculus, false).run();
}

std::vector<ReductStep> step_all(const TypedTerm& t) { return step_all(t.env, t.term, t.calculus); }

std::optional<ReductStep> step_leftmost(const TypeEnv& env, const Term& t, Calculus calculus) {
  auto steps = Walker(env, t, calculus, true).run();
  if (steps.empty()) return std::nullopt;
  return steps.front();
}

std::optional<Term> replay(const TypeEnv& env, const Term& t, Calculus calculus, RuleTag rule,
                           const Path& position) {
  const Term& redex = subterm_at(t, position);
  EnvThunk thunk = [&]() { return env_at(env, t, position, calculus); };
  for (auto& c : contract_root(thunk, redex, calculus))
    if (c.rule == rule) return replace_at(t, position, c.result);
  return std::nullopt;
}

bool is_normal(const TypeEnv& env, const Term& t, Calculus calculus) {
  return !step_leftmost(env, t, calculus).has_value();
}

bool is_normal(const TypedTerm& t) { return is_normal(t.env, t.term, t.calculus); }

Strategy Strategy::parse(const std::string& text) {
  if (text == "lo" || text == "leftmost-outermost") return leftmost_outermost();
  if (text == "exhaustive") return exhaustive();
  if (text.rfind("random:", 0) == 0) {
    std::string digits = text.substr(7);
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos)
      return random(std::stoull(digits));
  }
  throw Error("BadStrategy", "unknown strategy '" + text + "' (lo, random:SEED, exhaustive)");
}

std::string Strategy::to_string() const {
  switch (kind) {
    case Kind::kLeftmostOutermost:
      return "lo";
    case Kind::kRandom:
      return "random:" + std::to_string(seed);
    case Kind::kExhaustive:
      return "exhaustive";
  }
  return "?";
}

namespace {

[[noreturn]] void out_of_fuel(size_t fuel) {
  throw Error("FuelExhausted", "no normal form within " + std::to_string(fuel) + " steps");
}

NormalizeResult normalize_exhaustive(const TypedTerm& t, size_t fuel, bool keep_trace) {
  struct Node {
    Term term;
    std::string parent;
    std::optional<ReductStep> via;
  };
  std::unordered_map<std::string, Node> seen;
  std::deque<std::string> frontier;
  std::string root_key = alpha_key(t.term);
  seen.emplace(root_key, Node{t.term, "", std::nullopt});
  frontier.push_back(root_key);
  std::vector<std::string> normal_keys;
  size_t explored = 0;
  while (!frontier.empty()) {
    std::string key = frontier.front();
    frontier.pop_front();
    if (++explored > fuel) out_of_fuel(fuel);
    Term cur = seen.at(key).term;
    auto steps = step_all(t.env, cur, t.calculus);
    if (steps.empty()) {
      normal_keys.push_back(key);
      continue;
    }
    for (auto& s : steps) {
      std::string k = alpha_key(s.after);
      if (seen.count(k)) continue;
      seen.emplace(k, Node{s.after, key, s});
      frontier.push_back(k);
    }
  }
  NormalizeResult result;
  const std::string& first = normal_keys.front();
  result.normal_form = seen.at(first).term;
  for (const auto& k : normal_keys) result.normal_forms.push_back(seen.at(k).term);
  std::vector<ReductStep> path;
  for (std::string k = first; seen.at(k).via; k = seen.at(k).parent)
    path.push_back(*seen.at(k).via);
  result.steps = path.size();
  if (keep_trace) result.trace.assign(path.rbegin(), path.rend());
  return result;
}

}  // namespace

NormalizeResult normalize(const TypedTerm& t, const Strategy& strategy, size_t fuel,
                          bool keep_trace) {
  if (strategy.kind == Strategy::Kind::kExhaustive)
    return normalize_exhaustive(t, fuel, keep_trace);
  NormalizeResult result;
  Term cur = t.term;
  std::mt19937_64 rng(strategy.seed);
  for (;;) {
    std::optional<ReductStep> step;
    if (strategy.kind == Strategy::Kind::kLeftmostOutermost) {
      step = step_leftmost(t.env, cur, t.calculus);
    } else {
      auto steps = step_all(t.env, cur, t.calculus);
      if (!steps.empty()) {
        std::uniform_int_distribution<size_t> pick(0, steps.size() - 1);
        step = std::move(steps[pick(rng)]);
      }
    }
    if (!step) break;
    if (result.steps >= fuel) out_of_fuel(fuel);
    ++result.steps;
    cur = step->after;
    if (keep_trace) result.trace.push_back(std::move(*step));
  }
  result.normal_form = cur;
  result.normal_forms = {cur};
  return result;
}

std::string trace_line(size_t index, const ReductStep& step) {
  return std::to_string(index) + " " + rule_name(step.rule) + " @ " +
         path_to_string(step.position) + " :: " + print_term(step.after);
}

}  // namespace nrc
