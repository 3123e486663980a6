#include "nrc/typing.hpp"

#include <functional>

#include "nrc/diagnostics.hpp"
#include "nrc/signature.hpp"

namespace nrc {

TypeEnv TypeEnv::extended(const std::string& name, const Type& type) const {
  TypeEnv out = *this;
  out.vars_.emplace_back(name, type);
  return out;
}

void TypeEnv::bind(const std::string& name, const Type& type) { vars_.emplace_back(name, type); }

const Type* TypeEnv::lookup(const std::string& name) const {
  for (auto it = vars_.rbegin(); it != vars_.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

void TypeEnv::bind_hole(const std::string& id, const Type& type) { holes_.insert_or_assign(id, type); }

const Type* TypeEnv::lookup_hole(const std::string& id) const {
  auto it = holes_.find(id);
  return it == holes_.end() ? nullptr : &it->second;
}

namespace {

bool is_bag_kind(TermKind k) {
  return k == TermKind::kEmptyBag || k == TermKind::kSingletonBag ||
         k == TermKind::kDisjUnion || k == TermKind::kCompBag || k == TermKind::kWhereBag;
}

class Checker {
 public:
  explicit Checker(Calculus calculus) : calc_(calculus) {}

  std::pair<Term, Type> run(const TypeEnv& env, const Term& t, const std::optional<Type>& hint) {
    if (calc_ == Calculus::kDeltaIota && is_bag_kind(t.kind()))
      throw Error("KindMismatch",
                  std::string(kind_name(t.kind())) + " is a bag construct, absent in NRC-delta-iota",
                  t.span());
    switch (t.kind()) {
      case TermKind::kVar: {
        const Type* ty = env.lookup(t.name());
        if (ty == nullptr) throw Error("UnboundVariable", "unbound variable " + t.name(), t.span());
        return {t, *ty};
      }
      case TermKind::kHole: {
        const Type* ty = env.lookup_hole(t.name());
        if (ty == nullptr)
          throw Error("UnboundVariable", "hole [" + t.name() + "] has no type", t.span());
        return {t, *ty};
      }
      case TermKind::kConst: {
        std::vector<Term> kids;
        std::vector<Type> types;
        const auto& sigs = signature::overloads(t.name());
        for (size_t k = 0; k < t.arity(); ++k) {
          std::optional<Type> arg_hint;
          if (sigs.size() == 1 && k < sigs[0].args.size()) arg_hint = sigs[0].args[k];
          auto [kid, ty] = run(env, t.kid(k), arg_hint);
          kids.push_back(kid);
          types.push_back(ty);
        }
        Type result = signature::result_type(t.name(), types, t.span());
        return {t.with_kids(std::move(kids)), result};
      }
      case TermKind::kRecord: {
        std::vector<Term> kids;
        std::vector<Type::Field> fields;
        for (size_t k = 0; k < t.arity(); ++k) {
          std::optional<Type> field_hint;
          if (hint && hint->is_record())
            if (const Type* f = hint->field(t.labels()[k])) field_hint = *f;
          auto [kid, ty] = run(env, t.kid(k), field_hint);
          kids.push_back(kid);
          fields.emplace_back(t.labels()[k], ty);
        }
        return {t.with_kids(std::move(kids)), Type::record(std::move(fields))};
      }
      case TermKind::kProject: {
        auto [kid, ty] = run(env, t.kid(0), std::nullopt);
        if (!ty.is_record())
          throw Error("FieldMissing",
                      "projection ." + t.name() + " from non-record type " + ty.to_string(),
                      t.span());
        const Type* f = ty.field(t.name());
        if (f == nullptr)
          throw Error("FieldMissing",
                      "record type " + ty.to_string() + " has no field " + t.name(), t.span());
        return {t.with_kids({kid}), *f};
      }
      case TermKind::kLambda: {
        std::optional<Type> body_hint;
        if (hint && hint->is_function()) body_hint = hint->codomain();
        auto [body, ty] = run(env.extended(t.name(), *t.annot()), t.kid(0), body_hint);
        return {t.with_kids({body}), Type::function(*t.annot(), ty)};
      }
      case TermKind::kApply: {
        auto [fun, fty] = run(env, t.kid(0), std::nullopt);
        if (!fty.is_function())
          throw Error("NotAFunction", "applying a term of type " + fty.to_string(), t.span());
        auto [arg, aty] = run(env, t.kid(1), fty.domain());
        if (aty != fty.domain())
          throw Error("ArgTypeMismatch",
                      "argument has type " + aty.to_string() + ", expected " +
                          fty.domain().to_string(),
                      t.kid(1).span());
        return {t.with_kids({fun, arg}), fty.codomain()};
      }
      case TermKind::kEmptySet:
      case TermKind::kEmptyBag:
        return empty(t, hint);
      case TermKind::kSingletonSet:
      case TermKind::kSingletonBag: {
        bool bag = t.kind() == TermKind::kSingletonBag;
        std::optional<Type> elem_hint;
        if (hint && (bag ? hint->is_bag() : hint->is_set())) elem_hint = hint->elem();
        auto [kid, ty] = run(env, t.kid(0), elem_hint);
        return {t.with_kids({kid}), bag ? Type::bag(ty) : Type::set(ty)};
      }
      case TermKind::kUnion:
      case TermKind::kDisjUnion: {
        bool bag = t.kind() == TermKind::kDisjUnion;
        std::optional<std::pair<Term, Type>> left;
        try {
          left = run(env, t.kid(0), hint);
        } catch (const Error& e) {
          if (e.code() != "MissingAnnotation") throw;
          auto right = run(env, t.kid(1), hint);
          left = run(env, t.kid(0), right.second);
          want_collection(left->second, bag, t.kid(0));
          same_type(right.second, left->second, t.kid(1));
          return {t.with_kids({left->first, right.first}), left->second};
        }
        want_collection(left->second, bag, t.kid(0));
        auto right = run(env, t.kid(1), left->second);
        same_type(right.second, left->second, t.kid(1));
        return {t.with_kids({left->first, right.first}), left->second};
      }
      case TermKind::kCompSet:
      case TermKind::kCompBag: {
        bool bag = t.kind() == TermKind::kCompBag;
        auto [src, sty] = run(env, t.kid(1), std::nullopt);
        want_collection(sty, bag, t.kid(1));
        auto [head, hty] = run(env.extended(t.name(), sty.elem()), t.kid(0), hint);
        want_collection(hty, bag, t.kid(0));
        return {t.with_kids({head, src}), hty};
      }
      case TermKind::kWhereSet:
      case TermKind::kWhereBag: {
        bool bag = t.kind() == TermKind::kWhereBag;
        auto [cond, cty] = run(env, t.kid(0), Type::boolean());
        same_type(cty, Type::boolean(), t.kid(0));
        auto [body, bty] = run(env, t.kid(1), hint);
        want_collection(bty, bag, t.kid(1));
        return {t.with_kids({cond, body}), bty};
      }
      case TermKind::kEmptyTest: {
        auto [kid, ty] = run(env, t.kid(0), std::nullopt);
        want_collection(ty, false, t.kid(0));
        return {t.with_kids({kid}), Type::boolean()};
      }
      case TermKind::kDedup:
      case TermKind::kPromote: {
        bool dedup = t.kind() == TermKind::kDedup;
        // Heterogeneous: dedup takes a bag, promote a set; delta-iota: sets.
        bool arg_bag = calc_ == Calculus::kHeterogeneous && dedup;
        bool res_bag = calc_ == Calculus::kHeterogeneous && !dedup;
        std::optional<Type> arg_hint;
        if (hint && hint->is_collection() && hint->is_bag() == res_bag)
          arg_hint = arg_bag ? Type::bag(hint->elem()) : Type::set(hint->elem());
        auto [kid, ty] = run(env, t.kid(0), arg_hint);
        want_collection(ty, arg_bag, t.kid(0));
        return {t.with_kids({kid}), res_bag ? Type::bag(ty.elem()) : Type::set(ty.elem())};
      }
    }
    throw Error("Internal", "unhandled term kind");
  }

 private:
  std::pair<Term, Type> empty(const Term& t, const std::optional<Type>& hint) {
    bool bag = t.kind() == TermKind::kEmptyBag;
    if (t.annot()) {
      want_collection(*t.annot(), bag, t);
      return {t, *t.annot()};
    }
    if (hint && hint->is_collection() && hint->is_bag() == bag) return {t.with_annot(*hint), *hint};
    throw Error("MissingAnnotation",
                std::string("cannot infer the element type of ") + (bag ? "{||}" : "{}") +
                    "; write " + (bag ? "{||}:{|T|}" : "{}:{T}"),
                t.span());
  }

  void want_collection(const Type& ty, bool bag, const Term& at) const {
    if (!ty.is_collection())
      throw Error("NotACollection", "expected a collection, found " + ty.to_string(), at.span());
    if (ty.is_bag() != bag)
      throw Error("KindMismatch",
                  std::string("expected a ") + (bag ? "bag" : "set") + ", found " + ty.to_string(),
                  at.span());
  }

  void same_type(const Type& found, const Type& expected, const Term& at) const {
    if (found != expected)
      throw Error("TypeMismatch",
                  "expected " + expected.to_string() + ", found " + found.to_string(), at.span());
  }

  Calculus calc_;
};

}  // namespace

std::pair<Term, Type> elaborate(const TypeEnv& env, const Term& t,
                                const std::optional<Type>& expected, Calculus calculus) {
  return Checker(calculus).run(env, t, expected);
}

Type infer(const TypeEnv& env, const Term& t, Calculus calculus) {
  return elaborate(env, t, std::nullopt, calculus).second;
}

TypedTerm typed(const TypeEnv& env, const Term& t, Calculus calculus) {
  auto [term, ty] = elaborate(env, t, std::nullopt, calculus);
  return TypedTerm{term, env, ty, calculus};
}

TypedTerm check(const TypeEnv& env, const Term& t, const Type& expected, Calculus calculus) {
  auto [term, ty] = elaborate(env, t, expected, calculus);
  if (ty != expected)
    throw Error("TypeMismatch", "expected " + expected.to_string() + ", found " + ty.to_string(),
                t.span());
  return TypedTerm{term, env, ty, calculus};
}

TypeEnv env_at(const TypeEnv& env, const Term& t, const Path& path, Calculus calculus) {
  TypeEnv cur = env;
  const Term* node = &t;
  for (int i : path) {
    if (node->binds() && i == node->scoped_child()) {
      if (node->kind() == TermKind::kLambda) {
        cur.bind(node->name(), *node->annot());
      } else {
        Type src = infer(cur, node->kid(1), calculus);
        if (!src.is_collection())
          throw Error("NotACollection", "generator over " + src.to_string(), node->span());
        cur.bind(node->name(), src.elem());
      }
    }
    node = &node->kid(i);
  }
  return cur;
}

Type TypedTerm::type_at(const Path& path) const {
  return infer(env_at(env, term, path, calculus), subterm_at(term, path), calculus);
}

std::map<Path, Type> collection_types(const TypedTerm& t) {
  std::map<Path, Type> out;
  Path path;
  std::function<void(const Term&, const TypeEnv&)> go = [&](const Term& u, const TypeEnv& env) {
    Type ty = infer(env, u, t.calculus);
    if (ty.is_collection()) out.emplace(path, ty);
    for (size_t k = 0; k < u.arity(); ++k) {
      TypeEnv inner = env;
      if (u.binds() && static_cast<int>(k) == u.scoped_child()) {
        if (u.kind() == TermKind::kLambda)
          inner.bind(u.name(), *u.annot());
        else
          inner.bind(u.name(), infer(env, u.kid(1), t.calculus).elem());
      }
      path.push_back(static_cast<int>(k));
      go(u.kid(k), inner);
      path.pop_back();
    }
  };
  go(t.term, t.env);
  return out;
}

}  // namespace nrc
