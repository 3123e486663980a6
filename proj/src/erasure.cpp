#include "nrc/erasure.hpp"

namespace nrc {

Type erase_type(const Type& t) {
  if (t.is_function()) return Type::function(erase_type(t.domain()), erase_type(t.codomain()));
  if (t.is_collection()) return Type::set(erase_type(t.elem()));
  if (t.is_record()) {
    std::vector<Type::Field> fields;
    for (size_t i = 0; i < t.field_count(); ++i)
      fields.emplace_back(t.label(i), erase_type(t.field_type(i)));
    return Type::record(std::move(fields));
  }
  return t;
}

Term erase_term(const Term& m) {
  std::vector<Term> kids;
  kids.reserve(m.arity());
  for (const auto& k : m.kids()) kids.push_back(erase_term(k));
  std::optional<Type> annot;
  if (m.annot()) annot = erase_type(*m.annot());
  switch (m.kind()) {
    case TermKind::kEmptyBag:
      return Term::empty_set(annot, m.span());
    case TermKind::kSingletonBag:
      return Term::singleton_set(kids[0], m.span());
    case TermKind::kDisjUnion:
      return Term::set_union(kids[0], kids[1], m.span());
    case TermKind::kCompBag:
      return Term::comp_set(kids[0], m.name(), kids[1], m.span());
    case TermKind::kWhereBag:
      return Term::where_set(kids[0], kids[1], m.span());
    default:
      return m.with_kids(std::move(kids)).with_annot(annot);
  }
}

TypeEnv erase_env(const TypeEnv& g) {
  TypeEnv out;
  for (const auto& [name, type] : g.bindings()) out.bind(name, erase_type(type));
  for (const auto& [id, type] : g.hole_types()) out.bind_hole(id, erase_type(type));
  return out;
}

}  // namespace nrc
