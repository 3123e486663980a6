#include "nrc/types.hpp"

#include <algorithm>
#include <set>

#include "nrc/diagnostics.hpp"

namespace nrc {

Type Type::atomic(std::string name) {
  return Type(std::make_shared<TypeRep>(
      TypeRep{TypeKind::kAtomic, std::move(name), {}, {}}));
}

Type Type::boolean() {
  static const Type t = atomic("Bool");
  return t;
}

Type Type::integer() {
  static const Type t = atomic("Int");
  return t;
}

Type Type::string() {
  static const Type t = atomic("String");
  return t;
}

Type Type::function(Type domain, Type codomain) {
  return Type(std::make_shared<TypeRep>(TypeRep{
      TypeKind::kFunction, "", {}, {std::move(domain), std::move(codomain)}}));
}

Type Type::record(std::vector<Field> fields) {
  TypeRep rep{TypeKind::kRecord, "", {}, {}};
  std::set<std::string> seen;
  for (auto& [label, ty] : fields) {
    if (!seen.insert(label).second)
      throw Error("DuplicateLabel", "label '" + label + "' repeated in record type");
    rep.labels.push_back(label);
    rep.children.push_back(std::move(ty));
  }
  return Type(std::make_shared<TypeRep>(std::move(rep)));
}

Type Type::set(Type elem) {
  return Type(std::make_shared<TypeRep>(
      TypeRep{TypeKind::kSet, "", {}, {std::move(elem)}}));
}

Type Type::bag(Type elem) {
  return Type(std::make_shared<TypeRep>(
      TypeRep{TypeKind::kBag, "", {}, {std::move(elem)}}));
}

TypeKind Type::kind() const { return rep_->kind; }
const std::string& Type::atom_name() const { return rep_->atom; }
const Type& Type::domain() const { return rep_->children.at(0); }
const Type& Type::codomain() const { return rep_->children.at(1); }
const Type& Type::elem() const { return rep_->children.at(0); }
size_t Type::field_count() const { return rep_->labels.size(); }
const std::string& Type::label(size_t i) const { return rep_->labels.at(i); }
const Type& Type::field_type(size_t i) const { return rep_->children.at(i); }

const Type* Type::field(std::string_view label) const {
  for (size_t i = 0; i < rep_->labels.size(); ++i)
    if (rep_->labels[i] == label) return &rep_->children[i];
  return nullptr;
}

bool operator==(const Type& a, const Type& b) {
  if (a.rep_ == b.rep_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeKind::kAtomic:
      return a.atom_name() == b.atom_name();
    case TypeKind::kRecord: {
      if (a.field_count() != b.field_count()) return false;
      for (size_t i = 0; i < a.field_count(); ++i) {
        const Type* other = b.field(a.label(i));
        if (other == nullptr || !(a.field_type(i) == *other)) return false;
      }
      return true;
    }
    default:
      return a.rep_->children == b.rep_->children;
  }
}

std::string Type::to_string() const {
  switch (kind()) {
    case TypeKind::kAtomic:
      return atom_name();
    case TypeKind::kFunction:
      return "(" + domain().to_string() + " -> " + codomain().to_string() + ")";
    case TypeKind::kRecord: {
      std::string out = "<";
      for (size_t i = 0; i < field_count(); ++i) {
        if (i > 0) out += ", ";
        out += label(i) + ":" + field_type(i).to_string();
      }
      return out + ">";
    }
    case TypeKind::kSet:
      return "{" + elem().to_string() + "}";
    case TypeKind::kBag:
      return "{|" + elem().to_string() + "|}";
  }
  return "?";
}

bool is_relation_type(const Type& ty) {
  if (!ty.is_collection() || !ty.elem().is_record()) return false;
  const Type& row = ty.elem();
  for (size_t i = 0; i < row.field_count(); ++i)
    if (!row.field_type(i).is_atomic()) return false;
  return true;
}

bool is_first_order(const Type& ty) {
  switch (ty.kind()) {
    case TypeKind::kAtomic:
      return true;
    case TypeKind::kFunction:
      return false;
    case TypeKind::kRecord:
      for (size_t i = 0; i < ty.field_count(); ++i)
        if (!is_first_order(ty.field_type(i))) return false;
      return true;
    default:
      return is_first_order(ty.elem());
  }
}

bool is_flat_collection(const Type& ty) {
  return is_relation_type(ty) || (ty.is_collection() && ty.elem().is_atomic());
}

}  // namespace nrc
