#include "nrc/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <iterator>
#include <sstream>

namespace nrc {

namespace {

std::vector<std::string> merge_sorted(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void erase_sorted(std::vector<std::string>& v, const std::string& x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

bool contains_sorted(const std::vector<std::string>& v, const std::string& x) {
  return std::binary_search(v.begin(), v.end(), x);
}

bool is_binder_kind(TermKind k) {
  return k == TermKind::kLambda || k == TermKind::kCompSet || k == TermKind::kCompBag;
}

}  // namespace

const char* kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::kVar: return "Var";
    case TermKind::kHole: return "Hole";
    case TermKind::kConst: return "Const";
    case TermKind::kRecord: return "Record";
    case TermKind::kProject: return "Project";
    case TermKind::kLambda: return "Lambda";
    case TermKind::kApply: return "Apply";
    case TermKind::kEmptySet: return "EmptySet";
    case TermKind::kSingletonSet: return "SingletonSet";
    case TermKind::kUnion: return "Union";
    case TermKind::kCompSet: return "CompSet";
    case TermKind::kWhereSet: return "WhereSet";
    case TermKind::kEmptyTest: return "EmptyTest";
    case TermKind::kEmptyBag: return "EmptyBag";
    case TermKind::kSingletonBag: return "SingletonBag";
    case TermKind::kDisjUnion: return "DisjUnion";
    case TermKind::kCompBag: return "CompBag";
    case TermKind::kWhereBag: return "WhereBag";
    case TermKind::kDedup: return "Dedup";
    case TermKind::kPromote: return "Promote";
  }
  return "?";
}

Term make_term(TermKind kind, std::string name, std::vector<std::string> labels,
               std::optional<Type> annot, std::vector<Term> kids, Span span) {
  auto node = std::make_shared<TermNode>();
  node->kind = kind;
  node->name = std::move(name);
  node->labels = std::move(labels);
  node->annot = std::move(annot);
  node->kids = std::move(kids);
  node->span = span;
  if (kind == TermKind::kVar) node->fv = {node->name};
  if (kind == TermKind::kHole) {
    node->holes = {node->name};
    node->hole_occurrences = 1;
  }
  int scoped = -1;
  if (kind == TermKind::kLambda || kind == TermKind::kCompSet ||
      kind == TermKind::kCompBag)
    scoped = 0;
  for (size_t i = 0; i < node->kids.size(); ++i) {
    const TermNode& kid = *node->kids[i].node_;
    node->size += kid.size;
    node->hole_occurrences += kid.hole_occurrences;
    node->holes = merge_sorted(node->holes, kid.holes);
    if (static_cast<int>(i) == scoped && contains_sorted(kid.fv, node->name)) {
      std::vector<std::string> fv = kid.fv;
      erase_sorted(fv, node->name);
      node->fv = merge_sorted(node->fv, fv);
    } else {
      node->fv = merge_sorted(node->fv, kid.fv);
    }
  }
  Term t;
  t.node_ = std::move(node);
  return t;
}

Term Term::var(std::string name, Span span) {
  return make_term(TermKind::kVar, std::move(name), {}, std::nullopt, {}, span);
}
Term Term::hole(std::string id, Span span) {
  return make_term(TermKind::kHole, std::move(id), {}, std::nullopt, {}, span);
}
Term Term::constant(std::string name, std::vector<Term> args, Span span) {
  return make_term(TermKind::kConst, std::move(name), {}, std::nullopt, std::move(args),
                   span);
}
Term Term::boolean(bool value) { return constant(value ? "true" : "false"); }
Term Term::integer(long long value) { return constant(std::to_string(value)); }
Term Term::string_lit(const std::string& value) { return constant("\"" + value + "\""); }
Term Term::record(std::vector<std::string> labels, std::vector<Term> fields, Span span) {
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second)
      throw Error("DuplicateLabel", "label '" + l + "' repeated in record", span);
  return make_term(TermKind::kRecord, "", std::move(labels), std::nullopt,
                   std::move(fields), span);
}
Term Term::project(Term record, std::string label, Span span) {
  return make_term(TermKind::kProject, std::move(label), {}, std::nullopt,
                   {std::move(record)}, span);
}
Term Term::lambda(std::string var, Type param, Term body, Span span) {
  return make_term(TermKind::kLambda, std::move(var), {}, std::move(param),
                   {std::move(body)}, span);
}
Term Term::apply(Term fun, Term arg, Span span) {
  return make_term(TermKind::kApply, "", {}, std::nullopt, {std::move(fun), std::move(arg)},
                   span);
}
Term Term::empty_set(std::optional<Type> annot, Span span) {
  return make_term(TermKind::kEmptySet, "", {}, std::move(annot), {}, span);
}
Term Term::singleton_set(Term elem, Span span) {
  return make_term(TermKind::kSingletonSet, "", {}, std::nullopt, {std::move(elem)}, span);
}
Term Term::set_union(Term left, Term right, Span span) {
  return make_term(TermKind::kUnion, "", {}, std::nullopt,
                   {std::move(left), std::move(right)}, span);
}
Term Term::comp_set(Term head, std::string var, Term source, Span span) {
  return make_term(TermKind::kCompSet, std::move(var), {}, std::nullopt,
                   {std::move(head), std::move(source)}, span);
}
Term Term::where_set(Term cond, Term body, Span span) {
  return make_term(TermKind::kWhereSet, "", {}, std::nullopt,
                   {std::move(cond), std::move(body)}, span);
}
Term Term::empty_test(Term collection, Span span) {
  return make_term(TermKind::kEmptyTest, "", {}, std::nullopt, {std::move(collection)},
                   span);
}
Term Term::empty_bag(std::optional<Type> annot, Span span) {
  return make_term(TermKind::kEmptyBag, "", {}, std::move(annot), {}, span);
}
Term Term::singleton_bag(Term elem, Span span) {
  return make_term(TermKind::kSingletonBag, "", {}, std::nullopt, {std::move(elem)}, span);
}
Term Term::bag_union(Term left, Term right, Span span) {
  return make_term(TermKind::kDisjUnion, "", {}, std::nullopt,
                   {std::move(left), std::move(right)}, span);
}
Term Term::comp_bag(Term head, std::string var, Term source, Span span) {
  return make_term(TermKind::kCompBag, std::move(var), {}, std::nullopt,
                   {std::move(head), std::move(source)}, span);
}
Term Term::where_bag(Term cond, Term body, Span span) {
  return make_term(TermKind::kWhereBag, "", {}, std::nullopt,
                   {std::move(cond), std::move(body)}, span);
}
Term Term::dedup(Term bag, Span span) {
  return make_term(TermKind::kDedup, "", {}, std::nullopt, {std::move(bag)}, span);
}
Term Term::promote(Term set, Span span) {
  return make_term(TermKind::kPromote, "", {}, std::nullopt, {std::move(set)}, span);
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::vector<std::string>& Term::labels() const { return node_->labels; }
const std::optional<Type>& Term::annot() const { return node_->annot; }
const std::vector<Term>& Term::kids() const { return node_->kids; }
const Span& Term::span() const { return node_->span; }
const std::vector<std::string>& Term::free_vars() const { return node_->fv; }
const std::vector<std::string>& Term::holes() const { return node_->holes; }
bool Term::has_free(const std::string& x) const { return contains_sorted(node_->fv, x); }
size_t Term::size() const { return node_->size; }
size_t Term::hole_occurrences() const { return node_->hole_occurrences; }
bool Term::binds() const { return is_binder_kind(kind()); }
int Term::scoped_child() const { return binds() ? 0 : -1; }

bool Term::is_literal() const { return kind() == TermKind::kConst && kids().empty(); }
bool Term::is_true() const { return is_literal() && name() == "true"; }
bool Term::is_false() const { return is_literal() && name() == "false"; }

Term Term::with_kids(std::vector<Term> kids) const {
  return make_term(kind(), name(), labels(), annot(), std::move(kids), span());
}
Term Term::with_name(std::string name) const {
  return make_term(kind(), std::move(name), labels(), annot(), kids(), span());
}
Term Term::with_annot(std::optional<Type> annot) const {
  return make_term(kind(), name(), labels(), std::move(annot), kids(), span());
}

std::string path_to_string(const Path& path) {
  if (path.empty()) return "root";
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += ".";
    out += std::to_string(path[i]);
  }
  return out;
}

const Term& subterm_at(const Term& t, const Path& path) {
  const Term* cur = &t;
  for (int i : path) {
    if (i < 0 || static_cast<size_t>(i) >= cur->arity())
      throw Error("BadPosition", "position " + path_to_string(path) + " out of range");
    cur = &cur->kid(i);
  }
  return *cur;
}

namespace {
Term replace_rec(const Term& t, const Path& path, size_t depth, const Term& r) {
  if (depth == path.size()) return r;
  int i = path[depth];
  if (i < 0 || static_cast<size_t>(i) >= t.arity())
    throw Error("BadPosition", "position " + path_to_string(path) + " out of range");
  std::vector<Term> kids = t.kids();
  kids[i] = replace_rec(kids[i], path, depth + 1, r);
  return t.with_kids(std::move(kids));
}
}  // namespace

Term replace_at(const Term& t, const Path& path, const Term& replacement) {
  return replace_rec(t, path, 0, replacement);
}

std::set<std::string> all_names(const Term& t) {
  std::set<std::string> out;
  std::function<void(const Term&)> go = [&](const Term& u) {
    if (u.kind() == TermKind::kVar || u.binds()) out.insert(u.name());
    for (const auto& k : u.kids()) go(k);
  };
  go(t);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base;
  while (!stem.empty() && (std::isdigit(static_cast<unsigned char>(stem.back())) ||
                           stem.back() == '\''))
    stem.pop_back();
  if (stem.empty()) stem = "v";
  for (int i = 1;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

namespace {

using SubstMap = std::map<std::string, Term>;

Term subst_many(const Term& t, const SubstMap& sigma) {
  SubstMap relevant;
  for (const auto& [x, r] : sigma)
    if (t.has_free(x)) relevant.emplace(x, r);
  if (relevant.empty()) return t;
  if (t.kind() == TermKind::kVar) return relevant.at(t.name());
  if (!t.binds()) {
    std::vector<Term> kids;
    kids.reserve(t.arity());
    for (const auto& k : t.kids()) kids.push_back(subst_many(k, relevant));
    return t.with_kids(std::move(kids));
  }
  std::vector<Term> kids = t.kids();
  std::string binder = t.name();
  for (size_t i = 0; i < kids.size(); ++i) {
    if (static_cast<int>(i) != t.scoped_child()) {
      kids[i] = subst_many(kids[i], relevant);
      continue;
    }
    SubstMap inner;
    for (const auto& [x, r] : relevant)
      if (x != binder && kids[i].has_free(x)) inner.emplace(x, r);
    if (inner.empty()) continue;
    bool capture = false;
    for (const auto& [x, r] : inner)
      if (r.has_free(binder)) capture = true;
    if (capture) {
      std::set<std::string> avoid(kids[i].free_vars().begin(), kids[i].free_vars().end());
      for (const auto& [x, r] : inner) {
        avoid.insert(x);
        avoid.insert(r.free_vars().begin(), r.free_vars().end());
      }
      std::string fresh = fresh_name(binder, avoid);
      kids[i] = subst_many(kids[i], {{binder, Term::var(fresh)}});
      binder = fresh;
    }
    kids[i] = subst_many(kids[i], inner);
  }
  return make_term(t.kind(), binder, t.labels(), t.annot(), std::move(kids), t.span());
}

}  // namespace

Term subst(const Term& t, const std::string& x, const Term& r) {
  return subst_many(t, {{x, r}});
}

Term rename_free(const Term& t, const std::map<std::string, std::string>& renaming) {
  SubstMap sigma;
  for (const auto& [from, to] : renaming)
    if (from != to) sigma.emplace(from, Term::var(to));
  return subst_many(t, sigma);
}

namespace {

int lookup(const std::vector<std::string>& env, const std::string& x) {
  for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i)
    if (env[i] == x) return static_cast<int>(env.size()) - 1 - i;
  return -1;
}

bool alpha_rec(const Term& a, const Term& b, std::vector<std::string>& ea,
               std::vector<std::string>& eb) {
  if (a.kind() != b.kind()) return false;
  if (a.same(b) && ea == eb) return true;
  switch (a.kind()) {
    case TermKind::kVar: {
      int ia = lookup(ea, a.name());
      int ib = lookup(eb, b.name());
      if (ia != ib) return false;
      return ia >= 0 || a.name() == b.name();
    }
    case TermKind::kHole:
    case TermKind::kConst:
    case TermKind::kProject:
      if (a.name() != b.name()) return false;
      break;
    case TermKind::kRecord:
      if (a.labels() != b.labels()) return false;
      break;
    case TermKind::kLambda:
      if (!(*a.annot() == *b.annot())) return false;
      break;
    default:
      break;
  }
  if (a.arity() != b.arity()) return false;
  for (size_t i = 0; i < a.arity(); ++i) {
    bool scoped = static_cast<int>(i) == a.scoped_child();
    if (scoped) {
      ea.push_back(a.name());
      eb.push_back(b.name());
    }
    bool ok = alpha_rec(a.kid(i), b.kid(i), ea, eb);
    if (scoped) {
      ea.pop_back();
      eb.pop_back();
    }
    if (!ok) return false;
  }
  return true;
}

void key_rec(const Term& t, std::vector<std::string>& env,
             std::map<std::string, int>* holes, std::string& out) {
  out += kind_name(t.kind());
  switch (t.kind()) {
    case TermKind::kVar: {
      int i = lookup(env, t.name());
      if (i >= 0)
        out += "#" + std::to_string(i);
      else
        out += "$" + t.name();
      return;
    }
    case TermKind::kHole:
      if (holes != nullptr) {
        auto it = holes->find(t.name());
        if (it == holes->end())
          it = holes->emplace(t.name(), static_cast<int>(holes->size())).first;
        out += "[" + std::to_string(it->second) + "]";
      } else {
        out += "[" + t.name() + "]";
      }
      return;
    case TermKind::kConst:
    case TermKind::kProject:
      out += "'" + t.name() + "'";
      break;
    case TermKind::kRecord:
      for (const auto& l : t.labels()) out += "'" + l;
      break;
    case TermKind::kLambda:
      out += ":" + t.annot()->to_string();
      break;
    case TermKind::kEmptySet:
    case TermKind::kEmptyBag:
      // Typing depends on the annotation (empty-flatten inspects it).
      if (t.annot()) out += ":" + t.annot()->to_string();
      break;
    default:
      break;
  }
  out += "(";
  for (size_t i = 0; i < t.arity(); ++i) {
    if (i > 0) out += ",";
    bool scoped = static_cast<int>(i) == t.scoped_child();
    if (scoped) env.push_back(t.name());
    key_rec(t.kid(i), env, holes, out);
    if (scoped) env.pop_back();
  }
  out += ")";
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  std::vector<std::string> ea, eb;
  return alpha_rec(a, b, ea, eb);
}

std::string alpha_key(const Term& t, bool canonical_holes) {
  std::vector<std::string> env;
  std::map<std::string, int> holes;
  std::string out;
  key_rec(t, env, canonical_holes ? &holes : nullptr, out);
  return out;
}

size_t term_size(const Term& t) { return t.size(); }

Term rename_holes(const Term& t, const std::map<std::string, std::string>& renaming) {
  if (t.is_pure()) return t;
  if (t.kind() == TermKind::kHole) {
    auto it = renaming.find(t.name());
    return it == renaming.end() ? t : t.with_name(it->second);
  }
  std::vector<Term> kids;
  kids.reserve(t.arity());
  for (const auto& k : t.kids()) kids.push_back(rename_holes(k, renaming));
  return t.with_kids(std::move(kids));
}

std::vector<std::pair<std::string, Path>> hole_positions(const Term& t) {
  std::vector<std::pair<std::string, Path>> out;
  Path path;
  std::function<void(const Term&)> go = [&](const Term& u) {
    if (u.is_pure()) return;
    if (u.kind() == TermKind::kHole) {
      out.emplace_back(u.name(), path);
      return;
    }
    for (size_t i = 0; i < u.arity(); ++i) {
      path.push_back(static_cast<int>(i));
      go(u.kid(i));
      path.pop_back();
    }
  };
  go(t);
  return out;
}

FreeVarsResult free_vars(const Term& t) {
  FreeVarsResult r;
  r.vars.insert(t.free_vars().begin(), t.free_vars().end());
  r.holes.insert(t.holes().begin(), t.holes().end());
  return r;
}

}  // namespace nrc
