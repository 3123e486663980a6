#include "nrc/signature.hpp"

#include <cctype>
#include <map>

namespace nrc::signature {

namespace {

const std::map<std::string, std::vector<ConstantSig>>& table() {
  static const auto* sigs = [] {
    const Type b = Type::boolean();
    const Type i = Type::integer();
    const Type s = Type::string();
    return new std::map<std::string, std::vector<ConstantSig>>{
        {"and", {{{b, b}, b}}},
        {"or", {{{b, b}, b}}},
        {"not", {{{b}, b}}},
        {"plus", {{{i, i}, i}}},
        {"leq", {{{i, i}, b}}},
        {"eq", {{{i, i}, b}, {{s, s}, b}, {{b, b}, b}}},
    };
  }();
  return *sigs;
}

bool is_numeral(const std::string& name) {
  size_t start = (!name.empty() && name[0] == '-') ? 1 : 0;
  if (name.size() <= start) return false;
  for (size_t k = start; k < name.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(name[k]))) return false;
  return true;
}

std::string describe(const std::vector<Type>& types) {
  std::string out = "(";
  for (size_t k = 0; k < types.size(); ++k) {
    if (k > 0) out += ", ";
    out += types[k].to_string();
  }
  return out + ")";
}

}  // namespace

bool is_primitive(const std::string& name) { return table().count(name) > 0; }

const std::vector<std::string>& primitive_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, sigs] : table()) out.push_back(name);
    return out;
  }();
  return names;
}

const std::vector<ConstantSig>& overloads(const std::string& name) {
  static const std::vector<ConstantSig> none;
  auto it = table().find(name);
  return it == table().end() ? none : it->second;
}

std::optional<Type> literal_type(const std::string& name) {
  if (name == "true" || name == "false") return Type::boolean();
  if (is_numeral(name)) return Type::integer();
  if (name.size() >= 2 && name.front() == '"' && name.back() == '"') return Type::string();
  return std::nullopt;
}

Type result_type(const std::string& name, const std::vector<Type>& arg_types,
                 const Span& span) {
  if (auto lit = literal_type(name)) {
    if (!arg_types.empty())
      throw Error("ArgTypeMismatch", "literal " + name + " takes no arguments", span);
    return *lit;
  }
  auto it = table().find(name);
  if (it == table().end()) throw Error("UnknownConstant", "unknown constant " + name, span);
  for (const auto& sig : it->second) {
    if (sig.args.size() != arg_types.size()) continue;
    bool ok = true;
    for (size_t k = 0; k < arg_types.size() && ok; ++k) ok = sig.args[k] == arg_types[k];
    if (ok) return sig.result;
  }
  throw Error("ArgTypeMismatch",
              name + " cannot be applied to arguments of types " + describe(arg_types), span);
}

bool literal_bool(const std::string& name) {
  if (name == "true") return true;
  if (name == "false") return false;
  throw Error("BadLiteral", name + " is not a Bool literal");
}

long long literal_int(const std::string& name) {
  if (!is_numeral(name)) throw Error("BadLiteral", name + " is not an Int literal");
  return std::stoll(name);
}

std::string literal_string(const std::string& name) {
  if (name.size() < 2 || name.front() != '"' || name.back() != '"')
    throw Error("BadLiteral", name + " is not a String literal");
  std::string out;
  for (size_t k = 1; k + 1 < name.size(); ++k) {
    if (name[k] == '\\' && k + 2 < name.size()) ++k;
    out += name[k];
  }
  return out;
}

std::string quote_string(const std::string& raw) {
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

Term apply(const std::string& name, const std::vector<Term>& args) {
  for (const auto& a : args)
    if (!a.is_literal()) throw Error("BadLiteral", "delta-rule on a non-literal argument");
  auto arg = [&](size_t k) -> const std::string& { return args.at(k).name(); };
  if (name == "and") return Term::boolean(literal_bool(arg(0)) && literal_bool(arg(1)));
  if (name == "or") return Term::boolean(literal_bool(arg(0)) || literal_bool(arg(1)));
  if (name == "not") return Term::boolean(!literal_bool(arg(0)));
  if (name == "plus") {
    // Wrap on overflow rather than invoking undefined behaviour.
    auto sum = static_cast<unsigned long long>(literal_int(arg(0))) +
               static_cast<unsigned long long>(literal_int(arg(1)));
    return Term::integer(static_cast<long long>(sum));
  }
  if (name == "leq") return Term::boolean(literal_int(arg(0)) <= literal_int(arg(1)));
  if (name == "eq") {
    auto ta = literal_type(arg(0));
    if (ta && *ta == Type::integer()) return Term::boolean(literal_int(arg(0)) == literal_int(arg(1)));
    if (ta && *ta == Type::string())
      return Term::boolean(literal_string(arg(0)) == literal_string(arg(1)));
    return Term::boolean(literal_bool(arg(0)) == literal_bool(arg(1)));
  }
  throw Error("UnknownConstant", "no semantics for constant " + name);
}

}  // namespace nrc::signature
