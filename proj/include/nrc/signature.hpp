#ifndef NRC_SIGNATURE_HPP_
#define NRC_SIGNATURE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "nrc/diagnostics.hpp"
#include "nrc/term.hpp"
#include "nrc/types.hpp"

namespace nrc {

/// One typing of a primitive: argument atoms and result atom.
struct ConstantSig {
  std::vector<Type> args;
  Type result;
};

/// The built-in signature. Literals are 0-ary constants named `true`,
/// `false`, a decimal numeral or a double-quoted string; the primitives are
/// and, or, not (Bool), plus, leq (Int) and eq (Int, String or Bool).
namespace signature {

bool is_primitive(const std::string& name);
const std::vector<std::string>& primitive_names();
const std::vector<ConstantSig>& overloads(const std::string& name);

/// Type of a 0-ary literal, or nullopt when `name` is not a literal.
std::optional<Type> literal_type(const std::string& name);

/// Result type of `name` applied to arguments of the given types.
/// Throws UnknownConstant or ArgTypeMismatch.
Type result_type(const std::string& name, const std::vector<Type>& arg_types,
                 const Span& span = {});

/// Semantics of `name` on literal arguments; returns the literal result.
/// Throws when the arguments are not literals of the expected atoms.
Term apply(const std::string& name, const std::vector<Term>& literal_args);

/// Decoding of literal names.
bool literal_bool(const std::string& name);
long long literal_int(const std::string& name);
std::string literal_string(const std::string& name);
std::string quote_string(const std::string& raw);

}  // namespace signature
}  // namespace nrc

#endif  // NRC_SIGNATURE_HPP_
