#ifndef NRC_SYNTAX_HPP_
#define NRC_SYNTAX_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "nrc/term.hpp"
#include "nrc/types.hpp"

namespace nrc {

/// `table NAME : TYPE;` header line of a source file.
struct TableDecl {
  std::string name;
  Type type;
  Span span;
};

struct Program {
  std::vector<TableDecl> tables;
  Term term;
};

/// Parsers throw Error("ParseError") with the offending span.
Type parse_type(std::string_view text);
Term parse_term(std::string_view text);
/// Optional table declarations followed by exactly one term.
Program parse_program(std::string_view text);

/// Prints the surface grammar accepted by parse_term; printing then parsing
/// yields the same term (annotations included).
std::string print_term(const Term& t);

}  // namespace nrc

#endif  // NRC_SYNTAX_HPP_
