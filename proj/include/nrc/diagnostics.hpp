#ifndef NRC_DIAGNOSTICS_HPP_
#define NRC_DIAGNOSTICS_HPP_

#include <stdexcept>
#include <string>

namespace nrc {

/// 1-based line/column range in the source text. A zero line means "unknown".
struct Span {
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;

  bool known() const { return line > 0; }
  std::string to_string() const;
};

/// Every user-facing failure carries a stable code (UnboundVariable,
/// NotACollection, FuelExhausted, ...), an optional source span and a message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string message, Span span = {});

  const std::string& code() const { return code_; }
  const std::string& message() const { return message_; }
  const Span& span() const { return span_; }

  /// `ERR <code> at <span>: <message>`
  std::string diagnostic() const;
  /// Single-line JSON object with the same fields.
  std::string diagnostic_json() const;

 private:
  std::string code_;
  std::string message_;
  Span span_;
};

}  // namespace nrc

#endif  // NRC_DIAGNOSTICS_HPP_
