#include "nrc/diagnostics.hpp"

#include <nlohmann/json.hpp>

namespace nrc {

std::string Span::to_string() const {
  if (!known()) return "?";
  return std::to_string(line) + ":" + std::to_string(col) + "-" +
         std::to_string(end_line) + ":" + std::to_string(end_col);
}

Error::Error(std::string code, std::string message, Span span)
    : std::runtime_error(code + ": " + message),
      code_(std::move(code)),
      message_(std::move(message)),
      span_(span) {}

std::string Error::diagnostic() const {
  return "ERR " + code_ + " at " + span_.to_string() + ": " + message_;
}

std::string Error::diagnostic_json() const {
  nlohmann::json j = {{"event", "error"},
                      {"code", code_},
                      {"span", span_.to_string()},
                      {"message", message_}};
  return j.dump();
}

}  // namespace nrc
