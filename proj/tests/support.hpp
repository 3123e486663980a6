#ifndef NRC_TESTS_SUPPORT_HPP_
#define NRC_TESTS_SUPPORT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "nrc/syntax.hpp"
#include "nrc/typing.hpp"

namespace nrc::testing {

inline Term T(const std::string& text) { return parse_term(text); }
inline Type Ty(const std::string& text) { return parse_type(text); }

inline TypeEnv env_of(const std::vector<std::pair<std::string, std::string>>& vars,
                      const std::vector<std::pair<std::string, std::string>>& holes = {}) {
  TypeEnv env;
  for (const auto& [x, ty] : vars) env.bind(x, parse_type(ty));
  for (const auto& [p, ty] : holes) env.bind_hole(p, parse_type(ty));
  return env;
}

// Error code thrown by f, or "" when nothing was thrown.
template <typename F>
std::string error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace nrc::testing

#endif  // NRC_TESTS_SUPPORT_HPP_
