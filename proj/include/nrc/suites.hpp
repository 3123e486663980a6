#ifndef NRC_SUITES_HPP_
#define NRC_SUITES_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nrc/generator.hpp"

namespace nrc {

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::size_t n = 100;
  /// Maximum size of generated terms; 0 selects the suite's default.
  std::size_t size = 0;
  Fragment fragment = Fragment::kHeterogeneous;
  /// classify: let plugged terms mention the binders above their hole.
  bool capture = false;
  /// subject: total number of sampled steps (0 selects 10 per term).
  std::size_t steps = 0;
};

struct InstanceResult {
  std::uint64_t seed = 0;
  bool ok = true;
  bool skipped = false;
  std::string detail;  // failure reason or skip reason
};

struct SuiteReport {
  std::string suite;
  std::vector<InstanceResult> instances;
  /// Suite-specific counters (steps checked, cases seen, kinds covered, ...).
  std::map<std::string, std::size_t> stats;
  double seconds = 0;

  std::size_t failures() const;
  std::size_t checked() const;  // instances not skipped
  /// TAP lines, one per instance, preceded by the plan.
  std::string tap() const;
};

/// termination, subject, erasure, measures, classify, maxred, semantics,
/// flatness.
const std::vector<std::string>& suite_names();
/// Throws BadSuite for an unknown name. Instances use seeds seed, seed+1, ...
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

/// Normal-form shape that blocks translation in the heterogeneous calculus:
/// promote applied to a set whose elements are not flat (promotion commutes
/// with neither union nor comprehension). Returns the position, if any.
std::optional<Path> promote_obstruction(const TypedTerm& normal_form);

}  // namespace nrc

#endif  // NRC_SUITES_HPP_
