// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "nrc/cli.hpp"
#include "nrc/rewrite.hpp"
#include "nrc/suites.hpp"
#include "nrc/syntax.hpp"

namespace {

using nrc::SuiteConfig;
using nrc::SuiteReport;

// Tolerances.
constexpr double kFlagshipSeconds = 1.0;
constexpr double kTerminationSeconds = 300.0;
constexpr std::size_t kTerms = 1000;
constexpr std::size_t kTermSize = 40;
constexpr std::size_t kSubjectSteps = 10000;
constexpr std::size_t kSemanticQueries = 500;
constexpr std::size_t kDatabasesPerQuery = 3;
constexpr std::size_t kMinPerKind = 100;
constexpr std::size_t kClassifyPairs = 500;
constexpr std::size_t kMaxredTerms = 300;
constexpr std::size_t kFlatQueries = 300;

int failed = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failed;
}

std::size_t stat(const SuiteReport& r, const std::string& key) {
  auto it = r.stats.find(key);
  return it == r.stats.end() ? 0 : it->second;
}

std::string first_failure(const SuiteReport& r) {
  for (const auto& i : r.instances)
    if (!i.ok) return " first failure seed " + std::to_string(i.seed) + ": " + i.detail;
  return "";
}

std::string summary(const SuiteReport& r) {
  std::ostringstream s;
  s << r.failures() << " failures over " << r.checked() << " instances, " << r.seconds << " s";
  return s.str();
}

SuiteReport suite(const std::string& name, std::size_t n,
                  const std::function<void(SuiteConfig&)>& tweak = nullptr) {
  SuiteConfig cfg;
  cfg.seed = 1;
  cfg.n = n;
  if (tweak) tweak(cfg);
  return nrc::run_suite(name, cfg);
}

void flagship() {
  auto start = std::chrono::steady_clock::now();
  nrc::TypeEnv env;
  env.bind("t", nrc::parse_type("{<id:Int>}"));
  nrc::TypedTerm m = nrc::typed(env, nrc::parse_term("for (y <- for (x <- t) {{x.id}}) y"));
  nrc::Term nf = nrc::normalize(m, nrc::Strategy::leftmost_outermost()).normal_form;
  bool exact = nrc::alpha_eq(nf, nrc::parse_term("for (x <- t) {x.id}"));

  std::ostringstream out, err;
  int code = nrc::run_cli({"sql", std::string(NRC_SAMPLES_DIR) + "/flatten_record.nrc"}, out, err);
  std::string sql = out.str();
  std::size_t lines = 0;
  for (char c : sql) lines += c == '\n';
  std::size_t selects = 0;
  for (std::size_t at = sql.find("SELECT"); at != std::string::npos; at = sql.find("SELECT", at + 1))
    ++selects;
  bool one_select = code == 0 && lines == 1 && selects == 1 && sql.find("FROM t AS ") != std::string::npos;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostringstream d;
  d << "normal form " << nrc::print_term(nf) << ", sql \"" << sql.substr(0, sql.find('\n'))
    << "\", " << secs << " s (limit " << kFlagshipSeconds << " s)";
  report(1, "flagship flattening", exact && one_select && secs < kFlagshipSeconds, d.str());
}

void termination() {
  SuiteReport r = suite("termination", kTerms, [](SuiteConfig& c) { c.size = kTermSize; });
  bool ok = r.failures() == 0 && r.checked() == kTerms && r.seconds < kTerminationSeconds;
  report(2, "strong normalization (lo + random, fuel 1e6)", ok,
         summary(r) + ", " + std::to_string(stat(r, "steps")) + " steps" + first_failure(r));
}

void subject() {
  SuiteReport r = suite("subject", kTerms, [](SuiteConfig& c) {
    c.size = kTermSize;
    c.steps = kSubjectSteps;
  });
  std::size_t steps = stat(r, "steps");
  bool ok = r.failures() == 0 && steps >= kSubjectSteps;
  report(3, "subject reduction", ok,
         std::to_string(steps) + " sampled steps (need " + std::to_string(kSubjectSteps) + "), " +
             summary(r) + first_failure(r));
}

void semantics() {
  SuiteReport r = suite("semantics", kSemanticQueries);
  std::size_t sets = stat(r, "set queries"), bags = stat(r, "bag queries");
  std::size_t evals = stat(r, "evaluations");
  bool ok = r.failures() == 0 && r.checked() == kSemanticQueries &&
            evals == kSemanticQueries * kDatabasesPerQuery && sets >= kMinPerKind &&
            bags >= kMinPerKind;
  report(4, "semantic preservation", ok,
         summary(r) + ", " + std::to_string(evals) + " evaluations, " + std::to_string(sets) +
             " set and " + std::to_string(bags) + " bag queries" + first_failure(r));
}

void erasure() {
  SuiteReport r = suite("erasure", kTerms, [](SuiteConfig& c) { c.size = kTermSize; });
  bool ok = r.failures() == 0 && r.checked() == kTerms;
  report(5, "erasure typability and simulation", ok,
         summary(r) + ", " + std::to_string(stat(r, "steps")) + " steps simulated" +
             first_failure(r));
}

void measures() {
  SuiteReport r = suite("measures", kTerms);
  bool ok = r.failures() == 0 && r.checked() == kTerms;
  report(6, "measures grow under frames", ok, summary(r) + first_failure(r));
}

void classification() {
  SuiteReport r = suite("classify", kClassifyPairs);
  bool ok = r.failures() == 0 && r.checked() == kClassifyPairs && stat(r, "regular") > 0 &&
            stat(r, "auxiliary") > 0;
  report(7, "classification totality", ok,
         summary(r) + ", " + std::to_string(stat(r, "steps")) + " steps classified" +
             first_failure(r));
  // Diagnostic only: plugged terms whose free variables may be captured by
  // binders of Q fall outside the variable convention classification relies on.
  SuiteReport cap = suite("classify", kClassifyPairs, [](SuiteConfig& c) { c.capture = true; });
  std::printf("INFO [7] capture-permitting instantiation: %zu failures over %zu pairs, %zu at a "
              "source singleton with capture\n",
              cap.failures(), cap.checked(), stat(cap, "capture at comp-src singleton"));
}

void maxred_monotone() {
  SuiteReport r = suite("maxred", kMaxredTerms);
  bool ok = r.failures() == 0 && r.checked() == kMaxredTerms && stat(r, "renaming steps") > 0;
  report(8, "maxred decreases (plain and renaming)", ok,
         summary(r) + ", " + std::to_string(stat(r, "edges")) + " edges, " +
             std::to_string(stat(r, "renaming steps")) + " renaming steps" + first_failure(r));
}

void conservativity() {
  SuiteReport het = suite("flatness", kFlatQueries);
  SuiteReport set = suite("flatness", kFlatQueries,
                          [](SuiteConfig& c) { c.fragment = nrc::Fragment::kSetOnly; });
  bool ok = het.failures() == 0 && set.failures() == 0 && het.checked() == kFlatQueries &&
            set.checked() == kFlatQueries;
  report(9, "flat normal forms", ok,
         "heterogeneous " + summary(het) + first_failure(het) + "; set-only " + summary(set) +
             first_failure(set));
}

}  // namespace

int main() {
  flagship();
  termination();
  subject();
  semantics();
  erasure();
  measures();
  classification();
  maxred_monotone();
  conservativity();
  std::printf("%s: %d of 9 criteria failed\n", failed == 0 ? "ACCEPTED" : "REJECTED", failed);
  return failed == 0 ? 0 : 1;
}
