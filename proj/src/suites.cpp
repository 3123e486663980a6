#include "nrc/suites.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "nrc/erasure.hpp"
#include "nrc/sql.hpp"
#include "nrc/syntax.hpp"

namespace nrc {
namespace {

using Check = std::function<std::optional<std::string>(std::uint64_t seed, SuiteReport& report)>;

// Thrown by an instance that does not meet the suite's sampling condition.
struct Skip {
  std::string why;
};

std::size_t size_or(const SuiteConfig& cfg, std::size_t fallback) {
  return cfg.size == 0 ? fallback : cfg.size;
}

void run_instances(const SuiteConfig& cfg, SuiteReport& report, const Check& check,
                   std::size_t max_attempts) {
  std::size_t checked = 0;
  for (std::uint64_t i = 0; checked < cfg.n && i < max_attempts; ++i) {
    InstanceResult r;
    r.seed = cfg.seed + i;
    try {
      if (auto why = check(r.seed, report)) {
        r.ok = false;
        r.detail = *why;
      }
    } catch (const Skip& s) {
      r.skipped = true;
      r.detail = s.why;
    } catch (const Error& e) {
      r.ok = false;
      r.detail = e.diagnostic();
    }
    if (!r.skipped) ++checked;
    report.instances.push_back(std::move(r));
  }
}

GenConfig term_config(const SuiteConfig& cfg, std::uint64_t seed, std::size_t size) {
  GenConfig g;
  g.seed = seed;
  g.max_size = size;
  g.fragment = cfg.fragment;
  return g;
}

std::string show(const Term& t) { return print_term(t); }

std::optional<std::string> termination(std::uint64_t seed, SuiteReport& rep, const SuiteConfig& cfg) {
  TypedTerm m = gen_well_typed(term_config(cfg, seed, size_or(cfg, 40)));
  for (const Strategy& s : {Strategy::leftmost_outermost(), Strategy::random(seed)}) {
    NormalizeResult r = normalize(m, s, kDefaultFuel);
    rep.stats["steps"] += r.steps;
    if (!is_normal(m.env, r.normal_form, m.calculus))
      return s.to_string() + " stopped at a reducible term: " + show(r.normal_form);
  }
  return std::nullopt;
}

std::optional<std::string> subject(std::uint64_t seed, SuiteReport& rep, const SuiteConfig& cfg,
                                   std::size_t quota) {
  TypedTerm m = gen_well_typed(term_config(cfg, seed, size_or(cfg, 40)));
  std::mt19937_64 rng(seed);
  Term cur = m.term;
  std::size_t taken = 0;
  for (std::size_t attempts = 0; taken < quota && attempts < quota * 4; ++attempts) {
    std::vector<ReductStep> steps = step_all(m.env, cur, m.calculus);
    if (steps.empty()) {
      if (cur.same(m.term)) break;
      cur = m.term;  // restart the walk
      continue;
    }
    const ReductStep& s = steps[std::uniform_int_distribution<std::size_t>(0, steps.size() - 1)(rng)];
    Type before = infer(m.env, s.before, m.calculus);
    Type after = infer(m.env, s.after, m.calculus);
    ++taken;
    if (before != after)
      return std::string(rule_name(s.rule)) + " @ " + path_to_string(s.position) + " changed " +
             before.to_string() + " to " + after.to_string() + ": " + show(s.before);
    cur = s.after;
  }
  rep.stats["steps"] += taken;
  return std::nullopt;
}

std::optional<std::string> erasure(std::uint64_t seed, SuiteReport& rep, const SuiteConfig& cfg) {
  GenConfig g = term_config(cfg, seed, size_or(cfg, 40));
  g.fragment = Fragment::kHeterogeneous;
  TypedTerm m = gen_well_typed(g);
  TypeEnv env = erase_env(m.env);
  Term em = erase_term(m.term);
  Type et = infer(env, em, Calculus::kDeltaIota);
  if (et != erase_type(m.type))
    return "erased term has type " + et.to_string() + ", expected " + erase_type(m.type).to_string();
  if (!alpha_eq(erase_term(em), em)) return "erasure is not idempotent";
  std::vector<ReductStep> erased_steps = step_all(env, em, Calculus::kDeltaIota);
  for (const ReductStep& s : step_all(m.env, m.term, m.calculus)) {
    ++rep.stats["steps"];
    Term target = erase_term(s.after);
    bool simulated = false;
    for (const ReductStep& e : erased_steps) simulated = simulated || alpha_eq(e.after, target);
    if (!simulated)
      return std::string(rule_name(s.rule)) + " @ " + path_to_string(s.position) +
             " has no erased counterpart: " + show(s.before);
    if (infer(env, target, Calculus::kDeltaIota) != erase_type(m.type)) return "erased reduct changes type";
  }
  return std::nullopt;
}

const char* frame_name(Frame::Kind k) {
  switch (k) {
    case Frame::Kind::kCompHead:
      return "comp-head";
    case Frame::Kind::kCompSrc:
      return "comp-src";
    case Frame::Kind::kWhere:
      return "where";
    case Frame::Kind::kDedup:
      return "dedup";
    case Frame::Kind::kPromote:
      return "promote";
  }
  return "?";
}

std::optional<std::string> measures(std::uint64_t seed, SuiteReport& rep, const SuiteConfig& cfg) {
  ContextConfig cc;
  cc.seed = seed;
  cc.max_size = size_or(cfg, 20);
  cc.aux = seed % 2 == 0;
  GeneratedContext ctx = gen_continuation(cc);
  std::mt19937_64 rng(seed);
  const auto& holes = ctx.term.holes();
  std::string p = holes[std::uniform_int_distribution<std::size_t>(0, holes.size() - 1)(rng)];
  Frame f = gen_frame(ctx, p, seed);
  Term qf = compose(ctx.term, p, f);
  ++rep.stats[std::string("frame ") + frame_name(f.kind)];
  std::size_t len0 = measure_len(ctx.term, p), len1 = measure_len(qf, p);
  std::size_t sz0 = measure_sz(ctx.term, p), sz1 = measure_sz(qf, p);
  std::ostringstream at;
  at << " for " << f.to_string() << " at [" << p << "] of " << show(ctx.term);
  if (!(sz0 < sz1)) return "size did not grow (" + std::to_string(sz0) + " -> " + std::to_string(sz1) + ")" + at.str();
  bool head = f.kind == Frame::Kind::kCompHead;
  if (head && len0 != len1) return "length changed under a head frame" + at.str();
  if (!head && !(len0 < len1)) return "length did not grow" + at.str();
  // Sums over the support: new holes of the frame only add.
  if (!(measure_sz_total(ctx.term) < measure_sz_total(qf))) return "total size did not grow" + at.str();
  std::size_t total0 = measure_len_total(ctx.term), total1 = measure_len_total(qf);
  if (head && f.support().empty() && total0 != total1) return "total length changed under a pure head frame" + at.str();
  if (!head && !(total0 < total1)) return "total length did not grow" + at.str();
  return std::nullopt;
}

std::optional<std::string> classify_instance(std::uint64_t seed, SuiteReport& rep, const SuiteConfig& cfg) {
  ContextConfig cc;
  cc.seed = seed;
  cc.max_size = size_or(cfg, 20);
  cc.aux = seed % 2 == 0;
  GeneratedContext ctx = gen_continuation(cc);
  Instantiation eta = gen_instantiation(ctx, seed, cfg.capture);
  if (!is_permutable(eta)) return "generated instantiation is not permutable";
  Term q_eta = instantiate(ctx.term, eta);
  // Plugging order is irrelevant for permutable instantiations.
  Term sequential = ctx.term;
  for (auto it = eta.rbegin(); it != eta.rend(); ++it) sequential = instantiate(sequential, {{it->first, it->second}});
  if (!alpha_eq(sequential, q_eta)) return "sequential instantiation differs";
  bool regular = is_continuation(ctx.term);
  ++rep.stats[regular ? "regular" : "auxiliary"];
  for (const ReductStep& s : step_all(ctx.env, q_eta, Calculus::kDeltaIota)) {
    ++rep.stats["steps"];
    std::string where = std::string(rule_name(s.rule)) + " @ " + path_to_string(s.position) + " in " +
                        show(ctx.term) + " with " + std::to_string(eta.size()) + " plugged";
    Classification c = classify(ctx.env, ctx.term, eta, s);
    ++rep.stats[std::string("case ") + case_name(c.kind)];
    if (regular && c.kind == Classification::Case::kSpecial) return "special case for a regular continuation: " + where;
    if (auto why = verify_classification(ctx.env, ctx.term, eta, s, c)) {
      bool singleton_src = c.kind == Classification::Case::kInterface && c.frame.kind == Frame::Kind::kCompSrc &&
                           c.rule == RuleTag::kCompSingleton;
      if (singleton_src) ++rep.stats["capture at comp-src singleton"];
      return std::string(case_name(c.kind)) + ": " + *why + ": " + where;
    }
    // Renaming commutes with instantiation when sigma avoids the plugged holes.
    if (c.kind == Classification::Case::kContinuation) {
      Instantiation ts = rename_inst(c.theta, c.sigma);
      if (!is_permutable(ts)) return "theta^sigma is not permutable: " + where;
      Term lhs = instantiate(rename_holes(c.q_prime, c.sigma), c.theta);
      Term rhs = rename_holes(instantiate(c.q_prime, ts), c.sigma);
      if (!alpha_eq(lhs, rhs)) return "C sigma eta differs from C eta^sigma sigma: " + where;
    }
  }
  return std::nullopt;
}

std::optional<std::string> maxred_instance(std::uint64_t seed, SuiteReport& rep, const SuiteConfig& cfg) {
  constexpr std::size_t kCap = 10000;
  TypeEnv env;
  Term root;
  Calculus calc;
  bool context = seed % 2 == 1;
  if (context) {
    ContextConfig cc;
    cc.seed = seed;
    cc.max_size = size_or(cfg, 16);
    cc.aux = seed % 4 == 1;
    GeneratedContext ctx = gen_continuation(cc);
    env = ctx.env;
    root = ctx.term;
    calc = Calculus::kDeltaIota;
  } else {
    TypedTerm m = gen_well_typed(term_config(cfg, seed, size_or(cfg, 16)));
    env = m.env;
    root = m.term;
    calc = m.calculus;
  }
  ReductionGraph g;
  try {
    g = reduction_graph(env, root, calc, kCap);
  } catch (const Error& e) {
    if (e.code() == "CapExceeded") throw Skip{"reduction graph exceeds " + std::to_string(kCap) + " nodes"};
    throw;
  }
  ++rep.stats[context ? "contexts" : "terms"];
  rep.stats["nodes"] += g.nodes.size();
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    for (std::size_t v : g.succ[u]) {
      ++rep.stats["edges"];
      if (!(g.maxred[v] < g.maxred[u])) return "maxred does not decrease along an edge from " + show(g.nodes[u]);
    }
  }
  // Independent re-exploration from the root's successors.
  for (std::size_t v : g.succ[0])
    if (maxred(env, g.nodes[v], calc, kCap) != g.maxred[v]) return "maxred depends on the exploration root";
  // Renaming reduction from the root and a sample of reachable contexts.
  std::set<std::string> avoid;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> sample{0};
  for (int i = 0; i < 8 && g.nodes.size() > 1; ++i)
    sample.push_back(std::uniform_int_distribution<std::size_t>(1, g.nodes.size() - 1)(rng));
  for (std::size_t u : sample) {
    const Term& q = g.nodes[u];
    if (q.is_pure()) continue;
    for (const RenamingStep& r : renaming_steps(env, q, avoid, calc)) {
      ++rep.stats["renaming steps"];
      std::size_t renamed = maxred(hole_env(env, r), r.reduct, calc, kCap);
      std::size_t plain = maxred(env, r.plain, calc, kCap);
      if (renamed != plain) return "maxred of Q' differs from maxred of Q' sigma for " + show(q);
      if (!(renamed < g.maxred[u])) return "maxred does not decrease under renaming reduction of " + show(q);
    }
  }
  return std::nullopt;
}

std::optional<std::string> semantics(std::uint64_t seed, SuiteReport& rep, const SuiteConfig& cfg) {
  TypedTerm q = gen_relation_query(term_config(cfg, seed, size_or(cfg, 40)));
  ++rep.stats[q.type.is_set() ? "set queries" : "bag queries"];
  Term nf = normalize(q, Strategy::leftmost_outermost()).normal_form;
  for (std::uint64_t d = 0; d < 3; ++d) {
    Database db = gen_database(q.env, seed * 3 + d);
    Value a = eval(db.values(), q.term, q.calculus);
    Value b = eval(db.values(), nf, q.calculus);
    ++rep.stats["evaluations"];
    if (!value_eq(a, b))
      return "denotation changed: " + value_to_string(a) + " vs " + value_to_string(b) + " for " + show(q.term);
  }
  return std::nullopt;
}

std::optional<std::string> flatness(std::uint64_t seed, SuiteReport& rep, const SuiteConfig& cfg) {
  TypedTerm q = gen_relation_query(term_config(cfg, seed, size_or(cfg, 40)));
  TypedTerm nf{normalize(q, Strategy::leftmost_outermost()).normal_form, q.env, q.type, q.calculus};
  try {
    SqlQuery sql = recognize(nf);
    ++rep.stats["translated"];
    if (uses_lateral(sql)) ++rep.stats["lateral"];
  } catch (const Error& e) {
    if (e.code() != "NotTranslatable") throw;
    if (auto at = promote_obstruction(nf)) ++rep.stats["promote obstruction"];
    return e.diagnostic() + " for normal form " + show(nf.term);
  }
  return std::nullopt;
}

void find_obstruction(const TypeEnv& env, const Term& t, Calculus calc, Path& path, std::optional<Path>& out) {
  if (out) return;
  if (t.kind() == TermKind::kPromote) {
    Type arg = infer(env, t.kid(0), calc);
    if (!is_flat_collection(arg)) {
      out = path;
      return;
    }
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    TypeEnv inner = env;
    if (t.binds() && static_cast<int>(i) == t.scoped_child()) {
      if (t.kind() == TermKind::kLambda) {
        inner = env.extended(t.name(), *t.annot());
      } else {
        inner = env.extended(t.name(), infer(env, t.kid(1), calc).elem());
      }
    }
    path.push_back(static_cast<int>(i));
    find_obstruction(inner, t.kid(i), calc, path, out);
    path.pop_back();
  }
}

}  // namespace

std::size_t SuiteReport::failures() const {
  std::size_t n = 0;
  for (const InstanceResult& r : instances) n += (!r.skipped && !r.ok) ? 1 : 0;
  return n;
}

std::size_t SuiteReport::checked() const {
  std::size_t n = 0;
  for (const InstanceResult& r : instances) n += r.skipped ? 0 : 1;
  return n;
}

std::string SuiteReport::tap() const {
  std::ostringstream out;
  out << "1.." << instances.size() << "\n";
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const InstanceResult& r = instances[i];
    out << (r.ok ? "ok " : "not ok ") << i + 1 << " - " << suite << " seed=" << r.seed;
    if (r.skipped) out << " # SKIP " << r.detail;
    else if (!r.ok) out << " # " << r.detail;
    out << "\n";
  }
  for (const auto& [k, v] : stats) out << "# " << k << ": " << v << "\n";
  out << "# failures: " << failures() << " of " << checked() << "\n";
  return out.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> kNames = {"termination", "subject",  "erasure",   "measures",
                                                  "classify",    "maxred",   "semantics", "flatness"};
  return kNames;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.suite = name;
  std::size_t attempts = cfg.n;
  Check check;
  if (name == "termination") {
    check = [&](std::uint64_t s, SuiteReport& r) { return termination(s, r, cfg); };
  } else if (name == "subject") {
    std::size_t quota = 10;
    if (cfg.steps > 0) {
      // Spread the requested steps over the terms that are not already normal.
      std::size_t reducible = 0;
      for (std::size_t i = 0; i < cfg.n; ++i) {
        TypedTerm m = gen_well_typed(term_config(cfg, cfg.seed + i, size_or(cfg, 40)));
        reducible += is_normal(m) ? 0 : 1;
      }
      quota = reducible == 0 ? 0 : (cfg.steps + reducible - 1) / reducible;
    }
    check = [&, quota](std::uint64_t s, SuiteReport& r) { return subject(s, r, cfg, quota); };
  } else if (name == "erasure") {
    check = [&](std::uint64_t s, SuiteReport& r) { return erasure(s, r, cfg); };
  } else if (name == "measures") {
    check = [&](std::uint64_t s, SuiteReport& r) { return measures(s, r, cfg); };
  } else if (name == "classify") {
    check = [&](std::uint64_t s, SuiteReport& r) { return classify_instance(s, r, cfg); };
  } else if (name == "maxred") {
    attempts = cfg.n * 10;
    check = [&](std::uint64_t s, SuiteReport& r) { return maxred_instance(s, r, cfg); };
  } else if (name == "semantics") {
    check = [&](std::uint64_t s, SuiteReport& r) { return semantics(s, r, cfg); };
  } else if (name == "flatness") {
    check = [&](std::uint64_t s, SuiteReport& r) { return flatness(s, r, cfg); };
  } else {
    throw Error("BadSuite", "unknown suite '" + name + "'");
  }
  run_instances(cfg, rep, check, attempts);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::optional<Path> promote_obstruction(const TypedTerm& normal_form) {
  std::optional<Path> out;
  Path path;
  find_obstruction(normal_form.env, normal_form.term, normal_form.calculus, path, out);
  return out;
}

}  // namespace nrc
