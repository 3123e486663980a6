#include "nrc/metatheory.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "nrc/syntax.hpp"

namespace nrc {
namespace {

Error precondition(const std::string& msg) { return Error("PreconditionViolated", msg); }
Error not_a_continuation(const Term& q) {
  return Error("NotAContinuation", "not an auxiliary continuation: " + print_term(q));
}

bool parse_cont(const Term& t, bool aux) {
  if (t.is_pure()) return true;
  switch (t.kind()) {
    case TermKind::kHole:
      return true;
    case TermKind::kUnion:
      return parse_cont(t.kid(0), aux) && parse_cont(t.kid(1), aux);
    case TermKind::kCompSet:
      if (!aux && !t.kid(0).is_pure()) return false;
      return parse_cont(t.kid(0), aux) && parse_cont(t.kid(1), aux);
    case TermKind::kWhereSet:
      return t.kid(0).is_pure() && parse_cont(t.kid(1), aux);
    case TermKind::kDedup:
    case TermKind::kPromote:
      return parse_cont(t.kid(0), aux);
    default:
      return false;
  }
}

void require_aux(const Term& q) {
  if (!is_aux_continuation(q)) throw not_a_continuation(q);
}

// Length (sz = false) or size (sz = true) of hole p.
std::size_t measure(const Term& t, const std::string& p, bool sz) {
  if (!t.has_free(p) && !std::binary_search(t.holes().begin(), t.holes().end(), p)) return 0;
  switch (t.kind()) {
    case TermKind::kHole:
      return 1;
    case TermKind::kUnion:
      return std::max(measure(t.kid(0), p, sz), measure(t.kid(1), p, sz));
    case TermKind::kCompSet: {
      std::size_t head = measure(t.kid(0), p, sz);
      if (head > 0) return head + (sz ? 1 : 0);
      return measure(t.kid(1), p, sz) + 1;
    }
    case TermKind::kWhereSet:
      return measure(t.kid(1), p, sz) + 1;
    case TermKind::kDedup:
    case TermKind::kPromote:
      return measure(t.kid(0), p, sz) + 1;
    default:
      return 0;
  }
}

void collect_bv(const Term& t, std::set<std::string>& out) {
  if (t.is_pure()) return;
  if (t.kind() == TermKind::kCompSet && !t.kid(0).is_pure()) out.insert(t.name());
  for (const Term& k : t.kids()) collect_bv(k, out);
}

// Re-indexes every hole occurring more than once; sigma maps fresh ids back.
Term reindex(const Term& c, std::set<std::string>& avoid, Renaming& sigma) {
  std::map<std::string, int> count;
  for (const auto& [id, pos] : hole_positions(c)) ++count[id];
  Term out = c;
  int next = 1;
  for (const auto& [id, pos] : hole_positions(c)) {
    if (count[id] < 2) continue;
    std::string fresh;
    do fresh = "q" + std::to_string(next++);
    while (avoid.count(fresh));
    avoid.insert(fresh);
    sigma[fresh] = id;
    out = replace_at(out, pos, Term::hole(fresh));
  }
  return out;
}

// Renames every binder of `t` to a fresh name and applies the same renaming
// to the captured variables of the plugged terms, recording them in theta.
Term freshen(const Term& t, const std::map<std::string, std::string>& scope,
             std::set<std::string>& avoid, const Instantiation* eta, Instantiation* theta) {
  switch (t.kind()) {
    case TermKind::kVar: {
      auto it = scope.find(t.name());
      return it == scope.end() ? t : Term::var(it->second, t.span());
    }
    case TermKind::kHole:
      if (eta != nullptr) {
        auto it = eta->find(t.name());
        if (it != eta->end()) {
          Term plugged = freshen(it->second, {}, avoid, nullptr, nullptr);
          (*theta)[t.name()] = rename_free(plugged, scope);
        }
      }
      return t;
    default:
      break;
  }
  if (t.free_vars().empty() && t.holes().empty() && !t.binds()) {
    bool any_binder = false;
    for (const Term& k : t.kids()) any_binder = any_binder || k.size() > 1;
    if (!any_binder) return t;
  }
  std::vector<Term> kids;
  kids.reserve(t.arity());
  std::string name = t.name();
  std::map<std::string, std::string> inner = scope;
  if (t.binds()) {
    name = fresh_name(t.name(), avoid);
    avoid.insert(name);
    inner[t.name()] = name;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    bool scoped = t.binds() && static_cast<int>(i) == t.scoped_child();
    kids.push_back(freshen(t.kid(i), scoped ? inner : scope, avoid, eta, theta));
  }
  Term out = t.with_kids(std::move(kids));
  return t.binds() ? out.with_name(name) : out;
}

bool is_prefix(const Path& prefix, const Path& path) {
  return prefix.size() <= path.size() && std::equal(prefix.begin(), prefix.end(), path.begin());
}

bool rule_in(RuleTag r, std::initializer_list<RuleTag> rules) {
  return std::find(rules.begin(), rules.end(), r) != rules.end();
}

std::optional<Frame> interface_frame(const Term& node, RuleTag rule, int& child) {
  using R = RuleTag;
  switch (node.kind()) {
    case TermKind::kCompSet:
      if (rule_in(rule, {R::kCompEmptySrc, R::kCompSingleton, R::kCompUnionSrc, R::kCompAssoc,
                         R::kCompWhereSrc})) {
        child = 1;
        return Frame::comp_src(node.kid(0), node.name());
      }
      if (rule_in(rule, {R::kCompEmptyHead, R::kCompUnionHead})) {
        child = 0;
        return Frame::comp_head(node.name(), node.kid(1));
      }
      return std::nullopt;
    case TermKind::kWhereSet:
      if (rule_in(rule, {R::kWhereEmpty, R::kWhereUnion, R::kWhereComp, R::kWhereWhere})) {
        child = 1;
        return Frame::where(node.kid(0));
      }
      return std::nullopt;
    case TermKind::kDedup:
      if (rule_in(rule, {R::kDedupEmpty, R::kDedupSingleton, R::kDedupUnion, R::kDedupPromote,
                         R::kDedupComp, R::kDedupWhere})) {
        child = 0;
        return Frame::dedup();
      }
      return std::nullopt;
    case TermKind::kPromote:
      if (rule_in(rule, {R::kPromoteEmpty, R::kPromoteSingleton, R::kPromoteWhere})) {
        child = 0;
        return Frame::promote();
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

Instantiation without(const Instantiation& eta, const std::string& p) {
  Instantiation out = eta;
  out.erase(p);
  return out;
}

std::set<std::string> names_of(const Term& q, const Instantiation& eta) {
  std::set<std::string> avoid = all_names(q);
  for (const auto& [p, m] : eta) {
    std::set<std::string> more = all_names(m);
    avoid.insert(more.begin(), more.end());
  }
  return avoid;
}

std::set<std::string> hole_ids(const Term& q, const Instantiation& eta) {
  std::set<std::string> ids(q.holes().begin(), q.holes().end());
  for (const auto& [p, m] : eta) {
    ids.insert(p);
    ids.insert(m.holes().begin(), m.holes().end());
  }
  return ids;
}

}  // namespace

std::set<std::string> support(const Term& c) { return {c.holes().begin(), c.holes().end()}; }

Term instantiate(const Term& c, const Instantiation& eta) {
  if (c.is_pure() || eta.empty()) return c;
  if (c.kind() == TermKind::kHole) {
    auto it = eta.find(c.name());
    return it == eta.end() ? c : it->second;
  }
  std::vector<Term> kids;
  kids.reserve(c.arity());
  for (const Term& k : c.kids()) kids.push_back(instantiate(k, eta));
  return c.with_kids(std::move(kids));
}

bool is_permutable(const Instantiation& eta) {
  for (const auto& [p, m] : eta)
    for (const std::string& h : m.holes())
      if (eta.count(h)) return false;
  return true;
}

bool holes_linear(const Term& c) { return c.hole_occurrences() == c.holes().size(); }

bool is_continuation(const Term& c) { return holes_linear(c) && parse_cont(c, false); }
bool is_aux_continuation(const Term& c) { return holes_linear(c) && parse_cont(c, true); }

Frame Frame::comp_head(std::string var, Term source) {
  return {Kind::kCompHead, std::move(var), std::move(source)};
}
Frame Frame::comp_src(Term head, std::string var) {
  return {Kind::kCompSrc, std::move(var), std::move(head)};
}
Frame Frame::where(Term cond) { return {Kind::kWhere, "", std::move(cond)}; }
Frame Frame::dedup() { return {Kind::kDedup, "", Term()}; }
Frame Frame::promote() { return {Kind::kPromote, "", Term()}; }

std::set<std::string> Frame::support() const {
  return arg.valid() ? nrc::support(arg) : std::set<std::string>{};
}

std::string Frame::to_string() const {
  switch (kind) {
    case Kind::kCompHead:
      return "for (" + var + " <- " + print_term(arg) + ") _";
    case Kind::kCompSrc:
      return "for (" + var + " <- _) " + print_term(arg);
    case Kind::kWhere:
      return "where " + print_term(arg) + " do _";
    case Kind::kDedup:
      return "dedup _";
    case Kind::kPromote:
      return "promote _";
  }
  return "";
}

Term frame_lift(const Frame& f, const std::string& p) {
  if (f.support().count(p)) throw Error("HoleClash", "hole [" + p + "] already occurs in the frame");
  Term h = Term::hole(p);
  switch (f.kind) {
    case Frame::Kind::kCompHead:
      return Term::comp_set(h, f.var, f.arg);
    case Frame::Kind::kCompSrc:
      return Term::comp_set(f.arg, f.var, h);
    case Frame::Kind::kWhere:
      return Term::where_set(f.arg, h);
    case Frame::Kind::kDedup:
      return Term::dedup(h);
    case Frame::Kind::kPromote:
      return Term::promote(h);
  }
  return h;
}

Term compose(const Term& q, const std::string& p, const Frame& f) {
  if (!support(q).count(p)) throw precondition("hole [" + p + "] is not in the support");
  for (const std::string& r : f.support())
    if (support(q).count(r)) throw Error("HoleClash", "hole [" + r + "] occurs on both sides");
  Term out = instantiate(q, {{p, frame_lift(f, p)}});
  if (!holes_linear(out)) throw Error("HoleClash", "composition is not hole-linear");
  return out;
}

std::size_t measure_len(const Term& q, const std::string& p) {
  require_aux(q);
  return measure(q, p, false);
}
std::size_t measure_sz(const Term& q, const std::string& p) {
  require_aux(q);
  return measure(q, p, true);
}
std::size_t measure_len_total(const Term& q) {
  require_aux(q);
  std::size_t n = 0;
  for (const std::string& p : q.holes()) n += measure(q, p, false);
  return n;
}
std::size_t measure_sz_total(const Term& q) {
  require_aux(q);
  std::size_t n = 0;
  for (const std::string& p : q.holes()) n += measure(q, p, true);
  return n;
}

std::set<std::string> bv(const Term& q) {
  require_aux(q);
  std::set<std::string> out;
  collect_bv(q, out);
  return out;
}

bool is_neutral(const Term& m) {
  switch (m.kind()) {
    case TermKind::kVar:
    case TermKind::kHole:
    case TermKind::kProject:
    case TermKind::kApply:
    case TermKind::kEmptyTest:
    case TermKind::kDedup:
      return true;
    case TermKind::kConst:
      return m.arity() >= 1;
    default:
      return false;
  }
}

std::vector<RenamingStep> renaming_steps(const TypeEnv& env, const Term& q,
                                         const std::set<std::string>& avoid, Calculus calculus) {
  std::vector<RenamingStep> out;
  for (const ReductStep& s : step_all(env, q, calculus)) {
    std::set<std::string> used = avoid;
    used.insert(q.holes().begin(), q.holes().end());
    RenamingStep r{s.rule, s.position, s.after, Term(), {}};
    r.reduct = reindex(s.after, used, r.sigma);
    out.push_back(std::move(r));
  }
  return out;
}

TypeEnv hole_env(const TypeEnv& env, const RenamingStep& step) {
  TypeEnv out = env;
  for (const auto& [fresh, orig] : step.sigma)
    if (const Type* t = env.lookup_hole(orig)) out.bind_hole(fresh, *t);
  return out;
}

Instantiation rename_inst(const Instantiation& eta, const Renaming& sigma) {
  Instantiation out;
  std::set<std::string> candidates;
  for (const auto& [p, m] : eta) candidates.insert(p);
  for (const auto& [p, r] : sigma) candidates.insert(p);
  for (const std::string& p : candidates) {
    auto s = sigma.find(p);
    const std::string& image = s == sigma.end() ? p : s->second;
    auto e = eta.find(image);
    if (e != eta.end()) out[p] = e->second;
  }
  return out;
}

const char* case_name(Classification::Case c) {
  switch (c) {
    case Classification::Case::kContinuation:
      return "continuation";
    case Classification::Case::kSpecial:
      return "special";
    case Classification::Case::kWithinEta:
      return "within-eta";
    case Classification::Case::kInterface:
      return "interface";
  }
  return "?";
}

Classification classify(const TypeEnv& env, const Term& q, const Instantiation& eta,
                        const ReductStep& step, Calculus calculus) {
  if (!is_aux_continuation(q)) throw precondition("not an auxiliary continuation");
  if (!is_permutable(eta)) throw precondition("instantiation is not permutable");
  for (const auto& [p, m] : eta)
    if (!support(q).count(p)) throw precondition("hole [" + p + "] is not in the support");

  auto fail = [&](const std::string& why) {
    return Error("ClassificationFailed",
                 std::string(rule_name(step.rule)) + " @ " + path_to_string(step.position) + ": " + why);
  };

  Classification c;
  c.rule = step.rule;
  c.position = step.position;
  std::set<std::string> avoid = names_of(q, eta);
  c.o = freshen(q, {}, avoid, &eta, &c.theta);
  Term o_theta = instantiate(c.o, c.theta);
  std::optional<Term> reduct = replay(env, o_theta, calculus, step.rule, step.position);
  if (!reduct) throw fail("the step does not replay on the representative");
  c.reduct = *reduct;

  // Inside a plugged term.
  for (const auto& [p, pos] : hole_positions(c.o)) {
    if (!c.theta.count(p) || !is_prefix(pos, step.position)) continue;
    c.kind = Classification::Case::kWithinEta;
    c.theta_prime = c.theta;
    c.theta_prime[p] = subterm_at(c.reduct, pos);
    return c;
  }

  // Within the continuation itself.
  if (std::optional<Term> d = replay(env, c.o, calculus, step.rule, step.position)) {
    const Term& node = subterm_at(c.o, step.position);
    if (step.rule == RuleTag::kCompSingleton && !node.kid(0).is_pure()) {
      c.kind = Classification::Case::kSpecial;
      std::set<std::string> ids = hole_ids(c.o, c.theta);
      c.hole = fresh_name("q", ids);
      c.q1 = replace_at(c.o, step.position, Term::hole(c.hole));
      c.q2 = node.kid(0);
      c.var = node.name();
      c.l = node.kid(1).kid(0);
      c.eta_star = c.theta;
      for (const std::string& p : c.q2.holes()) {
        auto it = c.eta_star.find(p);
        if (it != c.eta_star.end()) it->second = subst(it->second, c.var, c.l);
      }
      c.q_prime = *d;
      return c;
    }
    c.kind = Classification::Case::kContinuation;
    std::set<std::string> ids = hole_ids(c.o, c.theta);
    c.q_prime = reindex(*d, ids, c.sigma);
    return c;
  }

  // At the boundary between the continuation and a plugged term.
  const Term& node = subterm_at(c.o, step.position);
  int child = -1;
  std::optional<Frame> frame = interface_frame(node, step.rule, child);
  if (!frame) throw fail("no frame for the redex");
  const Term& h = node.kid(child);
  if (h.kind() != TermKind::kHole || !c.theta.count(h.name()))
    throw fail("the redex does not meet an instantiated hole");
  c.kind = Classification::Case::kInterface;
  c.hole = h.name();
  c.frame = *frame;
  c.q0 = replace_at(c.o, step.position, Term::hole(c.hole));
  Term plugged = instantiate(frame_lift(c.frame, c.hole), {{c.hole, c.theta.at(c.hole)}});
  TypeEnv at = env_at(env, o_theta, step.position, calculus);
  for (const Contraction& k : contract_root([&] { return at; }, plugged, calculus)) {
    if (k.rule == step.rule) {
      c.m = k.result;
      return c;
    }
  }
  throw fail("the frame does not contract");
}

std::optional<std::string> verify_classification(const TypeEnv& env, const Term& q,
                                                 const Instantiation& eta, const ReductStep& step,
                                                 const Classification& c, Calculus calculus) {
  using Case = Classification::Case;
  Term q_eta = instantiate(q, eta);
  if (!alpha_eq(q_eta, step.before)) return "the step does not start at Q eta";
  if (!alpha_eq(instantiate(c.o, c.theta), q_eta)) return "O theta differs from Q eta";
  if (!alpha_eq(c.o, q)) return "O is not alpha-equivalent to Q";
  if (!alpha_eq(c.reduct, step.after)) return "the representative step differs from the reduct";
  const Term& n = step.after;
  switch (c.kind) {
    case Case::kContinuation: {
      std::optional<Term> d = replay(env, c.o, calculus, c.rule, c.position);
      if (!d || !alpha_eq(rename_holes(c.q_prime, c.sigma), *d)) return "O does not reduce to Q' sigma";
      if (!is_aux_continuation(c.q_prime)) return "Q' is not an auxiliary continuation";
      if (is_continuation(q) && !is_continuation(c.q_prime)) return "Q' is not regular";
      for (const auto& [p, m] : c.theta)
        for (const std::string& h : m.holes())
          if (c.sigma.count(h)) return "sigma touches the support of theta";
      // Holes outside dom(theta) that the step duplicated stay re-indexed in
      // Q' theta^sigma, so the reduct is matched after applying sigma.
      Term rebuilt = instantiate(c.q_prime, rename_inst(c.theta, c.sigma));
      if (!alpha_eq(rename_holes(rebuilt, c.sigma), n)) return "(Q' theta^sigma) sigma differs from the reduct";
      return std::nullopt;
    }
    case Case::kSpecial: {
      if (is_continuation(q)) return "special case for a regular continuation";
      Term single = Term::singleton_set(c.l);
      Term rebuilt = instantiate(compose(c.q1, c.hole, Frame::comp_head(c.var, single)), {{c.hole, c.q2}});
      if (!alpha_eq(rebuilt, c.o)) return "O is not (Q1 o F)[Q2]";
      Term q_prime = instantiate(c.q1, {{c.hole, subst(c.q2, c.var, c.l)}});
      if (!alpha_eq(q_prime, c.q_prime)) return "Q' is not Q1[Q2[L/x]]";
      if (!alpha_eq(instantiate(q_prime, c.eta_star), n)) return "Q' eta* differs from the reduct";
      return std::nullopt;
    }
    case Case::kWithinEta: {
      bool changed = false;
      for (const auto& [p, m] : c.theta) {
        const Term& m2 = c.theta_prime.at(p);
        if (alpha_eq(m, m2)) continue;
        if (changed) return "more than one plugged term changed";
        changed = true;
        bool steps = false;
        for (const auto& [id, hp] : hole_positions(c.o)) {
          if (id != p) continue;
          TypeEnv at = env_at(env, instantiate(c.o, c.theta), hp, calculus);
          Path rel(c.position.begin() + static_cast<long>(hp.size()), c.position.end());
          std::optional<Term> r = replay(at, m, calculus, c.rule, rel);
          steps = r && alpha_eq(*r, m2);
        }
        if (!steps) return "theta does not step to theta'";
      }
      if (!changed) return "no plugged term changed";
      if (!alpha_eq(instantiate(c.o, c.theta_prime), n)) return "O theta' differs from the reduct";
      return std::nullopt;
    }
    case Case::kInterface: {
      if (!support(c.q0).count(c.hole)) return "p is not in the support of Q0";
      if (!alpha_eq(compose(c.q0, c.hole, c.frame), c.o)) return "O is not Q0 o_p F";
      Term plugged = instantiate(frame_lift(c.frame, c.hole), {{c.hole, c.theta.at(c.hole)}});
      TypeEnv at = env_at(env, instantiate(c.o, c.theta), c.position, calculus);
      bool fires = false;
      for (const Contraction& k : contract_root([&] { return at; }, plugged, calculus))
        fires = fires || (k.rule == c.rule && alpha_eq(k.result, c.m));
      if (!fires) return "F^p[theta(p)] does not contract to M";
      Term rebuilt = instantiate(instantiate(c.q0, {{c.hole, c.m}}), without(c.theta, c.hole));
      if (!alpha_eq(rebuilt, n)) return "Q0[p -> M] theta without p differs from the reduct";
      return std::nullopt;
    }
  }
  return "unknown case";
}

ReductionGraph reduction_graph(const TypeEnv& env, const Term& m, Calculus calculus,
                               std::size_t cap) {
  ReductionGraph g;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> stack;
  auto intern = [&](const Term& t) -> std::pair<std::size_t, bool> {
    std::string key = alpha_key(t);
    auto it = index.find(key);
    if (it != index.end()) return {it->second, false};
    if (g.nodes.size() >= cap)
      throw Error("CapExceeded", "more than " + std::to_string(cap) + " reachable terms");
    index.emplace(std::move(key), g.nodes.size());
    g.nodes.push_back(t);
    g.succ.emplace_back();
    return {g.nodes.size() - 1, true};
  };
  intern(m);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (const ReductStep& s : step_all(env, g.nodes[i], calculus)) {
      std::size_t j = intern(s.after).first;
      g.succ[i].push_back(j);
    }
  }
  // Longest paths by iterative post-order; a cycle would mean non-termination.
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  constexpr std::size_t kOnStack = static_cast<std::size_t>(-2);
  g.maxred.assign(g.nodes.size(), kUnset);
  std::vector<std::pair<std::size_t, std::size_t>> work{{0, 0}};
  g.maxred[0] = kOnStack;
  while (!work.empty()) {
    auto& [v, next] = work.back();
    if (next < g.succ[v].size()) {
      std::size_t w = g.succ[v][next++];
      if (g.maxred[w] == kOnStack) throw Error("CycleDetected", "reduction cycle");
      if (g.maxred[w] == kUnset) {
        g.maxred[w] = kOnStack;
        work.emplace_back(w, 0);
      }
      continue;
    }
    std::size_t best = 0;
    for (std::size_t w : g.succ[v]) best = std::max(best, g.maxred[w] + 1);
    g.maxred[v] = best;
    work.pop_back();
  }
  return g;
}

std::size_t maxred(const TypeEnv& env, const Term& m, Calculus calculus, std::size_t cap) {
  return reduction_graph(env, m, calculus, cap).maxred.at(0);
}

std::size_t maxred(const TypedTerm& m, std::size_t cap) {
  return maxred(m.env, m.term, m.calculus, cap);
}

}  // namespace nrc
