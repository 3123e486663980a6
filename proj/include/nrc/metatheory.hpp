#ifndef NRC_METATHEORY_HPP_
#define NRC_METATHEORY_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nrc/rewrite.hpp"
#include "nrc/term.hpp"
#include "nrc/typing.hpp"

namespace nrc {

/// Hole id -> term (eta, theta).
using Instantiation = std::map<std::string, Term>;
/// Hole id -> hole id (sigma); identity off its domain.
using Renaming = std::map<std::string, std::string>;

std::set<std::string> support(const Term& c);
/// Simultaneous, capture-permitting plugging: binders of `c` may capture
/// free variables of the plugged terms.
Term instantiate(const Term& c, const Instantiation& eta);
bool is_permutable(const Instantiation& eta);
/// No hole occurs twice.
bool holes_linear(const Term& c);

/// Continuations K (pure heads) and auxiliary continuations Q over the set
/// constructs plus dedup and promote. A hole-free term always parses as a
/// pure term.
bool is_continuation(const Term& c);
bool is_aux_continuation(const Term& c);

/// One-layer continuation with a shallow hole.
struct Frame {
  enum class Kind { kCompHead, kCompSrc, kWhere, kDedup, kPromote };
  Kind kind = Kind::kWhere;
  std::string var;  // comprehension binder
  Term arg;         // source (kCompHead), head (kCompSrc), condition (kWhere)

  /// {box | var <- source}
  static Frame comp_head(std::string var, Term source);
  /// {head | var <- box}
  static Frame comp_src(Term head, std::string var);
  static Frame where(Term cond);
  static Frame dedup();
  static Frame promote();

  std::set<std::string> support() const;
  std::string to_string() const;
};

/// F^p. Throws HoleClash when p occurs in the frame.
Term frame_lift(const Frame& f, const std::string& p);
/// Q o_p F = Q[p -> F^p]. Throws PreconditionViolated when p is not in
/// supp(Q) and HoleClash when the result would not be hole-linear.
Term compose(const Term& q, const std::string& p, const Frame& f);

/// Nesting depth of hole p. Subterms without p measure 0; a comprehension
/// head adds nothing to the length and one to the size. Throws
/// NotAContinuation unless q is an auxiliary continuation.
std::size_t measure_len(const Term& q, const std::string& p);
std::size_t measure_sz(const Term& q, const std::string& p);
/// Sums over supp(q).
std::size_t measure_len_total(const Term& q);
std::size_t measure_sz_total(const Term& q);

/// Variables bound over holes. Throws NotAContinuation.
std::set<std::string> bv(const Term& q);

/// x, holes, c(M..) with n >= 1, M.l, M N, empty M, dedup M.
bool is_neutral(const Term& m);

struct RenamingStep {
  RuleTag rule;
  Path position;
  Term plain;     // the ordinary reduct C
  Term reduct;    // Q' with Q' sigma = C
  Renaming sigma;
};

/// Every renaming reduction of the context `q`: each ordinary reduct with
/// its duplicated holes re-indexed by fresh ids (avoiding `avoid` and
/// supp(q)). `env` types the holes of q; fresh holes inherit their types
/// through `hole_env`.
std::vector<RenamingStep> renaming_steps(const TypeEnv& env, const Term& q,
                                         const std::set<std::string>& avoid,
                                         Calculus calculus = Calculus::kDeltaIota);
/// `env` with every fresh hole of `step` typed like its image under sigma.
TypeEnv hole_env(const TypeEnv& env, const RenamingStep& step);

/// eta^sigma(p) = eta(sigma(p)) whenever sigma(p) is in dom(eta).
Instantiation rename_inst(const Instantiation& eta, const Renaming& sigma);

/// Witnesses of one case of the classification of a step of Q eta.
/// All witnesses refer to the representative (O, theta): O =alpha Q with
/// every binder fresh, theta equal to eta up to the matching renaming of
/// captured variables.
struct Classification {
  enum class Case { kContinuation, kSpecial, kWithinEta, kInterface };
  Case kind = Case::kContinuation;
  Term o;
  Instantiation theta;
  Term reduct;  // the step's result on O theta
  RuleTag rule = RuleTag::kBeta;
  Path position;

  // kContinuation: O ~>sigma Q'.
  Term q_prime;
  Renaming sigma;
  // kSpecial: O = (Q1 o_q {box | x <- {L}})[q -> Q2], result Q' = Q1[q -> Q2[L/x]].
  Term q1, q2, l;
  std::string hole;  // q (kSpecial) or p (kInterface)
  std::string var;
  Instantiation eta_star;
  // kWithinEta: theta ~> theta'.
  Instantiation theta_prime;
  // kInterface: O = Q0 o_p F and F^p[p -> theta(p)] ~> M.
  Term q0, m;
  Frame frame;
};

const char* case_name(Classification::Case c);

/// Throws PreconditionViolated (Q not an auxiliary continuation, eta not
/// permutable, dom(eta) not within supp(Q)) or ClassificationFailed.
Classification classify(const TypeEnv& env, const Term& q, const Instantiation& eta,
                        const ReductStep& step, Calculus calculus = Calculus::kDeltaIota);

/// Checks the equations of the returned case; nullopt when they all hold,
/// otherwise the first failing equation.
std::optional<std::string> verify_classification(const TypeEnv& env, const Term& q,
                                                 const Instantiation& eta, const ReductStep& step,
                                                 const Classification& c,
                                                 Calculus calculus = Calculus::kDeltaIota);

/// Reduction graph reachable from a term, with longest-path lengths.
struct ReductionGraph {
  std::vector<Term> nodes;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::size_t> maxred;
};

inline constexpr std::size_t kDefaultMaxredCap = 100000;

/// Throws CapExceeded when more than `cap` distinct terms are reachable.
ReductionGraph reduction_graph(const TypeEnv& env, const Term& m, Calculus calculus,
                               std::size_t cap = kDefaultMaxredCap);
std::size_t maxred(const TypeEnv& env, const Term& m, Calculus calculus,
                   std::size_t cap = kDefaultMaxredCap);
std::size_t maxred(const TypedTerm& m, std::size_t cap = kDefaultMaxredCap);

}  // namespace nrc

#endif  // NRC_METATHEORY_HPP_
