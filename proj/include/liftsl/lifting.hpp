#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liftsl/layout.hpp"
#include "liftsl/normalize.hpp"
#include "liftsl/semantics.hpp"

namespace liftsl {

enum class Criterion { Shadow, Balloon, Lonely };
const char* to_string(Criterion c);

struct ShadowResult {
  bool holds = false;
  std::string diagnostic;
};

struct BalloonResult {
  std::optional<std::vector<std::string>> set;
  /// Too many variables for the exhaustive subset search; undecided.
  bool budget_exceeded = false;
  std::string diagnostic;
};

struct LonelyResult {
  bool holds = false;
  std::string diagnostic;
};

ShadowResult shadow_criterion(const LayoutGraph& g);
BalloonResult balloon_criterion(const LayoutGraph& g, std::size_t max_vars = 16);
LonelyResult lonely_criterion(const LayoutGraph& g);

struct LiftVerdict {
  bool lifts = false;
  /// No criterion holds and the Balloon search declined for size.
  bool undecided = false;
  Criterion criterion = Criterion::Shadow;  // meaningful when lifts
  std::vector<std::string> balloon_set;     // when criterion == Balloon
  ShadowResult shadow;
  BalloonResult balloon;
  LonelyResult lonely;

  /// "Lifts(Shadow)", "Lifts(Balloon({b}))", "NoGuarantee", "Undecided(budget)".
  std::string label() const;
};

/// First satisfied criterion in the order Shadow, Balloon, Lonely.
LiftVerdict lift_check(const LayoutGraph& g);
LiftVerdict lift_check(const ImplicationForm& impl);

/// Note attached to every NoGuarantee report.
extern const char* const kNoGuaranteeNote;

/// Variables that occur in some disjunct but in no conjunct. The implication
/// form excludes them; a layout with any is outside the reach of the
/// completeness argument (sending such a variable to the empty relation
/// deletes its disjuncts at every arity).
std::vector<std::string> right_only_variables(const LayoutGraph& g);

struct ChkReport {
  bool ok = false;
  bool lhs_simple = false;
  bool rhs_simple = false;
  std::vector<ImplicationForm> family;
  std::vector<LiftVerdict> verdicts;
  std::string reason;

  /// "LIFTS (Balloon)" or "DOES NOT LIFT (...)".
  std::string headline() const;
};

/// Both phases of the consequence-rule gate: simplification, then the
/// criteria on every implication of the reduced family.
ChkReport chk(const Assertion& phi, const Assertion& psi);

/// Binary refutation of a concrete implication plus bounded evidence that
/// it holds unarily.
struct CounterexamplePackage {
  ImplicationForm impl;
  VarEnv eta;
  /// Domain for interpreting the bases (and the witness claims).
  ValueDomain dom;
  SearchBudget unary_budget;
  std::size_t unary_candidates = 0;
  AssertEnv binary_rho{2, {}};
  HeapTuple witness;
  std::string origin;
};

struct RecheckResult {
  bool witness_in_lhs = false;
  bool witness_in_rhs = true;
  bool unary_clear = false;
  bool ok() const { return witness_in_lhs && !witness_in_rhs && unary_clear; }
};

/// Re-derives every claim of the package from the semantics.
RecheckResult recheck(const CounterexamplePackage& p);

struct WitnessSearchOptions {
  /// Budget for the bounded unary search backing each package.
  SearchBudget unary_budget{3, {0}, 2, 2, 1};
  /// Budget for binary searches when the direct construction does not apply.
  SearchBudget binary_budget{3, {0}, 2, 1, 1};
  /// Heaps checked for the parametricity condition of a candidate.
  SearchBudget pc_budget{3, {0}, 1, 3, 1};
  /// Environments tried when building a binary refutation from a
  /// parametricity violation with more than two occurrences in a conjunct.
  std::size_t max_occurrence_envs = 20000;
  ValueDomain dom{};
  std::size_t max_candidates = 20000;
};

struct WitnessSearchReport {
  std::optional<CounterexamplePackage> package;
  bool criteria_hold = false;  // search skipped: the layout lifts
  bool outside_form = false;   // search skipped: right_only_variables is non-empty
  std::size_t candidates = 0;
  std::string note;
};

/// Looks for concrete bases with the given layout that are valid unarily
/// (within budget) and refuted binarily. If `impl` is given, its own bases
/// are tried first.
WitnessSearchReport witness_search(const LayoutGraph& g, const ImplicationForm* impl = nullptr,
                                   const WitnessSearchOptions& opts = {});

/// Bases tried for each slot by witness_search, in order.
std::vector<Assertion> witness_templates();

}  // namespace liftsl
