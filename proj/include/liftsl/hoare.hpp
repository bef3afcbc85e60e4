#pragma once

#include <functional>
#include <map>
#include <set>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "liftsl/assertion.hpp"
#include "liftsl/semantics.hpp"

namespace liftsl {

// ---------------------------------------------------------------------------
// Commands

/// Heap-independent boolean guard.
struct Guard;
using GuardPtr = std::shared_ptr<const Guard>;

struct Guard {
  enum class Kind { Cmp, And, Or, Not, True, False };
  Kind kind = Kind::True;
  CmpOp op = CmpOp::Eq;
  ExprPtr lhs, rhs;  // Cmp
  GuardPtr a, b;     // And/Or use both, Not uses a
};

GuardPtr g_cmp(CmpOp op, ExprPtr l, ExprPtr r);
GuardPtr g_and(GuardPtr a, GuardPtr b);
GuardPtr g_or(GuardPtr a, GuardPtr b);
GuardPtr g_not(GuardPtr a);
GuardPtr g_const(bool v);

bool eval(const Guard& g, const VarEnv& eta);
/// The guard (or its negation) as a variable-free assertion of comparisons.
Assertion guard_assertion(const Guard& g, bool negated = false);
std::string to_string(const Guard& g);

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

struct Command {
  enum class Kind { Call, Write, Read, Seq, If, Skip };
  Kind kind = Kind::Skip;
  /// Operation name for Call, bound variable for Read.
  std::string name;
  ExprPtr loc, value;  // Write: [loc] := value. Read: let name = [loc] in first
  CommandPtr first, second;
  GuardPtr guard;
};

CommandPtr c_call(std::string k);
CommandPtr c_write(ExprPtr loc, ExprPtr value);
CommandPtr c_read(std::string y, ExprPtr loc, CommandPtr body);
CommandPtr c_seq(CommandPtr a, CommandPtr b);
CommandPtr c_if(GuardPtr b, CommandPtr then_c, CommandPtr else_c);
CommandPtr c_skip();

bool same_command(const Command& a, const Command& b);
std::set<std::string> free_vars(const Command& c);
std::string to_string(const Command& c);

/// Parses a command. Heap reads inside expressions, as in `[1] := [1] + 1`,
/// become `let` bindings of fresh variables. Sequencing is right-nested;
/// `let` bodies extend as far right as possible; `if` branches are single
/// commands unless parenthesized.
CommandPtr parse_command(std::string_view text, int first_line = 1);

// ---------------------------------------------------------------------------
// Execution

using Transformer = std::function<std::optional<Heap>(const Heap&)>;

/// Meanings of module operations; nullopt output is a memory error.
struct ModuleImpl {
  std::map<std::string, Transformer> ops;
};

/// Operations given as commands, run with an empty module environment.
ModuleImpl module_from_commands(const std::map<std::string, CommandPtr>& ops);

/// ⟦c⟧ on h; nullopt is err. Throws ShapeError for an unknown operation or
/// an unbound variable.
std::optional<Heap> exec(const Command& c, const VarEnv& eta, const ModuleImpl& u, const Heap& h);

// ---------------------------------------------------------------------------
// Proofs

struct Triple {
  Assertion pre;
  std::string op;
  Assertion post;
};

using TripleCtx = std::vector<Triple>;

/// Throws ShapeError on repeated operation names.
void validate_context(const TripleCtx& gamma);

struct Derivation {
  enum class Rule { Consequence, Frame, Exists, Call, Write, Read, Seq, If };
  Rule rule = Rule::Call;
  Assertion pre, post;
  CommandPtr cmd;
  std::vector<Derivation> premises;
  /// The framed assertion for Frame.
  Assertion frame;
  /// The bound variable for Exists and Read.
  std::string var;
};

const char* to_string(Derivation::Rule r);

struct ProofVerdict {
  bool accepted = false;
  /// Path of premise indices from the root to the rejected node.
  std::vector<std::size_t> node;
  Derivation::Rule rule = Derivation::Rule::Call;
  std::string reason;
  /// Consequence steps checked, for reports.
  std::size_t consequences = 0;

  /// "Accepted (bounded)" or "Rejected at <rule> node <path>: <reason>".
  std::string summary() const;
};

struct ProofOptions {
  /// Budget for the bounded unary search on each ⊨¹ premise.
  SearchBudget budget{3, {0}, 2, 2, 1};
  ValueDomain dom{};
  /// Values tried for free normal variables of consequence premises.
  std::vector<Val> var_values{0, 1};
};

/// Checks every rule instance. Consequence nodes need chk on both sides
/// and no unary counterexample within budget; acceptance is bounded.
ProofVerdict check_proof(const TripleCtx& gamma, const Derivation& d, const ProofOptions& opts = {});

/// Straight-line annotated program: assertions in braces around commands
/// separated by `;`, e.g. "{P} k1; {Q} {Q'} k2 {R}". Two adjacent
/// assertions mark a consequence step into the following command (or out
/// of the preceding one at the end). Calls may be framed on the right:
/// {P * R} k {Q * R} for a context triple {P} k {Q}.
Derivation build_derivation(const TripleCtx& gamma, std::string_view annotated,
                            const std::set<std::string>& avars);

// ---------------------------------------------------------------------------
// Relational validity

struct ValidityBudget {
  /// Input heaps use locations 1..max_locs and these values.
  Loc max_locs = 3;
  std::vector<Val> values{-2, -1, 0, 1, 2};
  /// Largest input heaps considered.
  std::size_t max_cells = 3;
};

struct Violation {
  /// Index into gamma, or -1 for the client triple.
  int triple = -1;
  Heap f, g;            // inputs
  Heap frame_f, frame_g;  // residue generating the principal frame
  std::optional<Heap> out_f, out_g;  // nullopt is err
};

struct ValidityReport {
  bool violated = false;
  std::optional<Violation> violation;
  std::size_t pairs_checked = 0;
  std::size_t frames_checked = 0;

  std::string summary(const TripleCtx& gamma) const;
};

/// Bounded test of (η, ρ, (u1, u2)) ⊨² {pre} c {post}, after first checking
/// each context triple the same way. Frames range over the principal
/// relations generated by residues of the inputs.
ValidityReport two_validity_test(const TripleCtx& gamma, const ModuleImpl& u1, const ModuleImpl& u2,
                                 const AssertEnv& rho, const VarEnv& eta, const Assertion& pre,
                                 const Command& c, const Assertion& post, const ValidityBudget& budget,
                                 const ValueDomain& dom);

/// One triple only, without the context check.
ValidityReport triple_validity(const ModuleImpl& u1, const ModuleImpl& u2, const AssertEnv& rho,
                               const VarEnv& eta, const Assertion& pre, const Command& c,
                               const Assertion& post, const ValidityBudget& budget, const ValueDomain& dom);

}  // namespace liftsl
